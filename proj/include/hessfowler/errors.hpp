#pragma once

#include <stdexcept>
#include <string>

namespace hf {

// Error taxonomy shared by the library and the CLI exit-code mapping.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid problem data: a parameter constraint or argument range was violated.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Operation requested outside the dynamical regime it is defined for.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed: blow-up, overflow, tolerance not reachable.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A root bracket could not be established.
class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

// The integrated range is too short for the requested statistic.
class InsufficientRangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace hf
