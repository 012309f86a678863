#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "hessfowler/errors.hpp"

namespace hf {

// Minimal exact rational on 64-bit terms.  Covers what the exponent and
// threshold formulas need: construction from integers, reduction, conversion
// to double at the output boundary, and printing.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0) throw DomainError("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
};

namespace detail {

inline std::int64_t checked_mul_i64(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw NumericError("exact rational arithmetic overflowed 64 bits");
  return out;
}

}  // namespace detail

// Exact binomial coefficient.  Each intermediate step holds binom(n-k+i, i),
// so the running division is always exact.
inline std::int64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw DomainError("binomial: need 0 <= k <= n");
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = detail::checked_mul_i64(r, n - k + i);
    r /= i;
  }
  return r;
}

// Exact integer power with overflow detection.
inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r = detail::checked_mul_i64(r, b);
  return r;
}

}  // namespace hf
