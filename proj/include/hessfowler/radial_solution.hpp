#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "hessfowler/errors.hpp"
#include "hessfowler/params.hpp"

namespace hf {

enum class SolutionSource { Shooting, Picard, ClosedForm };

inline const char* source_name(SolutionSource s) {
  switch (s) {
    case SolutionSource::Shooting: return "shooting";
    case SolutionSource::Picard: return "picard";
    case SolutionSource::ClosedForm: return "closed_form";
  }
  return "?";
}

// A bounded radial solution profile on [0, 1]: u <= 0, nondecreasing, u(1) = 0.
struct RadialSolution {
  ProblemParams params;
  double lambda_physical = 0.0;
  double origin_value = 0.0;  // u(0), the bifurcation-diagram ordinate
  SolutionSource source = SolutionSource::ClosedForm;
  std::vector<double> r;
  std::vector<double> u;

  // Cubic 4-point Lagrange interpolation on the stored grid.
  double eval(double x) const {
    const std::size_t m = r.size();
    if (m < 4) throw DomainError("RadialSolution::eval: need at least 4 grid points");
    if (x <= r.front()) return u.front();
    if (x >= r.back()) return u.back();
    const std::size_t hi = std::lower_bound(r.begin(), r.end(), x) - r.begin();
    std::size_t i0 = (hi >= 2) ? hi - 2 : 0;
    if (i0 + 3 >= m) i0 = m - 4;
    double acc = 0.0;
    for (std::size_t j = i0; j < i0 + 4; ++j) {
      double lj = 1.0;
      for (std::size_t l = i0; l < i0 + 4; ++l) {
        if (l == j) continue;
        lj *= (x - r[l]) / (r[j] - r[l]);
      }
      acc += lj * u[j];
    }
    return acc;
  }
};

}  // namespace hf
