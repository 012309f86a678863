#pragma once

#include <cmath>
#include <utility>

#include "hessfowler/errors.hpp"

namespace hf {

// Bisection on a sign-changing bracket.  Runs until the interval width drops
// below rel_tol * max(1, |x|) or the iteration cap is hit.
template <class F>
double bisect(F&& f, double a, double b, double rel_tol = 1e-15, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb))
    throw BracketError("bisect: endpoints do not bracket a sign change");
  for (int i = 0; i < max_iter; ++i) {
    const double m = 0.5 * (a + b);
    if (b - a < rel_tol * std::max(1.0, std::fabs(m))) return m;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace hf
