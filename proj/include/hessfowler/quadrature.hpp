#pragma once

#include <array>
#include <cmath>

#include "hessfowler/errors.hpp"

namespace hf {

// 4-point Gauss-Legendre reference rule on [-1, 1].
inline constexpr std::array<double, 4> kGL4Nodes = {
    -0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
inline constexpr std::array<double, 4> kGL4Weights = {
    0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

template <class F>
double gauss4(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += kGL4Weights[i] * f(c + h * kGL4Nodes[i]);
  return h * s;
}

template <class F>
double gauss4_panels(F&& f, double a, double b, int panels) {
  if (panels < 1) throw DomainError("gauss4_panels: need at least one panel");
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int j = 0; j < panels; ++j) s += gauss4(f, a + j * h, a + (j + 1) * h);
  return s;
}

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson to an absolute tolerance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace hf
