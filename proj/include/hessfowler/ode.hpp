#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "hessfowler/errors.hpp"

namespace hf {

// Embedded Dormand-Prince 5(4) pair for a 2-state system, with every accepted
// step recorded for cubic-Hermite dense output.  The error norm is measured
// against the euclidean size of the state vector, with a tiny absolute floor,
// so decaying solutions stay resolved relative to their own amplitude.
struct Dp54Result {
  std::vector<double> t;
  std::vector<std::array<double, 2>> y;
  std::vector<std::array<double, 2>> dy;
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
};

struct Dp54Options {
  double rel_tol = 1e-10;
  double abs_floor = 1e-280;
  double h_init = 1e-3;
  double h_max = 1e-2;
  double h_min = 1e-14;
  std::size_t max_steps = 50'000'000;
};

template <class Rhs, class StepCheck>
Dp54Result dp54_integrate(Rhs&& rhs, double t0, double t1, std::array<double, 2> y0,
                          const Dp54Options& opt, StepCheck&& check) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto norm2 = [](const std::array<double, 2>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1]);
  };

  Dp54Result out;
  double t = t0;
  std::array<double, 2> y = y0;
  std::array<double, 2> k1;
  rhs(t, y, k1);
  out.t.push_back(t);
  out.y.push_back(y);
  out.dy.push_back(k1);

  double h = std::min(opt.h_init, opt.h_max);
  if (t1 <= t0) throw DomainError("dp54: need t1 > t0");

  std::array<double, 2> k2, k3, k4, k5, k6, k7, yt, y5;
  for (std::size_t step = 0; step < opt.max_steps && t < t1; ++step) {
    h = std::min(h, t1 - t);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, yt, k2);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, yt, k3);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, yt, k4);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, yt, k5);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, yt, k6);
    for (int i = 0; i < 2; ++i)
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, y5, k7);

    const double sc =
        opt.abs_floor + opt.rel_tol * std::max(norm2(y), norm2(y5));
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
      err += ei * ei;
    }
    err = std::sqrt(0.5 * err) / sc;

    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      check(t, y);
      out.t.push_back(t);
      out.y.push_back(y);
      out.dy.push_back(k1);
      ++out.n_accepted;
    } else {
      ++out.n_rejected;
    }
    const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, fac));
    h = std::min(h, opt.h_max);
    if (h < opt.h_min && t < t1)
      throw NumericError("dp54: step size collapsed below h_min");
  }
  if (t < t1) throw NumericError("dp54: step budget exhausted before reaching t1");
  return out;
}

// Cubic Hermite basis evaluation on one interval.
inline double hermite_value(double t, double t0, double t1, double y0, double y1, double d0,
                            double d1) {
  const double h = t1 - t0;
  const double th = (t - t0) / h;
  const double th2 = th * th, th3 = th2 * th;
  return (2 * th3 - 3 * th2 + 1) * y0 + (th3 - 2 * th2 + th) * h * d0 +
         (-2 * th3 + 3 * th2) * y1 + (th3 - th2) * h * d1;
}

inline double hermite_deriv(double t, double t0, double t1, double y0, double y1, double d0,
                            double d1) {
  const double h = t1 - t0;
  const double th = (t - t0) / h;
  const double th2 = th * th;
  return (6 * th2 - 6 * th) * y0 / h + (3 * th2 - 4 * th + 1) * d0 +
         (6 * th - 6 * th2) * y1 / h + (3 * th2 - 2 * th) * d1;
}

}  // namespace hf
