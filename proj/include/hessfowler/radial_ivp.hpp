#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "hessfowler/ode.hpp"
#include "hessfowler/params.hpp"
#include "hessfowler/quadrature.hpp"

namespace hf {

// Leading-order behaviour of the rescaled initial value problem
//
//   (s^(n-k) v'(s)^k)' = lt * s^(n-1) (-v)^q,   v(0) = -1, v'(0) = 0,
//
// near s = 0.  The flux carries its next-order correction so that it agrees
// with the exact integral to O(s^(n+4)).
struct SeriesStart {
  double v = 0.0;
  double vprime = 0.0;
  double flux = 0.0;
};

inline SeriesStart series_start_forced(const ProblemParams& p, double s, double forcing) {
  const double c1 = std::pow(forcing / p.n, 1.0 / p.k);
  SeriesStart out;
  out.v = -1.0 + 0.5 * c1 * s * s;
  out.vprime = c1 * s;
  const double corr = p.q * c1 * p.n / (2.0 * (p.n + 2.0));
  out.flux = forcing * std::pow(s, p.n) / p.n * (1.0 - corr * s * s);
  return out;
}

inline SeriesStart series_start(const ProblemParams& p, double s) {
  auto bad = validate_params(p.n, p.k, p.q);
  if (!bad.empty()) throw DomainError("series_start: " + bad.front());
  return series_start_forced(p, s, lambda_tilde(p.n, p.k, p.q));
}

namespace detail {

// Right side of the autonomous log-deviation system; exact at the fixed point
// and free of subtractions between near-equal quantities everywhere else.
inline void log_deviation_rhs(double tau, double alpha, int k, double q, double L, double M,
                              double& dL, double& dM) {
  dL = -tau * std::expm1(M / k - L);
  dM = alpha * std::expm1(q * L - M);
}

}  // namespace detail

struct IvpOptions {
  double s_max = 1e4;
  double tol = 1e-10;
  double s_init = 1e-4;
  // Replaces the multiplier lambda_tilde in the equation; testing hook for the
  // scaling identity.  Default: the lambda_tilde of the parameters.
  std::optional<double> forcing;
};

struct VSample {
  double s = 0.0;
  double t = 0.0;  // log s
  double v = 0.0;
  double vprime = 0.0;
  double flux = 0.0;
};

// Integrated solution of the rescaled initial value problem.
//
// Internally the state is the log-relative deviation (L, M) of (v, flux) from
// the exact power-law solution -s^(-tau): with L = log(-v s^tau / C) and
// M = log(flux * s^(-a/(q-k)) / (C^k tau^k)), C = (lt/forcing)^(1/(q-k)), the
// system becomes autonomous,
//
//   dL/dt = -tau * (e^(M/k - L) - 1),
//   dM/dt = (a/(q-k)) * (e^(qL - M) - 1),        t = log s,
//
// with fixed point (0,0).  Evaluated with expm1 the right side is exact at the
// fixed point, and the log form keeps both the approach to the power law and
// the small-s onset (where flux ~ s^(n - a/(q-k)) makes M large and negative)
// resolved relative to their own scale; (v, flux) are recovered from (L, M)
// without ever forming 1 + e^M style sums that would quantize near zero.
struct VProfile {
  ProblemParams params;
  DerivedConstants consts;
  double s_init = 0.0;
  double s_max = 0.0;
  double tol = 0.0;
  double forcing = 0.0;
  double scale_c = 1.0;  // C above; 1 for the default forcing
  double t0 = 0.0;
  double t1 = 0.0;

  struct Node {
    double t, L, M, dL, dM;
  };
  std::vector<Node> nodes;

  struct Dev {
    double L, M, dL, dM;
  };

  // Hermite interpolation of the log-deviation state; t must be >= t0.
  Dev dev_at(double t) const {
    if (nodes.empty()) throw NumericError("VProfile: empty");
    if (t <= nodes.front().t) {
      const Node& n0 = nodes.front();
      return {n0.L, n0.M, n0.dL, n0.dM};
    }
    if (t >= nodes.back().t) {
      const Node& n1 = nodes.back();
      return {n1.L, n1.M, n1.dL, n1.dM};
    }
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t,
                               [](const Node& n, double x) { return n.t < x; });
    const Node& b = *it;
    const Node& a = *(it - 1);
    Dev d;
    d.L = hermite_value(t, a.t, b.t, a.L, b.L, a.dL, b.dL);
    d.M = hermite_value(t, a.t, b.t, a.M, b.M, a.dM, b.dM);
    d.dL = hermite_deriv(t, a.t, b.t, a.L, b.L, a.dL, b.dL);
    d.dM = hermite_deriv(t, a.t, b.t, a.M, b.M, a.dM, b.dM);
    return d;
  }

  bool in_series_range(double s) const { return s < s_init; }

  double v_at(double s) const {
    if (s < 0.0) throw DomainError("v_at: need s >= 0");
    if (in_series_range(s)) return series_start_forced(params, s, forcing).v;
    const double t = std::log(s);
    const Dev d = dev_at(t);
    return -scale_c * std::exp(d.L - consts.tau * t);
  }

  double vprime_at(double s) const {
    if (s < 0.0) throw DomainError("vprime_at: need s >= 0");
    if (in_series_range(s)) return series_start_forced(params, s, forcing).vprime;
    const double t = std::log(s);
    const Dev d = dev_at(t);
    return scale_c * consts.tau * std::exp(d.M / params.k - (consts.tau + 1.0) * t);
  }

  double flux_at(double s) const {
    if (s < 0.0) throw DomainError("flux_at: need s >= 0");
    if (in_series_range(s)) return series_start_forced(params, s, forcing).flux;
    const double t = std::log(s);
    const Dev d = dev_at(t);
    const double alpha = consts.a / (params.q - params.k);
    return std::pow(scale_c * consts.tau, params.k) * std::exp(d.M + alpha * t);
  }

  VSample sample_at(double s) const {
    return {s, s > 0.0 ? std::log(s) : -std::numeric_limits<double>::infinity(), v_at(s),
            vprime_at(s), flux_at(s)};
  }

  // One public sample per accepted step.
  std::vector<VSample> samples() const {
    std::vector<VSample> out;
    out.reserve(nodes.size());
    for (const Node& n : nodes) out.push_back(sample_at(std::exp(n.t)));
    return out;
  }
};

inline VProfile integrate_ivp(const ProblemParams& p, const IvpOptions& opt = {}) {
  auto bad = validate_params(p.n, p.k, p.q);
  if (!bad.empty()) throw DomainError("integrate_ivp: " + bad.front());
  const DerivedConstants dc = derive_constants(p);
  if (p.q < dc.qs) throw RegimeError("integrate_ivp: global continuation needs q >= q_star");
  if (!(opt.s_init > 0.0) || !(opt.s_max > opt.s_init))
    throw DomainError("integrate_ivp: need 0 < s_init < s_max");
  if (!(opt.tol > 0.0) || opt.tol >= 1e-2)
    throw DomainError("integrate_ivp: tol must lie in (0, 1e-2)");
  const double forcing = opt.forcing.value_or(dc.lam_tilde);
  if (!(forcing > 0.0)) throw DomainError("integrate_ivp: forcing must be positive");

  const double tau = dc.tau;
  const double alpha = dc.a / (p.q - p.k);  // n - 2k - k*tau
  const double t0 = std::log(opt.s_init);
  const double t1 = std::log(opt.s_max);
  if (t1 * std::max(static_cast<double>(p.n), alpha) > 700.0)
    throw DomainError("integrate_ivp: s_max too large for double-range fluxes");

  VProfile prof;
  prof.params = p;
  prof.consts = dc;
  prof.s_init = opt.s_init;
  prof.s_max = opt.s_max;
  prof.tol = opt.tol;
  prof.forcing = forcing;
  prof.scale_c = std::pow(dc.lam_tilde / forcing, 1.0 / (p.q - p.k));
  prof.t0 = t0;
  prof.t1 = t1;

  // Log-deviation form of the series start.
  const double C = prof.scale_c;
  const double c1 = std::pow(forcing / p.n, 1.0 / p.k);
  const double s0 = opt.s_init;
  const double l0 = tau * std::log(s0) + std::log1p(-0.5 * c1 * s0 * s0) - std::log(C);
  const double fcorr = p.q * c1 * p.n / (2.0 * (p.n + 2.0));
  const double m0 = std::log(forcing / (p.n * std::pow(C * tau, p.k))) +
                    (2.0 * p.k + p.k * tau) * std::log(s0) + std::log1p(-fcorr * s0 * s0);
  std::array<double, 2> y0 = {l0, m0};

  const int k = p.k;
  const double q = p.q;
  auto rhs = [tau, alpha, k, q](double, const std::array<double, 2>& y,
                                std::array<double, 2>& dy) {
    detail::log_deviation_rhs(tau, alpha, k, q, y[0], y[1], dy[0], dy[1]);
  };

  Dp54Options oo;
  oo.rel_tol = opt.tol;
  oo.h_init = std::min(1e-3, 0.1 * (t1 - t0));
  auto check = [](double, const std::array<double, 2>& y) {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
      throw NumericError("integrate_ivp: deviation state left the finite range");
  };
  Dp54Result r = dp54_integrate(rhs, t0, t1, y0, oo, check);

  prof.nodes.resize(r.t.size());
  for (std::size_t i = 0; i < r.t.size(); ++i)
    prof.nodes[i] = {r.t[i], r.y[i][0], r.y[i][1], r.dy[i][0], r.dy[i][1]};
  return prof;
}

inline VProfile integrate_ivp(const ProblemParams& p, double s_max, double tol) {
  IvpOptions opt;
  opt.s_max = s_max;
  opt.tol = tol;
  return integrate_ivp(p, opt);
}

namespace detail {

// Gauss panels aligned to the profile's own nodes in t = log s.  The
// interpolant is analytic inside each node interval but only C^1 across
// nodes; panels that never straddle a node keep the full order of the rule,
// while an adaptive scheme chasing tolerances below the interpolation error
// would subdivide without bound around every node.
template <class F>
double node_aligned_gauss(const VProfile& prof, F&& g, double ulo, double uhi) {
  if (uhi <= ulo) return 0.0;
  auto it = std::upper_bound(prof.nodes.begin(), prof.nodes.end(), ulo,
                             [](double x, const VProfile::Node& n) { return x < n.t; });
  double total = 0.0;
  double a = ulo;
  while (a < uhi) {
    double b = uhi;
    if (it != prof.nodes.end() && it->t < b) b = it->t;
    if (b > a) {
      const double mid = 0.5 * (a + b);
      total += gauss4(g, a, mid) + gauss4(g, mid, b);
    }
    a = b;
    if (it != prof.nodes.end()) ++it;
  }
  return total;
}

// Integral of forcing * sigma^(n-1) (-v)^q over [lo, hi], split at s_init:
// adaptive in the analytic series range, node-aligned panels above it.
inline double rhs_integral(const VProfile& prof, double lo, double hi, double rel_tol) {
  if (hi <= lo) return 0.0;
  const auto& p = prof.params;
  double total = 0.0;
  const double split = std::min(hi, prof.s_init);
  if (lo < split) {
    auto f = [&](double s) {
      return prof.forcing * std::pow(s, p.n - 1) * std::pow(-prof.v_at(s), p.q);
    };
    const double rough = gauss4(f, lo, split) + 1e-300;
    total += adaptive_simpson(f, lo, split, rel_tol * std::fabs(rough));
  }
  if (hi > split) {
    auto flog = [&](double u) {
      const double s = std::exp(u);
      return prof.forcing * std::pow(s, static_cast<double>(p.n)) *
             std::pow(-prof.v_at(s), p.q);
    };
    total += node_aligned_gauss(prof, flog, std::log(std::max(lo, split)), std::log(hi));
  }
  return total;
}

}  // namespace detail

// Max relative defect of flux(s) against the cumulative integral of the right
// side, over log-spaced checkpoints.  A direct check that the stored pair
// (v, flux) solves the integrated equation.
inline double flux_identity_residual(const VProfile& prof, int checkpoints = 160) {
  const double slo = prof.s_init;
  const double shi = prof.s_max;
  double worst = 0.0;
  double acc = 0.0;
  double prev = 0.0;
  for (int i = 0; i <= checkpoints; ++i) {
    const double s = slo * std::pow(shi / slo, static_cast<double>(i) / checkpoints);
    acc += detail::rhs_integral(prof, prev, s, 1e-13);
    prev = s;
    const double fx = prof.flux_at(s);
    const double resid = std::fabs(fx - acc) / std::max(std::fabs(fx), 1e-300);
    worst = std::max(worst, resid);
  }
  return worst;
}

// Energy-type identity: for solutions of the rescaled problem,
//
//   lt (n-2k)(q_star-q) / ((k+1)(q+1)) * Int_0^R xi^(n-1) (-v)^(q+1) dxi
//     = (n-2k)/(k+1) R^(n-k) v v'^k + k/(k+1) R^(n-k+1) v'^(k+1)
//       + lt/(q+1) R^n (-v)^(q+1),
//
// all boundary terms at R.  Returns lhs - rhs; the natural comparison scale is
// pohozaev_scale.
inline double pohozaev_residual(const VProfile& prof, double R) {
  if (!(R > 0.0) || R > prof.s_max) throw DomainError("pohozaev_residual: need 0 < R <= s_max");
  const auto& p = prof.params;
  const double lt = prof.forcing;
  auto integ = [&](double s) { return std::pow(s, p.n - 1) * std::pow(-prof.v_at(s), p.q + 1.0); };
  double I = 0.0;
  {
    const double split = std::min(R, prof.s_init);
    const double rough0 = gauss4(integ, 0.0, split) + 1e-300;
    I += adaptive_simpson(integ, 0.0, split, 1e-13 * rough0);
    if (R > split) {
      auto ilog = [&](double u) {
        const double s = std::exp(u);
        return std::pow(s, static_cast<double>(p.n)) * std::pow(-prof.v_at(s), p.q + 1.0);
      };
      I += detail::node_aligned_gauss(prof, ilog, std::log(split), std::log(R));
    }
  }
  const double m = p.n - 2.0 * p.k;
  const double lhs = lt * m * (prof.consts.qs - p.q) / ((p.k + 1.0) * (p.q + 1.0)) * I;
  const double v = prof.v_at(R), vp = prof.vprime_at(R);
  const double t1 = m / (p.k + 1.0) * std::pow(R, p.n - p.k) * v * std::pow(vp, p.k);
  const double t2 = p.k / (p.k + 1.0) * std::pow(R, p.n - p.k + 1.0) * std::pow(vp, p.k + 1.0);
  const double t3 = lt / (p.q + 1.0) * std::pow(R, static_cast<double>(p.n)) *
                    std::pow(-v, p.q + 1.0);
  return lhs - (t1 + t2 + t3);
}

// Largest magnitude among the identity's terms at R; normalizer for the residual.
inline double pohozaev_scale(const VProfile& prof, double R) {
  const auto& p = prof.params;
  const double m = p.n - 2.0 * p.k;
  const double v = prof.v_at(R), vp = prof.vprime_at(R);
  const double lt = prof.forcing;
  const double t1 = m / (p.k + 1.0) * std::pow(R, p.n - p.k) * v * std::pow(vp, p.k);
  const double t2 = p.k / (p.k + 1.0) * std::pow(R, p.n - p.k + 1.0) * std::pow(vp, p.k + 1.0);
  const double t3 = lt / (p.q + 1.0) * std::pow(R, static_cast<double>(p.n)) *
                    std::pow(-v, p.q + 1.0);
  return std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3), 1e-300});
}

}  // namespace hf
