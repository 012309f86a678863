#pragma once

#include <cmath>
#include <vector>

#include "hessfowler/params.hpp"
#include "hessfowler/radial_solution.hpp"
#include "hessfowler/roots.hpp"

namespace hf {

// One-parameter family of entire radial profiles solving the critical-growth
// equation S_k = (-w)^q* on R^n.
struct BlissParams {
  double d = 1.0;
  int n = 0;
  int k = 0;
};

inline double bliss_value(const BlissParams& b, double r) {
  if (b.d <= 0.0) throw DomainError("bliss_value: need d > 0");
  if (b.k < 1 || b.n <= 2 * b.k) throw DomainError("bliss_value: need k >= 1 and n > 2k");
  const double m = b.n - 2 * b.k;
  const double base = b.d * std::pow(static_cast<double>(binomial(b.n, b.k)), 1.0 / b.k) *
                      (m / static_cast<double>(b.k));
  const double amp = std::pow(base, m / (2.0 * (b.k + 1)));
  return -amp / std::pow(1.0 + b.d * r * r, m / (2.0 * b.k));
}

enum class DRootKind { None, Double, Two };

struct DRoots {
  DRootKind kind = DRootKind::None;
  double d_minus = 0.0;
  double d_plus = 0.0;
};

// Roots of  lambda (d+1)^(k+1) = binom(n,k) ((n-2k)/k)^k d^k  in d > 0.
// Two simple roots straddling d = k for lambda < mu_star, a double root at
// d = k when lambda = mu_star, none above.
inline DRoots solve_d(double lambda, int n, int k) {
  if (k < 1 || n <= 2 * k) throw DomainError("solve_d: need k >= 1 and n > 2k");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("solve_d: need lambda > 0");
  const double mu = mu_star(n, k).to_double();
  DRoots out;
  if (std::fabs(lambda - mu) < 1e-10 * mu) {
    out.kind = DRootKind::Double;
    out.d_minus = out.d_plus = static_cast<double>(k);
    return out;
  }
  if (lambda > mu) {
    out.kind = DRootKind::None;
    return out;
  }
  const double bcoef =
      static_cast<double>(binomial(n, k)) * std::pow((n - 2.0 * k) / k, k);
  auto f = [&](double d) { return lambda * std::pow(d + 1.0, k + 1) - bcoef * std::pow(d, k); };
  // f(0) > 0, f(k) < 0 for lambda < mu_star, and f -> +inf as d grows.
  double hi = 2.0 * k + 2.0;
  while (f(hi) <= 0.0) hi *= 2.0;
  out.kind = DRootKind::Two;
  out.d_minus = bisect(f, 0.0, static_cast<double>(k), 1e-15, 300);
  out.d_plus = bisect(f, static_cast<double>(k), hi, 1e-15, 300);
  return out;
}

// A closed-form solution of the boundary problem at critical growth q = q_star.
struct CriticalSolution {
  ProblemParams params;
  double lambda = 0.0;
  double d = 0.0;      // Bliss parameter of the underlying profile
  double scale = 0.0;  // lambda^{-(n-2k)/(2k(k+1))}

  double operator()(double r) const {
    return 1.0 - scale * (-bliss_value({d, params.n, params.k}, r));
  }

  RadialSolution sample(std::size_t npts = 2001) const {
    RadialSolution s;
    s.params = params;
    s.lambda_physical = lambda;
    s.source = SolutionSource::ClosedForm;
    s.r.resize(npts);
    s.u.resize(npts);
    for (std::size_t i = 0; i < npts; ++i) {
      const double r = static_cast<double>(i) / (npts - 1);
      s.r[i] = r;
      s.u[i] = (*this)(r);
    }
    s.origin_value = s.u.front();
    return s;
  }
};

// Exact fold profile 1 - ((1+k)/(1+k r^2))^{(n-2k)/(2k)} at lambda = mu_star.
inline double fold_profile(int n, int k, double r) {
  return 1.0 - std::pow((1.0 + k) / (1.0 + k * r * r), (n - 2.0 * k) / (2.0 * k));
}

// All bounded solutions at q = q_star for the given lambda: two for
// lambda < mu_star (small branch first), the single fold profile at mu_star.
inline std::vector<CriticalSolution> critical_solutions(double lambda, int n, int k) {
  const DRoots roots = solve_d(lambda, n, k);
  if (roots.kind == DRootKind::None)
    throw DomainError("critical_solutions: lambda above mu_star, no solutions");
  ProblemParams p = make_params(n, k, q_star(n, k), lambda);
  const double expo = -(n - 2.0 * k) / (2.0 * k * (k + 1.0));
  const double scale = std::pow(lambda, expo);
  std::vector<CriticalSolution> out;
  out.push_back({p, lambda, roots.d_minus, scale});
  if (roots.kind == DRootKind::Two) out.push_back({p, lambda, roots.d_plus, scale});
  return out;
}

// Unbounded power-law solution U = 1 - r^{-tau} with its exact multiplier
// c_nk * lambda_tilde.  Defined when lambda_tilde > 0, i.e. q > nk/(n-2k).
struct SingularSolution {
  ProblemParams params;
  double tau = 0.0;
  double lambda_sing = 0.0;      // physical convention, with c_nk
  double lambda_rescaled = 0.0;  // lambda_tilde itself

  double operator()(double r) const {
    if (!(r > 0.0)) throw DomainError("singular solution is unbounded at r = 0");
    return 1.0 - std::pow(r, -tau);
  }

  // Both sides of the integral identity c_nk r^{n-k} (U')^k = lambda * integral,
  // in closed form; they agree exactly.
  double flux_lhs(double r) const {
    const auto& p = params;
    return c_nk(p.n, p.k).to_double() * std::pow(tau, p.k) *
           std::pow(r, p.n - 2.0 * p.k - p.k * tau);
  }
  double flux_rhs(double r) const {
    const auto& p = params;
    const double expo = p.n - p.q * tau;  // = a/(q-k) > 0
    return lambda_sing * std::pow(r, expo) / expo;
  }
};

inline SingularSolution singular_solution(int n, int k, double q) {
  ProblemParams p = make_params(n, k, q);
  const double lt = lambda_tilde(n, k, q);
  if (!(lt > 0.0))
    throw DomainError("singular_solution: need q > nk/(n-2k) so lambda_tilde > 0");
  SingularSolution s;
  s.params = p;
  s.tau = 2.0 * k / (q - k);
  s.lambda_rescaled = lt;
  s.lambda_sing = c_nk(n, k).to_double() * lt;
  return s;
}

// The d value for which the critical-growth initial value profile
// v = -(1+d s^2)^{-(n-2k)/(2k)} carries v(0) = -1 with multiplier lambda_tilde.
inline double homoclinic_d(int n, int k) {
  if (k < 1 || n <= 2 * k) throw DomainError("homoclinic_d: need k >= 1 and n > 2k");
  const double num = (n - 2.0 * k) * std::pow(static_cast<double>(k), k);
  const double den = static_cast<double>(n) * std::pow(k + 1.0, k + 1);
  return std::pow(num / den, 1.0 / k);
}

struct PhasePoint {
  double y = 0.0;
  double z = 0.0;
};

// Closed form of the phase-plane loop at q = q_star.
inline PhasePoint homoclinic_orbit(double t, double d, int n, int k) {
  if (d <= 0.0) throw DomainError("homoclinic_orbit: need d > 0");
  if (k < 1 || n <= 2 * k) throw DomainError("homoclinic_orbit: need k >= 1 and n > 2k");
  const double lt = std::pow((n - 2.0 * k) / (k + 1.0), k + 1);  // lambda_tilde at q_star
  const double growth = std::exp((n + 2.0) * k * t / (k + 1.0));
  const double base = 1.0 + d * std::exp(2.0 * t);
  PhasePoint pt;
  pt.y = std::pow((n - 2.0 * k) * d / k, k) * growth * std::pow(base, -0.5 * n);
  pt.z = lt * growth * std::pow(base, -0.5 * (n + 2.0));
  return pt;
}

// Comparison transform between sub- and super-solution scales: the increasing
// convex map with h_tilde(Phi(s)) = h(s) built from the explicit antiderivative
// h(s) = lambda0^{-1/k} * k/(q-k) * (1 - (1-s)^{-(q-k)/k}).
inline double phi_transform(double s, double lambda, double lambda0, int k, double q) {
  if (k < 1) throw DomainError("phi_transform: need k >= 1");
  if (!(q > static_cast<double>(k))) throw DomainError("phi_transform: need q > k");
  if (!(lambda0 > 0.0) || !(lambda > 0.0)) throw DomainError("phi_transform: need positive multipliers");
  if (!(lambda < lambda0)) throw DomainError("phi_transform: need lambda < lambda0");
  if (s > 0.0) throw DomainError("phi_transform: defined for s <= 0");
  const double rho = std::pow(lambda / lambda0, 1.0 / k);
  const double e = (q - k) / k;
  // 1 - (1-s)^{-e} in a cancellation-safe form.
  const double w = -std::expm1(-e * std::log1p(-s));
  const double inner = 1.0 - rho * w;  // >= 1 - rho > 0
  return -std::expm1(-std::log(inner) / e);
}

}  // namespace hf
