#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hessfowler/bvp.hpp"
#include "hessfowler/quadrature.hpp"
#include "hessfowler/radial_ivp.hpp"
#include "hessfowler/radial_solution.hpp"

namespace hf {

struct CheckResult {
  std::string name;
  double value = 0.0;  // residual, already normalized
  double tol = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::string kind;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline void add_check(VerifyReport& rep, const std::string& name, double value, double tol) {
  rep.checks.push_back({name, value, tol, std::isfinite(value) && value <= tol});
}

// five-point central first derivative
inline double fd_deriv1(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// five-point central second derivative
inline double fd_deriv2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
         (12 * h * h);
}

}  // namespace detail

// Residual checks on a stored global profile.  All values are relative; a
// uniform override replaces the per-check defaults.
inline VerifyReport verify_vprofile(const VProfile& prof,
                                    std::optional<double> tol_override = {}) {
  VerifyReport rep;
  rep.kind = "vprofile";
  const auto& p = prof.params;

  // 1. integrated-equation defect
  {
    const double tol = tol_override.value_or(std::max(1e-8, 20.0 * prof.tol));
    detail::add_check(rep, "flux-identity", flux_identity_residual(prof), tol);
  }

  // 2. pointwise equation via finite differences of the flux in log s
  {
    const double tol = tol_override.value_or(1e-6);
    const double ht = 2e-3;
    const double tlo = prof.t0 + 4 * ht, thi = prof.t1 - 4 * ht;
    double worst = 0.0;
    const int pts = 48;
    std::function<double(double)> flux_t = [&](double t) { return prof.flux_at(std::exp(t)); };
    for (int i = 0; i <= pts; ++i) {
      const double t = tlo + (thi - tlo) * i / pts;
      const double s = std::exp(t);
      // d(flux)/ds = (1/s) d(flux)/dt
      const double lhs = detail::fd_deriv1(flux_t, t, ht) / s;
      const double rhs = prof.forcing * std::pow(s, p.n - 1) * std::pow(-prof.v_at(s), p.q);
      worst = std::max(worst, std::fabs(lhs - rhs) / std::max(std::fabs(rhs), 1e-300));
    }
    detail::add_check(rep, "operator-fd", worst, tol);
  }

  // 3. energy identity at three radii spanning the computed range
  {
    const double tol = tol_override.value_or(1e-5);
    const double Rmid = std::sqrt(prof.s_init * prof.s_max);
    const std::array<double, 3> radii = {std::min(1.0, prof.s_max), Rmid, prof.s_max};
    double worst = 0.0;
    for (double R : radii) {
      const double resid = pohozaev_residual(prof, R);
      worst = std::max(worst, std::fabs(resid) / pohozaev_scale(prof, R));
    }
    detail::add_check(rep, "pohozaev", worst, tol);
  }
  return rep;
}

// Residual checks on a stored boundary-value solution.
inline VerifyReport verify_solution(const RadialSolution& sol,
                                    std::optional<double> tol_override = {}) {
  VerifyReport rep;
  rep.kind = "solution";
  const auto& p = sol.params;
  const double lambda = sol.lambda_physical;
  const double c = c_nk(p.n, p.k).to_double();

  // 1. boundary and origin bookkeeping
  detail::add_check(rep, "boundary", std::fabs(sol.u.back()), tol_override.value_or(1e-10));
  detail::add_check(rep, "origin",
                    std::fabs(sol.u.front() - sol.origin_value) /
                        std::max(1.0, std::fabs(sol.origin_value)),
                    tol_override.value_or(1e-10));

  double grid_h = 0.0;
  for (std::size_t i = 1; i < sol.r.size(); ++i) grid_h = std::max(grid_h, sol.r[i] - sol.r[i - 1]);
  const double h = std::max(4.0 * grid_h, 3e-3);
  std::function<double(double)> ueval = [&](double x) { return sol.eval(x); };

  // 2. pointwise operator residual from finite differences of the stored grid
  {
    const double tol = tol_override.value_or(1e-4);
    double worst = 0.0;
    const int pts = 40;
    const double rlo = std::max(0.1, sol.r.front() + 2 * h);
    const double rhi = std::min(0.9, sol.r.back() - 2 * h);
    for (int i = 0; i <= pts; ++i) {
      const double r = rlo + (rhi - rlo) * i / pts;
      const double up = detail::fd_deriv1(ueval, r, h);
      const double upp = detail::fd_deriv2(ueval, r, h);
      // c r^(1-n) (r^(n-k) u'^k)' in product form
      const double lhs = c * ((p.n - p.k) * std::pow(r, -p.k) * std::pow(up, p.k) +
                              p.k * std::pow(r, 1.0 - p.k) * std::pow(up, p.k - 1) * upp);
      const double rhs = lambda * std::pow(1.0 - sol.eval(r), p.q);
      worst = std::max(worst, std::fabs(lhs - rhs) / std::max(std::fabs(rhs), 1e-300));
    }
    detail::add_check(rep, "operator-fd", worst, tol);
  }

  // 3. integrated form: r^(n-k) u'^k = (lambda/c) Int_0^r s^(n-1)(1-u)^q ds
  {
    const double tol = tol_override.value_or(1e-4);
    double worst = 0.0;
    auto integrand = [&](double s) {
      return std::pow(s, p.n - 1.0) * std::pow(1.0 - sol.eval(s), p.q);
    };
    for (double r : {0.25, 0.5, 0.75, 0.9}) {
      if (r <= sol.r.front() + 2 * h || r >= sol.r.back() - 2 * h) continue;
      const double up = detail::fd_deriv1(ueval, r, h);
      const double lhs = std::pow(r, p.n - p.k) * std::pow(up, p.k);
      const double rough = std::fabs(gauss4_panels(integrand, 0.0, r, 16)) + 1e-300;
      const double rhs = lambda / c * adaptive_simpson(integrand, 0.0, r, 1e-12 * rough);
      worst = std::max(worst, std::fabs(lhs - rhs) / std::max(std::fabs(rhs), 1e-300));
    }
    detail::add_check(rep, "flux-integral", worst, tol);
  }
  return rep;
}

}  // namespace hf
