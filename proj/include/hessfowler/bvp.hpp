#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "hessfowler/quadrature.hpp"
#include "hessfowler/radial_ivp.hpp"
#include "hessfowler/radial_solution.hpp"

namespace hf {

// One point of the bifurcation diagram: truncating the global profile at s0
// and rescaling to the unit ball gives a boundary-value solution with
//
//   lambda_rescaled = lt e^((q-k) L(log s0)),
//   lambda_physical = c_nk * lambda_rescaled,
//   A = u(0) = 1 + 1/v(s0).
struct BifurcationPoint {
  double s = 0.0;
  double lambda_rescaled = 0.0;
  double lambda_physical = 0.0;
  double A = 0.0;
};

inline double lambda_rescaled_at(const VProfile& prof, double s0) {
  if (!(s0 > 0.0)) throw DomainError("lambda_rescaled_at: need s0 > 0");
  const auto& p = prof.params;
  if (prof.in_series_range(s0)) {
    const double v = prof.v_at(s0);
    const double t = std::log(s0);
    const double one_p = -v * std::exp(prof.consts.tau * t) / prof.scale_c;
    return prof.consts.lam_tilde * std::pow(one_p, p.q - p.k);
  }
  const auto d = prof.dev_at(std::log(s0));
  return prof.consts.lam_tilde * std::exp((p.q - p.k) * d.L);
}

inline BifurcationPoint bifurcation_point_at(const VProfile& prof, double s0) {
  BifurcationPoint bp;
  bp.s = s0;
  bp.lambda_rescaled = lambda_rescaled_at(prof, s0);
  bp.lambda_physical = prof.consts.cnk.to_double() * bp.lambda_rescaled;
  bp.A = 1.0 + 1.0 / prof.v_at(s0);
  return bp;
}

struct BifurcationCurve {
  ProblemParams params;
  std::vector<BifurcationPoint> points;
};

inline BifurcationCurve bifurcation_curve(const VProfile& prof, const std::vector<double>& s_grid) {
  BifurcationCurve curve;
  curve.params = prof.params;
  curve.points.reserve(s_grid.size());
  for (double s0 : s_grid) {
    if (!(s0 > 0.0) || s0 > prof.s_max)
      throw DomainError("bifurcation_curve: grid point outside (0, s_max]");
    curve.points.push_back(bifurcation_point_at(prof, s0));
  }
  return curve;
}

inline BifurcationCurve bifurcation_curve(const VProfile& prof, double s_lo, double s_hi,
                                          int count) {
  if (!(s_lo > 0.0) || !(s_hi > s_lo) || count < 2)
    throw DomainError("bifurcation_curve: need 0 < s_lo < s_hi and count >= 2");
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i)
    grid[i] = s_lo * std::pow(s_hi / s_lo, static_cast<double>(i) / (count - 1));
  return bifurcation_curve(prof, grid);
}

// Largest rescaled eigenvalue attained along the computed branch.
inline BifurcationPoint branch_peak(const VProfile& prof) {
  if (prof.nodes.size() < 3) throw NumericError("branch_peak: profile too short");
  std::size_t best = 0;
  for (std::size_t i = 1; i < prof.nodes.size(); ++i)
    if (prof.nodes[i].L > prof.nodes[best].L) best = i;
  double lo = prof.nodes[best == 0 ? 0 : best - 1].t;
  double hi = prof.nodes[std::min(best + 1, prof.nodes.size() - 1)].t;
  // golden-section refinement of L(t) on [lo, hi]; the branch eigenvalue is a
  // monotone image of L, so both peak at the same t
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = prof.dev_at(x1).L, f2 = prof.dev_at(x2).L;
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::fabs(a)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = prof.dev_at(x2).L;
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = prof.dev_at(x1).L;
    }
  }
  return bifurcation_point_at(prof, std::exp(0.5 * (a + b)));
}

struct MultiplicityReport {
  double lambda_physical = 0.0;
  double lambda_rescaled = 0.0;
  int count = 0;
  // true when the computed range cannot exclude further crossings beyond s_max
  bool truncated = false;
  std::vector<double> roots;  // s0 values, ascending
};

// Number of boundary-value solutions at a given physical eigenvalue: the
// number of times the branch eigenvalue crosses the requested level over the
// computed range.  Only meaningful on the supercritical side, where the branch
// approaches a unique limit.
inline MultiplicityReport count_solutions(const VProfile& prof, double lambda_physical) {
  const auto& p = prof.params;
  if (p.q <= prof.consts.qs)
    throw RegimeError("count_solutions: level counting needs q > q_star");
  if (!(lambda_physical > 0.0)) throw DomainError("count_solutions: lambda must be positive");

  MultiplicityReport rep;
  rep.lambda_physical = lambda_physical;
  const double cnk = prof.consts.cnk.to_double();
  const double level_r = lambda_physical / cnk;
  rep.lambda_rescaled = level_r;
  const double lt = prof.consts.lam_tilde;
  const double qk = p.q - p.k;
  // log-deviation level whose branch eigenvalue equals level_r
  const double lstar = std::log(level_r / lt) / qk;

  const double t0 = prof.nodes.front().t, t1 = prof.nodes.back().t;
  const double dt = std::log(10.0) / 400.0;
  const int steps = std::max(8, static_cast<int>(std::ceil((t1 - t0) / dt)));
  double prev_t = t0;
  double prev_f = prof.nodes.front().L - lstar;
  for (int i = 1; i <= steps; ++i) {
    const double tt = t0 + (t1 - t0) * static_cast<double>(i) / steps;
    const double f = prof.dev_at(tt).L - lstar;
    if (prev_f == 0.0) {
      rep.roots.push_back(std::exp(prev_t));
    } else if (prev_f * f < 0.0) {
      double a = prev_t, b = tt, fa = prev_f;
      while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        const double fm = prof.dev_at(mid).L - lstar;
        if ((fa < 0.0) == (fm < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      rep.roots.push_back(std::exp(0.5 * (a + b)));
    }
    prev_t = tt;
    prev_f = f;
  }
  rep.count = static_cast<int>(rep.roots.size());

  const Regime reg = classify_regime(p);
  if (reg.tag == RegimeTag::Spiral) {
    // oscillation amplitude still present in the tail vs distance of the
    // level from the limit
    double amp = 0.0;
    const double tail_lo = std::max(t0, t1 - 2.0);
    for (int i = 0; i <= 200; ++i) {
      const double tt = tail_lo + (t1 - tail_lo) * i / 200.0;
      const double lr = lt * std::exp(qk * prof.dev_at(tt).L);
      amp = std::max(amp, std::fabs(lr - lt));
    }
    rep.truncated = amp >= std::fabs(level_r - lt);
  } else {
    const double lr_end = lt * std::exp(qk * prof.nodes.back().L);
    rep.truncated = (level_r <= lt && lr_end < level_r);
  }
  return rep;
}

inline MultiplicityReport count_solutions(const ProblemParams& p, double lambda_physical,
                                          double s_max = 1e4, double tol = 1e-10) {
  IvpOptions opt;
  opt.s_max = s_max;
  opt.tol = tol;
  return count_solutions(integrate_ivp(p, opt), lambda_physical);
}

// Boundary-value solution obtained by truncating the global profile at s0 and
// rescaling to the unit ball: u(r) = 1 - v(s0 r) / v(s0).
inline RadialSolution reconstruct_u(const VProfile& prof, double s0, int npts = 801) {
  if (!(s0 > 0.0) || s0 > prof.s_max) throw DomainError("reconstruct_u: need 0 < s0 <= s_max");
  if (npts < 8) throw DomainError("reconstruct_u: need npts >= 8");
  RadialSolution sol;
  sol.params = prof.params;
  sol.params.lambda = prof.consts.cnk.to_double() * lambda_rescaled_at(prof, s0);
  sol.lambda_physical = *sol.params.lambda;
  sol.source = SolutionSource::Shooting;
  const double vs0 = prof.v_at(s0);
  sol.r.resize(npts);
  sol.u.resize(npts);
  for (int i = 0; i < npts; ++i) {
    const double r = static_cast<double>(i) / (npts - 1);
    sol.r[i] = r;
    sol.u[i] = 1.0 - prof.v_at(s0 * r) / vs0;
  }
  sol.origin_value = sol.u.front();
  return sol;
}

struct PicardOptions {
  double tol = 1e-10;
  int max_iter = 600;
  int panels = 512;
  double blowup = 1e6;
};

struct PicardResult {
  bool converged = false;
  int iterations = 0;
  RadialSolution solution;
};

namespace detail {

// Partial integrals of the cubic Lagrange basis on the 4-point Gauss nodes:
// wp[i][m] = Int_{-1}^{x_i} l_m, wf[m] = Int_{-1}^{1} l_m (= Gauss weights).
struct Gl4Cumulative {
  std::array<std::array<double, 4>, 4> wp{};
  std::array<double, 4> wf{};
};

inline const Gl4Cumulative& gl4_cumulative() {
  static const Gl4Cumulative tab = [] {
    Gl4Cumulative t;
    for (int m = 0; m < 4; ++m) {
      // expand l_m into monomial coefficients c[0..3]
      std::array<double, 4> c = {1.0, 0.0, 0.0, 0.0};
      int deg = 0;
      double denom = 1.0;
      for (int j = 0; j < 4; ++j) {
        if (j == m) continue;
        denom *= (kGL4Nodes[m] - kGL4Nodes[j]);
        for (int d = deg; d >= 0; --d) {
          c[d + 1] += c[d];
          c[d] *= -kGL4Nodes[j];
        }
        ++deg;
      }
      for (auto& x : c) x /= denom;
      auto primitive = [&c](double x) {
        double acc = 0.0, xp = x;
        for (int d = 0; d < 4; ++d) {
          acc += c[d] * xp / (d + 1);
          xp *= x;
        }
        return acc;
      };
      for (int i = 0; i < 4; ++i) t.wp[i][m] = primitive(kGL4Nodes[i]) - primitive(-1.0);
      t.wf[m] = primitive(1.0) - primitive(-1.0);
    }
    return t;
  }();
  return tab;
}

// Per-panel weights that integrate the cubic node interpolant of a smooth
// factor g against the exact measure s^(n-1) ds.  Splitting the integrand
// this way keeps the inner flux accurate near s = 0, where s^(n-1) is far
// from polynomial over a panel at fixed order.
struct PanelMoments {
  // mom[i][m]: integral of l_m(s) s^(n-1) over [a, x_i];  full[m]: over [a, b]
  std::array<std::array<double, 4>, 4> mom{};
  std::array<double, 4> full{};
};

inline PanelMoments panel_moments(double a, double b, int n) {
  PanelMoments out;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::array<double, 4> xs;
  for (int i = 0; i < 4; ++i) xs[i] = mid + half * kGL4Nodes[i];
  for (int m = 0; m < 4; ++m) {
    // l_m expanded in monomials of s
    std::array<double, 4> c = {1.0, 0.0, 0.0, 0.0};
    int deg = 0;
    double denom = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j == m) continue;
      denom *= (xs[m] - xs[j]);
      for (int d = deg; d >= 0; --d) {
        c[d + 1] += c[d];
        c[d] *= -xs[j];
      }
      ++deg;
    }
    auto primitive = [&](double x) {
      double acc = 0.0;
      for (int d = 0; d < 4; ++d) acc += c[d] * std::pow(x, n + d) / (n + d);
      return acc / denom;
    };
    const double base = primitive(a);
    for (int i = 0; i < 4; ++i) out.mom[i][m] = primitive(xs[i]) - base;
    out.full[m] = primitive(b) - base;
  }
  return out;
}

}  // namespace detail

// Monotone iteration for the unit-ball boundary-value problem at fixed lambda:
// starting from u == 0, repeatedly solve the quadrature form
//
//   u_i(r) = -Int_r^1 [ c^(-1) xi^(k-n) Int_0^xi s^(n-1) lambda (1-u_{i-1})^q ds ]^(1/k) dxi.
//
// The iterates decrease pointwise; when the problem has a solution they
// converge to the maximal one, otherwise they blow up.
inline PicardResult picard_maximal(const ProblemParams& p, const PicardOptions& opt = {}) {
  auto bad = validate_params(p.n, p.k, p.q);
  if (!bad.empty()) throw DomainError("picard_maximal: " + bad.front());
  if (!p.lambda) throw DomainError("picard_maximal: lambda is required");
  const double lambda = *p.lambda;
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("picard_maximal: lambda must be positive and finite");
  if (opt.panels < 4) throw DomainError("picard_maximal: need at least 4 panels");

  const int m = opt.panels;
  const double c = c_nk(p.n, p.k).to_double();
  const auto& tab = detail::gl4_cumulative();
  const double h = 1.0 / m;

  // geometry: Gauss node radii and the s^(n-1) moment weights, per panel
  std::vector<double> x(4 * m);
  std::vector<detail::PanelMoments> mom(m);
  for (int j = 0; j < m; ++j) {
    const double a = j * h, b = (j + 1) * h;
    const double mid = 0.5 * (a + b), half = 0.5 * h;
    for (int i = 0; i < 4; ++i) x[4 * j + i] = mid + half * kGL4Nodes[i];
    mom[j] = detail::panel_moments(a, b, p.n);
  }

  std::vector<double> u(4 * m, 0.0), unew(4 * m, 0.0), g(4 * m), hval(4 * m);
  std::vector<double> flux_b(m + 1), cum_b(m + 1);
  PicardResult res;
  res.solution.params = p;
  res.solution.lambda_physical = lambda;
  res.solution.source = SolutionSource::Picard;

  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    for (int i = 0; i < 4 * m; ++i) g[i] = std::pow(1.0 - u[i], p.q);

    // cumulative inner flux at Gauss nodes and panel boundaries
    flux_b[0] = 0.0;
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < 4; ++i) {
        double part = 0.0;
        for (int mm = 0; mm < 4; ++mm) part += mom[j].mom[i][mm] * g[4 * j + mm];
        const double flux = flux_b[j] + lambda * part;
        // outer integrand, in log form to dodge range limits of s^(k-n)
        hval[4 * j + i] =
            flux > 0.0
                ? std::exp((std::log(flux) - std::log(c) + (p.k - p.n) * std::log(x[4 * j + i])) /
                           p.k)
                : 0.0;
      }
      double full = 0.0;
      for (int mm = 0; mm < 4; ++mm) full += mom[j].full[mm] * g[4 * j + mm];
      flux_b[j + 1] = flux_b[j] + lambda * full;
    }

    // outer cumulative integral of hval; u_new = cum - total
    cum_b[0] = 0.0;
    for (int j = 0; j < m; ++j) {
      const double half = 0.5 * h;
      for (int i = 0; i < 4; ++i) {
        double part = 0.0;
        for (int mm = 0; mm < 4; ++mm) part += tab.wp[i][mm] * hval[4 * j + mm];
        unew[4 * j + i] = cum_b[j] + half * part;
      }
      double full = 0.0;
      for (int mm = 0; mm < 4; ++mm) full += tab.wf[mm] * hval[4 * j + mm];
      cum_b[j + 1] = cum_b[j] + half * full;
    }
    const double total = cum_b[m];
    double change = 0.0, sup = 0.0;
    for (int i = 0; i < 4 * m; ++i) {
      unew[i] -= total;
      change = std::max(change, std::fabs(unew[i] - u[i]));
      sup = std::max(sup, std::fabs(unew[i]));
    }
    u.swap(unew);
    res.iterations = iter;
    if (sup > opt.blowup) {
      res.converged = false;
      break;
    }
    if (iter >= 2 && change < opt.tol * std::max(1.0, sup)) {
      res.converged = true;
      break;
    }
  }

  // sample the final iterate on the panel boundaries
  res.solution.r.resize(m + 1);
  res.solution.u.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    res.solution.r[j] = j * h;
    res.solution.u[j] = cum_b[j] - cum_b[m];
  }
  res.solution.u[m] = 0.0;
  res.solution.origin_value = res.solution.u[0];
  return res;
}

// Supremum of eigenvalues with a boundary-value solution, located by geometric
// bracketing plus bisection on convergence of the monotone iteration.
inline double estimate_lambda_star(const ProblemParams& p, double rel_tol = 0.005,
                                   const PicardOptions& opt = {}) {
  auto bad = validate_params(p.n, p.k, p.q);
  if (!bad.empty()) throw DomainError("estimate_lambda_star: " + bad.front());
  if (!(rel_tol > 0.0) || rel_tol >= 0.5)
    throw DomainError("estimate_lambda_star: rel_tol must lie in (0, 0.5)");

  auto converges = [&](double lam) {
    ProblemParams q = p;
    q.lambda = lam;
    return picard_maximal(q, opt).converged;
  };

  double lo = 0.0, hi = 0.0;
  double probe = 1.0;
  if (converges(probe)) {
    lo = probe;
    for (int i = 0; i < 60; ++i) {
      probe *= 2.0;
      if (!converges(probe)) {
        hi = probe;
        break;
      }
      lo = probe;
    }
    if (hi == 0.0) throw BracketError("estimate_lambda_star: no divergent upper bound found");
  } else {
    hi = probe;
    for (int i = 0; i < 60; ++i) {
      probe *= 0.5;
      if (converges(probe)) {
        lo = probe;
        break;
      }
      hi = probe;
    }
    if (lo == 0.0) throw BracketError("estimate_lambda_star: no convergent lower bound found");
  }

  while (hi - lo > rel_tol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (converges(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hf
