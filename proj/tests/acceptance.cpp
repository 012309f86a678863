// Acceptance gate: ten numbered checks, one line each, spanning the full
// solution structure of the library: exponent tables, closed forms, the
// three phase-plane regimes, the extremal eigenvalue, cross-method
// agreement, conservation identities, and the comparison transform.
// Exits with the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hessfowler/hessfowler.hpp"
#include "oracles.hpp"

using namespace hf;

namespace {

std::string num(double x) {
  char b[40];
  std::snprintf(b, sizeof(b), "%.6g", x);
  return b;
}

struct Criterion {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string& what) {
    if (!cond && detail.empty()) detail = what;
    ok = ok && cond;
  }
};

// 1. exponent tables: q_jl closed form and finiteness, mu_star exactly
//    n(n-2)/4 for k=1, and the defining inversion f_k(q_jl) = n-2k
void criterion1(Criterion& c) {
  constexpr double kTolQjl = 1e-12;
  constexpr double kTolInversion = 1e-9;
  for (int n = 5; n <= 60; ++n) {
    const auto qjl = q_jl(n, 1);
    if (n > 10) {
      c.expect(qjl.has_value(), "q_jl(" + std::to_string(n) + ",1) should be finite");
      if (qjl) {
        const double rt = std::sqrt(n - 1.0);
        const double ref = (n - 2.0 * rt) / (n - 4.0 - 2.0 * rt);
        c.expect(std::fabs(*qjl - ref) < kTolQjl,
                 "q_jl(" + std::to_string(n) + ",1) off by " + num(std::fabs(*qjl - ref)));
      }
    } else {
      c.expect(!qjl.has_value(), "q_jl(" + std::to_string(n) + ",1) should be infinite");
    }
    c.expect(mu_star(n, 1) == Rational(static_cast<std::int64_t>(n) * (n - 2), 4),
             "mu_star(" + std::to_string(n) + ",1) != n(n-2)/4");
  }
  for (int k = 1; k <= 3; ++k) {
    for (int n = 2 * k + 9; n <= 60; ++n) {
      const auto qjl = q_jl(n, k);
      c.expect(qjl.has_value(),
               "q_jl(" + std::to_string(n) + "," + std::to_string(k) + ") should be finite");
      if (qjl) {
        const double resid = std::fabs(f_k(k, *qjl) - (n - 2 * k));
        c.expect(resid < kTolInversion, "f_k inversion residual " + num(resid) + " at n=" +
                                            std::to_string(n) + " k=" + std::to_string(k));
      }
    }
  }
}

// 2. entire critical profiles solve their equation (finite differences),
//    the parameter roots behave across the fold, and the fold origin value
void criterion2(Criterion& c) {
  constexpr double kTolFd = 1e-6;
  const std::tuple<int, int, double> entire[] = {{5, 1, 1.0}, {7, 1, 3.0}, {13, 2, 2.0}};
  for (const auto& e : entire) {
    const int n = std::get<0>(e), k = std::get<1>(e);
    const double d = std::get<2>(e);
    const double qs = q_star(n, k);
    const double cc = c_nk(n, k).to_double();
    oracle::Fn w = [=](double r) { return bliss_value({d, n, k}, r); };
    for (double r : {0.3, 0.7, 1.1, 1.9}) {
      const double lhs = oracle::radial_sk(w, r, n, k, cc, 1e-3);
      const double rhs = std::pow(-w(r), qs);
      c.expect(std::fabs(lhs - rhs) <= kTolFd * std::fabs(rhs),
               "profile residual " + num(std::fabs(lhs - rhs) / std::fabs(rhs)) + " at n=" +
                   std::to_string(n) + " k=" + std::to_string(k) + " r=" + num(r));
    }
  }

  const std::pair<int, int> nk[] = {{5, 1}, {13, 2}};
  for (const auto& e : nk) {
    const int n = e.first, k = e.second;
    const double mu = mu_star(n, k).to_double();
    c.expect(solve_d(0.5 * mu, n, k).kind == DRootKind::Two,
             "expected two roots below the fold");
    const DRoots dbl = solve_d(mu, n, k);
    c.expect(dbl.kind == DRootKind::Double, "expected a double root at the fold");
    c.expect(std::fabs(dbl.d_minus - k) < 1e-9 && std::fabs(dbl.d_plus - k) < 1e-9,
             "double root is not at d=k");
    c.expect(solve_d(2.0 * mu, n, k).kind == DRootKind::None,
             "expected no roots above the fold");
  }

  const double origin = fold_profile(5, 1, 0.0);
  c.expect(std::fabs(origin - (1.0 - 2.0 * std::sqrt(2.0))) < 1e-12,
           "fold origin value " + num(origin));
}

// 3. at critical growth the integrated profile and its phase image follow
//    the closed-form loop and land back at the origin equilibrium
void criterion3(Criterion& c) {
  constexpr double kSupTol = 1e-7;
  constexpr double kOrbitTol = 1e-6;
  constexpr double kTerminalTol = 1e-3;
  const ProblemParams p = make_params(5, 1, q_star(5, 1));
  const double d0 = homoclinic_d(5, 1);

  IvpOptions opt;
  opt.s_max = 20.0;
  opt.tol = 1e-11;
  const VProfile prof = integrate_ivp(p, opt);
  double sup = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double s = 10.0 * i / 400.0;
    sup = std::max(sup, std::fabs(prof.v_at(s) + std::pow(1.0 + d0 * s * s, -1.5)));
  }
  c.expect(sup < kSupTol, "profile sup error " + num(sup));

  IvpOptions wide;
  wide.s_max = std::exp(8.0);
  wide.tol = 1e-11;
  const PhaseOrbit orb = to_phase(integrate_ivp(p, wide));
  double worst = 0.0;
  for (const auto& smp : orb.samples) {
    const PhasePoint ref = homoclinic_orbit(smp.t, d0, 5, 1);
    worst = std::max({worst, std::fabs(smp.y - ref.y), std::fabs(smp.z - ref.z)});
  }
  c.expect(worst < kOrbitTol, "orbit closed-form error " + num(worst));
  const double dist = std::hypot(orb.samples.back().y, orb.samples.back().z);
  c.expect(dist < kTerminalTol, "terminal distance " + num(dist));
}

// 4. spiral regime: windings accumulate with range, the solution count just
//    below the branch limit is large and truncated, far field follows s^-tau
void criterion4(Criterion& c) {
  const ProblemParams p = make_params(13, 2, 5.0);
  int w[3] = {0, 0, 0};
  const double tmax[3] = {10.0, 20.0, 40.0};
  for (int i = 0; i < 3; ++i) {
    IvpOptions opt;
    opt.s_max = std::exp(tmax[i]);
    opt.tol = 1e-10;
    w[i] = winding_count(to_phase(integrate_ivp(p, opt)));
  }
  c.expect(w[2] >= 3, "winding at t=40 is " + std::to_string(w[2]));
  c.expect(w[0] < w[1] && w[1] < w[2],
           "windings " + std::to_string(w[0]) + "," + std::to_string(w[1]) + "," +
               std::to_string(w[2]) + " not strictly increasing");

  const double lam_limit = c_nk(13, 2).to_double() * lambda_tilde(13, 2, 5.0);
  const double lam = lam_limit * (1.0 - 1e-8);  // well within 0.1% of the limit
  const VProfile prof = integrate_ivp(p, 6000.0, 1e-10);
  const MultiplicityReport rep = count_solutions(prof, lam);
  c.expect(rep.count >= 5, "near-limit count " + std::to_string(rep.count));
  c.expect(rep.truncated, "near-limit count should be truncated");

  const double tau = 4.0 / 3.0;  // 2k/(q-k)
  const double far = std::fabs(prof.v_at(1e3) * std::pow(1e3, tau) + 1.0);
  c.expect(far < 0.05, "far-field deviation " + num(far));
}

// 5. node regime: the orbit is a monotone graph z(y), the branch eigenvalue
//    is strictly increasing, and every level is hit exactly once
void criterion5(Criterion& c) {
  const ProblemParams p = make_params(11, 1, 8.0);
  const VProfile prof = integrate_ivp(p, 1e4, 1e-10);
  const PhaseOrbit orb = to_phase(prof);

  std::vector<PhaseSample> pts(orb.samples.begin(), orb.samples.end());
  std::sort(pts.begin(), pts.end(),
            [](const PhaseSample& a, const PhaseSample& b) { return a.y < b.y; });
  int violations = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].z < pts[i - 1].z - 1e-10) ++violations;
  c.expect(violations == 0, std::to_string(violations) + " monotonicity violations");

  const BifurcationCurve curve = bifurcation_curve(prof, 1e-2, 1e3, 200);
  bool strict = true;
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    strict = strict && curve.points[i].lambda_rescaled > curve.points[i - 1].lambda_rescaled;
  c.expect(strict, "branch eigenvalue is not strictly increasing");

  for (double lam : {0.3, 1.0, 2.0}) {
    const MultiplicityReport rep = count_solutions(prof, lam);
    c.expect(rep.count == 1, "count at lambda=" + num(lam) + " is " + std::to_string(rep.count));
  }
}

// 6. the extremal eigenvalue estimate lands within 2% of 122/49 in under 60s
void criterion6(Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  const double est = estimate_lambda_star(make_params(11, 1, 8.0));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double ref = 122.0 / 49.0;
  c.expect(std::fabs(est - ref) <= 0.02 * ref, "estimate " + num(est) + " vs " + num(ref));
  c.expect(secs < 60.0, "runtime " + num(secs) + " s");
}

// 7. the monotone fixed-point iteration and the shooting reconstruction
//    agree, iterates decrease, and the solutions order with the eigenvalue
void criterion7(Criterion& c) {
  constexpr double kSupTol = 1e-5;
  const PicardResult pic = picard_maximal(make_params(11, 1, 8.0, 0.1));
  c.expect(pic.converged, "fixed-point iteration did not converge");

  const VProfile prof = integrate_ivp(make_params(11, 1, 8.0), 1e4, 1e-10);
  const MultiplicityReport rep = count_solutions(prof, 0.1);
  c.expect(rep.count == 1, "shooting count at lambda=0.1 is " + std::to_string(rep.count));
  if (rep.count >= 1 && pic.converged) {
    const RadialSolution shoot = reconstruct_u(prof, rep.roots.front(), 2049);
    double sup = 0.0;
    for (std::size_t j = 0; j < pic.solution.r.size(); ++j)
      sup = std::max(sup, std::fabs(pic.solution.u[j] - shoot.eval(pic.solution.r[j])));
    c.expect(sup < kSupTol, "cross-method sup distance " + num(sup));
  }

  PicardOptions stepper;
  stepper.panels = 256;
  std::vector<double> prev;
  bool monotone = true;
  for (int m = 1; m <= 6; ++m) {
    stepper.max_iter = m;
    const PicardResult res = picard_maximal(make_params(11, 1, 8.0, 0.1), stepper);
    if (m > 1)
      for (std::size_t j = 0; j < prev.size(); ++j)
        monotone = monotone && res.solution.u[j] <= prev[j] + 1e-12;
    prev = res.solution.u;
  }
  c.expect(monotone, "iterates are not pointwise nonincreasing");

  std::vector<RadialSolution> ordered;
  for (double lam : {0.05, 0.1, 0.2}) {
    const PicardResult res = picard_maximal(make_params(11, 1, 8.0, lam));
    c.expect(res.converged, "no convergence at lambda=" + num(lam));
    ordered.push_back(res.solution);
  }
  bool decreasing = true;
  for (std::size_t j = 0; j < ordered.front().u.size(); ++j) {
    decreasing = decreasing && ordered[0].u[j] >= ordered[1].u[j] - 1e-12 &&
                 ordered[1].u[j] >= ordered[2].u[j] - 1e-12;
  }
  c.expect(decreasing, "maximal solutions are not ordered in lambda");
}

// 8. conservation: the energy identity and the integrated flux identity hold
//    along profiles from all three regimes, and exactly for the singular form
void criterion8(Criterion& c) {
  constexpr double kEnergyTol = 1e-5;
  constexpr double kSingularTol = 1e-10;
  std::vector<VProfile> profs;
  profs.push_back(integrate_ivp(make_params(11, 1, 8.0), 100.0, 1e-10));
  profs.push_back(integrate_ivp(make_params(13, 2, 5.0), 100.0, 1e-10));
  profs.push_back(integrate_ivp(make_params(5, 1, q_star(5, 1)), 20.0, 1e-11));

  for (const auto& prof : profs) {
    for (double R : {0.5, 1.0, 2.0}) {
      const double rel = std::fabs(pohozaev_residual(prof, R)) / pohozaev_scale(prof, R);
      c.expect(rel < kEnergyTol, "energy residual " + num(rel) + " at R=" + num(R) + " for n=" +
                                     std::to_string(prof.params.n));
    }
    const double fid = flux_identity_residual(prof);
    c.expect(fid < 10.0 * prof.tol,
             "flux identity residual " + num(fid) + " for n=" + std::to_string(prof.params.n));
  }

  const std::tuple<int, int, double> sing[] = {{5, 1, 5.0}, {13, 2, 5.0}};
  for (const auto& e : sing) {
    const SingularSolution s =
        singular_solution(std::get<0>(e), std::get<1>(e), std::get<2>(e));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double r = 0.1 * std::pow(100.0, i / 99.0);
      worst = std::max(worst,
                       std::fabs(s.flux_lhs(r) - s.flux_rhs(r)) / std::fabs(s.flux_lhs(r)));
    }
    c.expect(worst < kSingularTol, "singular identity residual " + num(worst));
  }
}

// 9. the weighted divergence is strictly negative on the quadrant (so no
//    closed orbits) and matches a finite-difference divergence of the field
void criterion9(Criterion& c) {
  constexpr double kFdTol = 1e-6;
  const ProblemParams p = make_params(13, 2, 5.0);
  const Equilibria eq = equilibria(p);

  int bad = 0;
  for (int i = 1; i <= 50; ++i)
    for (int j = 1; j <= 50; ++j) {
      const double y = 3.0 * eq.o2.y * i / 50.0;
      const double z = 3.0 * eq.o2.z * j / 50.0;
      if (!(dulac_divergence(y, z, p) < 0.0)) ++bad;
    }
  c.expect(bad == 0, std::to_string(bad) + " nonnegative grid values");

  const DerivedConstants dc = derive_constants(p);
  const double psi_pow = dc.a / (2.0 * p.k * p.q) - 1.0;
  const double pts[][2] = {{0.5, 0.7}, {1.5, 1.2}, {2.0, 0.3}};
  for (const auto& pt : pts) {
    const double y = pt[0] * eq.o2.y;
    const double z = pt[1] * eq.o2.z;
    oracle::Fn gy = [&](double yy) { return std::pow(z, psi_pow) * phase_field(yy, z, p)[0]; };
    oracle::Fn gz = [&](double zz) { return std::pow(zz, psi_pow) * phase_field(y, zz, p)[1]; };
    const double fd = oracle::d1(gy, y, 1e-5) + oracle::d1(gz, z, 1e-5);
    const double cf = dulac_divergence(y, z, p);
    c.expect(std::fabs(fd - cf) <= kFdTol * std::fabs(cf),
             "divergence mismatch " + num(std::fabs(fd - cf) / std::fabs(cf)));
  }
}

// 10. the comparison transform fixes 0, stays between s and 0, increases,
//     is convex with slope at most 1, and has a finite limit at -infinity
void criterion10(Criterion& c) {
  oracle::Rng rng(20260819ull);
  constexpr int kTrials = 1000;
  for (int trial = 0; trial < kTrials && c.ok; ++trial) {
    const int k = rng.uniform_int(1, 3);
    const double q = k * (1.0 + rng.uniform(0.1, 3.0));
    const double lam0 = rng.uniform(0.05, 10.0);
    const double lam = lam0 * rng.uniform(0.05, 0.95);
    const double s = -rng.uniform(0.0, 50.0);

    c.expect(phi_transform(0.0, lam, lam0, k, q) == 0.0, "transform must fix 0");
    const double vs = phi_transform(s, lam, lam0, k, q);
    c.expect(s <= vs && vs <= 0.0, "value " + num(vs) + " outside [s, 0] at s=" + num(s));

    const double h = 0.25;
    const double sm = std::min(s, -2.0 * h);
    const double fa = phi_transform(sm - h, lam, lam0, k, q);
    const double fb = phi_transform(sm, lam, lam0, k, q);
    const double fc = phi_transform(sm + h, lam, lam0, k, q);
    c.expect(fa < fb && fb < fc, "not increasing near s=" + num(sm));
    c.expect(fa - 2.0 * fb + fc >= -1e-10, "not convex near s=" + num(sm));
    c.expect((fc - fb) / h <= 1.0 + 1e-12 && (fb - fa) / h <= 1.0 + 1e-12,
             "slope above 1 near s=" + num(sm));

    const double deep = phi_transform(-1e12, lam, lam0, k, q);
    const double rho = std::pow(lam / lam0, 1.0 / k);
    const double expo = (q - k) / k;
    const double limit = 1.0 - std::pow(1.0 - rho, -1.0 / expo);
    c.expect(std::isfinite(deep) && deep < 0.0 &&
                 deep >= limit - 1e-9 * std::fabs(limit) - 1e-12,
             "deep value " + num(deep) + " escapes its finite limit " + num(limit));
  }
}

}  // namespace

int main() {
  struct Entry {
    int idx;
    const char* label;
    void (*fn)(Criterion&);
  };
  const Entry entries[] = {
      {1, "exponent tables: q_jl, mu_star, f_k inversion", &criterion1},
      {2, "entire critical profiles and parameter roots", &criterion2},
      {3, "critical-growth profile and orbit match closed forms", &criterion3},
      {4, "spiral regime: windings, near-limit multiplicity, far field", &criterion4},
      {5, "node regime: monotone orbit, single solution per level", &criterion5},
      {6, "extremal eigenvalue estimate (n=11, k=1, q=8)", &criterion6},
      {7, "fixed-point iteration agrees with shooting", &criterion7},
      {8, "conservation: energy, flux identity, singular solution", &criterion8},
      {9, "weighted divergence negative: no closed orbits", &criterion9},
      {10, "comparison transform: monotone, convex, bounded", &criterion10},
  };
  int failures = 0;
  for (const auto& e : entries) {
    Criterion c;
    try {
      e.fn(c);
    } catch (const std::exception& ex) {
      c.ok = false;
      c.detail = std::string("exception: ") + ex.what();
    }
    std::printf("[%s] criterion %d: %s%s%s\n", c.ok ? "PASS" : "FAIL", e.idx, e.label,
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
  }
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures;
}
