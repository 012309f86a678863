#pragma once

#include <cmath>
#include <vector>

#include "hessfowler/closed_forms.hpp"
#include "hessfowler/radial_ivp.hpp"

namespace hf {

// Stationary points of the autonomous (y, z) system
//
//   dy/dt = z - (a/(q-k)) y,
//   dz/dt = (2kq/(q-k)) z - q lt^(1/q) y^(1/k) z^(1-1/q),
//
// obtained from the radial problem with y = (dv/dt)^k e^(2k^2 t/(q-k)) and
// z = lt e^(2kq t/(q-k)) (-v)^q:  the origin and the image of the exact
// power-law solution.
struct Equilibria {
  PhasePoint o1;
  PhasePoint o2;
};

inline Equilibria equilibria(const ProblemParams& p) {
  const DerivedConstants dc = derive_constants(p);
  if (!(dc.lam_tilde > 0.0))
    throw DomainError("equilibria: interior stationary point needs q > nk/(n-2k)");
  Equilibria eq;
  eq.o1 = {0.0, 0.0};
  eq.o2 = {std::pow(dc.tau, p.k), dc.lam_tilde};
  return eq;
}

inline std::array<double, 2> phase_field(double y, double z, const ProblemParams& p) {
  if (!(y > 0.0) || !(z > 0.0)) throw DomainError("phase_field: defined on the open quadrant");
  const DerivedConstants dc = derive_constants(p);
  const double alpha = dc.a / (p.q - p.k);
  const double dy = z - alpha * y;
  const double dz = (2.0 * p.k * p.q / (p.q - p.k)) * z -
                    p.q * std::pow(dc.lam_tilde, 1.0 / p.q) * std::pow(y, 1.0 / p.k) *
                        std::pow(z, 1.0 - 1.0 / p.q);
  return {dy, dz};
}

// Divergence of the field rescaled by z^(a/(2kq) - 1).  Strictly negative on
// the open quadrant whenever q > q_star, which rules out closed orbits there.
inline double dulac_divergence(double y, double z, const ProblemParams& p) {
  if (!(y > 0.0) || !(z > 0.0))
    throw DomainError("dulac_divergence: defined on the open quadrant");
  const DerivedConstants dc = derive_constants(p);
  const double coeff = dc.a / (2.0 * p.k) - 1.0;
  return -coeff * std::pow(dc.lam_tilde, 1.0 / p.q) * std::pow(y, 1.0 / p.k) *
         std::pow(z, dc.a / (2.0 * p.k * p.q) - 1.0 - 1.0 / p.q);
}

struct PhaseSample {
  double t, y, z, dy, dz;
};

// Phase-plane image of a VProfile.  Keeps the log-deviation state of each
// node so that geometry near O2 (windings, level crossings) is resolved
// relative to its own amplitude instead of absolutely.
struct PhaseOrbit {
  ProblemParams params;
  DerivedConstants consts;
  Regime regime;
  Equilibria eq;
  std::vector<PhaseSample> samples;

  // node-aligned log-deviation state: y = y2 e^M, z = z2 e^(qL), so the
  // offsets del_y = y - y2 and del_z = z - z2 come out in expm1 form
  std::vector<double> t, L, M, dL, dM;

  double del_y(std::size_t i) const { return eq.o2.y * std::expm1(M[i]); }
  double del_z(std::size_t i) const { return consts.lam_tilde * std::expm1(params.q * L[i]); }
};

inline PhaseOrbit to_phase(const VProfile& prof) {
  if (prof.forcing != prof.consts.lam_tilde || prof.scale_c != 1.0)
    throw DomainError("to_phase: phase map requires the default forcing");
  PhaseOrbit orb;
  orb.params = prof.params;
  orb.consts = prof.consts;
  orb.regime = classify_regime(prof.params);
  orb.eq = equilibria(prof.params);
  const double y2 = orb.eq.o2.y;
  const double lt = prof.consts.lam_tilde;
  const double q = prof.params.q;
  orb.samples.reserve(prof.nodes.size());
  for (const auto& nd : prof.nodes) {
    orb.t.push_back(nd.t);
    orb.L.push_back(nd.L);
    orb.M.push_back(nd.M);
    orb.dL.push_back(nd.dL);
    orb.dM.push_back(nd.dM);
    PhaseSample s;
    s.t = nd.t;
    s.y = y2 * std::exp(nd.M);
    s.z = lt * std::exp(q * nd.L);
    s.dy = s.y * nd.dM;
    s.dz = s.z * q * nd.dL;
    orb.samples.push_back(s);
  }
  return orb;
}

// Completed revolutions of the orbit about O2: the winding angle of
// (y - y2, z - z2), unwrapped sample to sample, divided by 2 pi and floored.
// A thousandth of a turn of slack absorbs the endpoint's angular offset when
// the orbit closes onto a separatrix, where the sweep approaches a full turn
// from below.  min_count > 0 turns "orbit too short" into
// InsufficientRangeError.
inline int winding_count(const PhaseOrbit& orb, int min_count = 0) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  constexpr double kSlackTurns = 1e-3;
  if (orb.t.size() < 16)
    throw InsufficientRangeError("winding_count: orbit has too few samples");
  double total = 0.0;
  double prev = std::atan2(orb.del_z(0), orb.del_y(0));
  for (std::size_t i = 1; i < orb.t.size(); ++i) {
    const double dz = orb.del_z(i), dy = orb.del_y(i);
    if (dz == 0.0 && dy == 0.0) continue;
    const double ang = std::atan2(dz, dy);
    double step = ang - prev;
    step -= kTwoPi * std::round(step / kTwoPi);
    total += step;
    prev = ang;
  }
  const int count = static_cast<int>(std::floor(std::fabs(total) / kTwoPi + kSlackTurns));
  if (count < min_count)
    throw InsufficientRangeError("winding_count: orbit range too short for requested count");
  return count;
}

// Points where the orbit crosses the level set { z = lt (lam/lt)^(q/(q-k)) },
// the phase-plane locus on which the rescaled boundary eigenvalue equals lam.
inline std::vector<PhaseSample> line_intersections(const PhaseOrbit& orb, double lambda_query) {
  const double lt = orb.consts.lam_tilde;
  if (!(lambda_query > 0.0)) throw DomainError("line_intersections: lambda must be positive");
  const double q = orb.params.q, k = orb.params.k;
  // target in deviation form: del_z* = z* - z2
  const double dstar = lt * std::expm1(q / (q - k) * std::log(lambda_query / lt));
  if (orb.t.size() < 2) return {};

  auto dev_z_minus = [&](std::size_t i) { return orb.del_z(i) - dstar; };
  // Hermite-interpolated L on node interval [i, i+1]
  auto l_between = [&](std::size_t i, double tt) {
    return hermite_value(tt, orb.t[i], orb.t[i + 1], orb.L[i], orb.L[i + 1], orb.dL[i],
                         orb.dL[i + 1]);
  };
  std::vector<PhaseSample> hits;
  for (std::size_t i = 0; i + 1 < orb.t.size(); ++i) {
    double fa = dev_z_minus(i), fb = dev_z_minus(i + 1);
    if (fa == 0.0) {
      hits.push_back(orb.samples[i]);
      continue;
    }
    if (fa * fb >= 0.0) continue;
    double a = orb.t[i], b = orb.t[i + 1];
    for (int it = 0; it < 90 && (b - a) > 1e-14 * std::max(1.0, std::fabs(a)); ++it) {
      const double mtt = 0.5 * (a + b);
      const double fm = lt * std::expm1(q * l_between(i, mtt)) - dstar;
      if ((fa < 0.0) == (fm < 0.0)) {
        a = mtt;
        fa = fm;
      } else {
        b = mtt;
      }
    }
    const double tt = 0.5 * (a + b);
    const double Lt = l_between(i, tt);
    const double Mt = hermite_value(tt, orb.t[i], orb.t[i + 1], orb.M[i], orb.M[i + 1], orb.dM[i],
                                    orb.dM[i + 1]);
    const double dLt = hermite_deriv(tt, orb.t[i], orb.t[i + 1], orb.L[i], orb.L[i + 1], orb.dL[i],
                                     orb.dL[i + 1]);
    const double dMt = hermite_deriv(tt, orb.t[i], orb.t[i + 1], orb.M[i], orb.M[i + 1], orb.dM[i],
                                     orb.dM[i + 1]);
    PhaseSample s;
    s.t = tt;
    s.y = orb.eq.o2.y * std::exp(Mt);
    s.z = lt * std::exp(q * Lt);
    s.dy = s.y * dMt;
    s.dz = s.z * q * dLt;
    hits.push_back(s);
  }
  return hits;
}

}  // namespace hf
