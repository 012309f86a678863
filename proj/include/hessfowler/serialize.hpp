#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hessfowler/bvp.hpp"
#include "hessfowler/phase_plane.hpp"
#include "hessfowler/radial_ivp.hpp"
#include "hessfowler/radial_solution.hpp"
#include "hessfowler/version.hpp"

namespace hf {

using ojson = nlohmann::ordered_json;

// 17 significant digits: enough to round-trip any double, stable across runs.
inline std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline ojson params_to_json(const ProblemParams& p) {
  ojson j;
  j["n"] = p.n;
  j["k"] = p.k;
  j["q"] = p.q;
  if (p.lambda)
    j["lambda"] = *p.lambda;
  else
    j["lambda"] = nullptr;
  return j;
}

inline ProblemParams params_from_json(const ojson& j) {
  try {
    ProblemParams p;
    p.n = j.at("n").get<int>();
    p.k = j.at("k").get<int>();
    p.q = j.at("q").get<double>();
    if (j.contains("lambda") && !j.at("lambda").is_null())
      p.lambda = j.at("lambda").get<double>();
    auto bad = validate_params(p.n, p.k, p.q, p.lambda);
    if (!bad.empty()) throw DomainError("params: " + bad.front());
    return p;
  } catch (const ojson::exception& e) {
    throw DomainError(std::string("params: malformed (") + e.what() + ")");
  }
}

inline ojson json_header(const char* kind, const ProblemParams& p) {
  ojson j;
  j["kind"] = kind;
  j["tool"] = "hessfowler";
  j["version"] = kVersion;
  j["params"] = params_to_json(p);
  return j;
}

// ---- vprofile ----

inline ojson to_json(const VProfile& prof) {
  ojson j = json_header("vprofile", prof.params);
  j["s_init"] = prof.s_init;
  j["s_max"] = prof.s_max;
  j["tol"] = prof.tol;
  j["forcing"] = prof.forcing;
  ojson s = ojson::array(), v = ojson::array(), vp = ojson::array(), fx = ojson::array();
  for (const auto& nd : prof.nodes) {
    const double ss = std::exp(nd.t);
    s.push_back(ss);
    const auto smp = prof.sample_at(ss);
    v.push_back(smp.v);
    vp.push_back(smp.vprime);
    fx.push_back(smp.flux);
  }
  j["samples"] = ojson{{"s", std::move(s)},
                       {"v", std::move(v)},
                       {"vprime", std::move(vp)},
                       {"flux", std::move(fx)}};
  return j;
}

inline VProfile vprofile_from_json(const ojson& j) {
  try {
    if (j.at("kind").get<std::string>() != "vprofile")
      throw DomainError("vprofile: wrong kind field");
    VProfile prof;
    prof.params = params_from_json(j.at("params"));
    prof.consts = derive_constants(prof.params);
    prof.s_init = j.at("s_init").get<double>();
    prof.s_max = j.at("s_max").get<double>();
    prof.tol = j.at("tol").get<double>();
    prof.forcing = j.at("forcing").get<double>();
    if (!(prof.forcing > 0.0)) throw DomainError("vprofile: forcing must be positive");
    prof.scale_c = std::pow(prof.consts.lam_tilde / prof.forcing,
                            1.0 / (prof.params.q - prof.params.k));
    const auto& smp = j.at("samples");
    const auto& s = smp.at("s");
    const auto& v = smp.at("v");
    const auto& fx = smp.at("flux");
    if (s.size() != v.size() || s.size() != fx.size() || s.size() < 2)
      throw DomainError("vprofile: sample arrays disagree or too short");
    const double tau = prof.consts.tau;
    const double alpha = prof.consts.a / (prof.params.q - prof.params.k);
    const double log_c = std::log(prof.scale_c);
    const double log_ctk = prof.params.k * std::log(prof.scale_c * tau);
    prof.nodes.reserve(s.size());
    double prev_t = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double ss = s[i].get<double>();
      if (!(ss > 0.0)) throw DomainError("vprofile: sample s must be positive");
      const double t = std::log(ss);
      if (!(t > prev_t)) throw DomainError("vprofile: sample s must be strictly increasing");
      prev_t = t;
      const double vv = v[i].get<double>();
      const double ff = fx[i].get<double>();
      if (!(vv < 0.0)) throw DomainError("vprofile: sample v must be negative");
      if (!(ff > 0.0)) throw DomainError("vprofile: sample flux must be positive");
      VProfile::Node nd;
      nd.t = t;
      nd.L = std::log(-vv) + tau * t - log_c;
      nd.M = std::log(ff) - alpha * t - log_ctk;
      detail::log_deviation_rhs(tau, alpha, prof.params.k, prof.params.q, nd.L, nd.M, nd.dL,
                                nd.dM);
      prof.nodes.push_back(nd);
    }
    prof.s_init = std::min(prof.s_init, s.front().get<double>());
    prof.t0 = prof.nodes.front().t;
    prof.t1 = prof.nodes.back().t;
    return prof;
  } catch (const ojson::exception& e) {
    throw DomainError(std::string("vprofile: malformed (") + e.what() + ")");
  }
}

// ---- radial solution ----

inline ojson to_json(const RadialSolution& sol) {
  ojson j = json_header("solution", sol.params);
  j["lambda_physical"] = sol.lambda_physical;
  j["origin_value"] = sol.origin_value;
  j["source"] = source_name(sol.source);
  j["samples"] = ojson{{"r", sol.r}, {"u", sol.u}};
  return j;
}

inline RadialSolution solution_from_json(const ojson& j) {
  try {
    if (j.at("kind").get<std::string>() != "solution")
      throw DomainError("solution: wrong kind field");
    RadialSolution sol;
    sol.params = params_from_json(j.at("params"));
    sol.lambda_physical = j.at("lambda_physical").get<double>();
    sol.origin_value = j.at("origin_value").get<double>();
    const std::string src = j.at("source").get<std::string>();
    if (src == "shooting")
      sol.source = SolutionSource::Shooting;
    else if (src == "picard")
      sol.source = SolutionSource::Picard;
    else if (src == "closed_form")
      sol.source = SolutionSource::ClosedForm;
    else
      throw DomainError("solution: unknown source " + src);
    const auto& smp = j.at("samples");
    sol.r = smp.at("r").get<std::vector<double>>();
    sol.u = smp.at("u").get<std::vector<double>>();
    if (sol.r.size() != sol.u.size() || sol.r.size() < 4)
      throw DomainError("solution: sample arrays disagree or too short");
    for (std::size_t i = 1; i < sol.r.size(); ++i)
      if (!(sol.r[i] > sol.r[i - 1]))
        throw DomainError("solution: r must be strictly increasing");
    return sol;
  } catch (const ojson::exception& e) {
    throw DomainError(std::string("solution: malformed (") + e.what() + ")");
  }
}

// ---- phase orbit ----

inline ojson to_json(const PhaseOrbit& orb, std::optional<int> winding) {
  ojson j = json_header("orbit", orb.params);
  j["regime"] = regime_name(orb.regime.tag);
  j["equilibria"] = ojson{{"o1", {orb.eq.o1.y, orb.eq.o1.z}}, {"o2", {orb.eq.o2.y, orb.eq.o2.z}}};
  if (winding)
    j["winding"] = *winding;
  else
    j["winding"] = nullptr;
  ojson t = ojson::array(), y = ojson::array(), z = ojson::array();
  for (const auto& s : orb.samples) {
    t.push_back(s.t);
    y.push_back(s.y);
    z.push_back(s.z);
  }
  j["samples"] = ojson{{"t", std::move(t)}, {"y", std::move(y)}, {"z", std::move(z)}};
  return j;
}

// ---- bifurcation curve ----

inline ojson to_json(const BifurcationCurve& curve) {
  ojson j = json_header("branch", curve.params);
  ojson s = ojson::array(), lr = ojson::array(), lp = ojson::array(), A = ojson::array();
  for (const auto& pt : curve.points) {
    s.push_back(pt.s);
    lr.push_back(pt.lambda_rescaled);
    lp.push_back(pt.lambda_physical);
    A.push_back(pt.A);
  }
  j["points"] = ojson{{"s", std::move(s)},
                      {"lambda_rescaled", std::move(lr)},
                      {"lambda_physical", std::move(lp)},
                      {"A", std::move(A)}};
  return j;
}

// ---- multiplicity ----

inline ojson to_json(const MultiplicityReport& rep, const ProblemParams& p) {
  ojson j = json_header("multiplicity", p);
  j["lambda_physical"] = rep.lambda_physical;
  j["lambda_rescaled"] = rep.lambda_rescaled;
  j["count"] = rep.count;
  j["truncated"] = rep.truncated;
  j["roots"] = rep.roots;
  return j;
}

// ---- CSV ----

namespace detail {

inline void csv_preamble(std::ostream& os, const char* kind, const ProblemParams& p) {
  os << "# hessfowler " << kVersion << "\n";
  os << "# kind=" << kind << "\n";
  os << "# n=" << p.n << " k=" << p.k << " q=" << fmt_g(p.q);
  if (p.lambda) os << " lambda=" << fmt_g(*p.lambda);
  os << "\n";
}

}  // namespace detail

inline void write_csv(std::ostream& os, const VProfile& prof) {
  detail::csv_preamble(os, "vprofile", prof.params);
  os << "s,v,vprime,flux\n";
  for (const auto& nd : prof.nodes) {
    const auto smp = prof.sample_at(std::exp(nd.t));
    os << fmt_g(smp.s) << ',' << fmt_g(smp.v) << ',' << fmt_g(smp.vprime) << ','
       << fmt_g(smp.flux) << "\n";
  }
}

inline void write_csv(std::ostream& os, const RadialSolution& sol) {
  detail::csv_preamble(os, "solution", sol.params);
  os << "r,u\n";
  for (std::size_t i = 0; i < sol.r.size(); ++i)
    os << fmt_g(sol.r[i]) << ',' << fmt_g(sol.u[i]) << "\n";
}

inline void write_csv(std::ostream& os, const PhaseOrbit& orb) {
  detail::csv_preamble(os, "orbit", orb.params);
  os << "t,y,z\n";
  for (const auto& s : orb.samples)
    os << fmt_g(s.t) << ',' << fmt_g(s.y) << ',' << fmt_g(s.z) << "\n";
}

inline void write_csv(std::ostream& os, const BifurcationCurve& curve) {
  detail::csv_preamble(os, "branch", curve.params);
  os << "s,lambda_rescaled,lambda_physical,A\n";
  for (const auto& pt : curve.points)
    os << fmt_g(pt.s) << ',' << fmt_g(pt.lambda_rescaled) << ',' << fmt_g(pt.lambda_physical)
       << ',' << fmt_g(pt.A) << "\n";
}

}  // namespace hf
