// Command-line front end: every library computation behind one deterministic
// binary.  JSON is the canonical output; CSV is a per-kind projection.
//
// Exit codes: 0 success, 2 validation, 3 regime, 4 numeric.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hessfowler/hessfowler.hpp"

namespace {

std::optional<double> env_tol() {
  const char* s = std::getenv("HF_TOL");
  if (!s) return {};
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || errno == ERANGE || !(v > 0.0) || !std::isfinite(v))
    throw hf::DomainError("HF_TOL must be a positive finite number");
  return v;
}

double resolve_tol(const std::optional<double>& flag, double fallback) {
  if (flag) return *flag;
  if (auto e = env_tol()) return *e;
  return fallback;
}

void write_text(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw hf::DomainError("cannot open output file: " + path);
  os << content;
  if (!os) throw hf::DomainError("failed writing output file: " + path);
}

std::string dump_json(const hf::ojson& j) { return j.dump(2) + "\n"; }

hf::ojson rational_json(const hf::Rational& r) {
  hf::ojson j;
  j["num"] = r.num;
  j["den"] = r.den;
  j["value"] = r.to_double();
  return j;
}

// ---- exponents ----

struct ExponentsArgs {
  int n = 0, k = 0;
  std::optional<double> q;
  std::string json_path;
};

int run_exponents(const ExponentsArgs& a) {
  if (a.q) {
    hf::make_params(a.n, a.k, *a.q);
  } else {
    auto bad = hf::validate_params(a.n, a.k, static_cast<double>(a.k) + 1.0);
    if (!bad.empty()) throw hf::DomainError("invalid parameters: " + bad.front());
  }
  const hf::Rational cnk = hf::c_nk(a.n, a.k);
  const hf::Rational qs_rat(static_cast<std::int64_t>(a.n + 2) * a.k, a.n - 2 * a.k);
  const auto qjl = hf::q_jl(a.n, a.k);
  const hf::Rational mu = hf::mu_star(a.n, a.k);

  std::ostringstream out;
  out << "n = " << a.n << ", k = " << a.k << "\n";
  out << "c_nk      = " << cnk.to_string() << " = " << hf::fmt_g(cnk.to_double()) << "\n";
  out << "q_star    = " << qs_rat.to_string() << " = " << hf::fmt_g(qs_rat.to_double()) << "\n";
  if (qjl)
    out << "q_jl      = " << hf::fmt_g(*qjl) << "\n";
  else
    out << "q_jl      = inf\n";
  out << "mu_star   = " << mu.to_string() << " = " << hf::fmt_g(mu.to_double()) << "\n";

  hf::ojson j;
  j["kind"] = "exponents";
  j["tool"] = "hessfowler";
  j["version"] = hf::kVersion;
  j["params"] = hf::ojson{{"n", a.n}, {"k", a.k}};
  j["c_nk"] = rational_json(cnk);
  j["q_star"] = rational_json(qs_rat);
  if (qjl)
    j["q_jl"] = *qjl;
  else
    j["q_jl"] = nullptr;
  j["mu_star"] = rational_json(mu);

  if (a.q) {
    hf::ProblemParams p = hf::make_params(a.n, a.k, *a.q);
    const auto dc = hf::derive_constants(p);
    const auto reg = hf::classify_regime(p);
    j["params"]["q"] = *a.q;
    hf::ojson wq;
    wq["tau"] = dc.tau;
    wq["a"] = dc.a;
    wq["lambda_tilde"] = dc.lam_tilde;
    wq["trace"] = dc.trace_j;
    wq["det"] = dc.det_j;
    wq["discriminant"] = dc.discriminant;
    wq["regime"] = hf::regime_name(reg.tag);
    wq["eigenvalues"] = hf::ojson::array(
        {{reg.eig_minus.real(), reg.eig_minus.imag()}, {reg.eig_plus.real(), reg.eig_plus.imag()}});
    wq["f_k"] = hf::f_k(a.k, *a.q);
    j["with_q"] = wq;
    out << "q         = " << hf::fmt_g(*a.q) << "\n";
    out << "tau       = " << hf::fmt_g(dc.tau) << "\n";
    out << "a         = " << hf::fmt_g(dc.a) << "\n";
    out << "lambda~   = " << hf::fmt_g(dc.lam_tilde) << "\n";
    out << "trace     = " << hf::fmt_g(dc.trace_j) << "\n";
    out << "det       = " << hf::fmt_g(dc.det_j) << "\n";
    out << "disc      = " << hf::fmt_g(dc.discriminant) << "\n";
    out << "regime    = " << hf::regime_name(reg.tag) << "\n";
    out << "eigs      = " << hf::fmt_g(reg.eig_minus.real()) << (reg.eig_minus.imag() < 0 ? "" : "+")
        << hf::fmt_g(reg.eig_minus.imag()) << "i, " << hf::fmt_g(reg.eig_plus.real())
        << (reg.eig_plus.imag() < 0 ? "" : "+") << hf::fmt_g(reg.eig_plus.imag()) << "i\n";
  }
  std::cout << out.str();
  if (!a.json_path.empty()) write_text(a.json_path, dump_json(j));
  return 0;
}

// ---- orbit ----

struct OrbitArgs {
  int n = 0, k = 0;
  double q = 0.0;
  double s_max = 1e4;
  std::optional<double> tol;
  double s_init = 1e-4;
  int min_winding = 0;
  std::string json_path, csv_path;
  std::string profile_json_path, profile_csv_path;
};

int run_orbit(const OrbitArgs& a) {
  hf::ProblemParams p = hf::make_params(a.n, a.k, a.q);
  hf::IvpOptions opt;
  opt.s_max = a.s_max;
  opt.tol = resolve_tol(a.tol, 1e-10);
  opt.s_init = a.s_init;
  const hf::VProfile prof = hf::integrate_ivp(p, opt);
  const hf::PhaseOrbit orb = hf::to_phase(prof);

  std::optional<int> winding;
  try {
    winding = hf::winding_count(orb, a.min_winding);
  } catch (const hf::InsufficientRangeError&) {
    if (a.min_winding > 0) throw;
  }

  std::cout << "regime    = " << hf::regime_name(orb.regime.tag) << "\n";
  std::cout << "o2        = (" << hf::fmt_g(orb.eq.o2.y) << ", " << hf::fmt_g(orb.eq.o2.z)
            << ")\n";
  if (winding)
    std::cout << "winding   = " << *winding << "\n";
  else
    std::cout << "winding   = n/a\n";
  const auto& last = orb.samples.back();
  std::cout << "final     = (" << hf::fmt_g(last.y) << ", " << hf::fmt_g(last.z) << ") at t="
            << hf::fmt_g(last.t) << "\n";
  std::cout << "samples   = " << orb.samples.size() << "\n";

  if (!a.json_path.empty()) write_text(a.json_path, dump_json(hf::to_json(orb, winding)));
  if (!a.csv_path.empty()) {
    std::ostringstream os;
    hf::write_csv(os, orb);
    write_text(a.csv_path, os.str());
  }
  if (!a.profile_json_path.empty()) write_text(a.profile_json_path, dump_json(hf::to_json(prof)));
  if (!a.profile_csv_path.empty()) {
    std::ostringstream os;
    hf::write_csv(os, prof);
    write_text(a.profile_csv_path, os.str());
  }
  return 0;
}

// ---- bifurcation ----

struct BifurcationArgs {
  int n = 0, k = 0;
  double q = 0.0;
  double s_max = 1e4;
  double s_lo = 1e-2;
  int count = 200;
  std::optional<double> tol;
  std::string json_path, csv_path;
};

int run_bifurcation(const BifurcationArgs& a) {
  hf::ProblemParams p = hf::make_params(a.n, a.k, a.q);
  hf::IvpOptions opt;
  opt.s_max = a.s_max;
  opt.tol = resolve_tol(a.tol, 1e-10);
  const hf::VProfile prof = hf::integrate_ivp(p, opt);
  const hf::BifurcationCurve curve = hf::bifurcation_curve(prof, a.s_lo, a.s_max, a.count);
  const hf::BifurcationPoint peak = hf::branch_peak(prof);
  const double cnk = prof.consts.cnk.to_double();

  std::cout << "points          = " << curve.points.size() << "\n";
  std::cout << "branch limit    = " << hf::fmt_g(cnk * prof.consts.lam_tilde)
            << " (rescaled " << hf::fmt_g(prof.consts.lam_tilde) << ")\n";
  std::cout << "branch peak     = " << hf::fmt_g(peak.lambda_physical) << " (rescaled "
            << hf::fmt_g(peak.lambda_rescaled) << ") at s0=" << hf::fmt_g(peak.s) << "\n";

  if (!a.json_path.empty()) write_text(a.json_path, dump_json(hf::to_json(curve)));
  if (!a.csv_path.empty()) {
    std::ostringstream os;
    hf::write_csv(os, curve);
    write_text(a.csv_path, os.str());
  }
  return 0;
}

// ---- solve ----

struct SolveArgs {
  int n = 0, k = 0;
  double q = 0.0, lambda = 0.0;
  double s_max = 1e4;
  std::optional<double> tol;
  std::string out_dir = ".";
  std::string format = "json";
  std::string json_path;
};

void write_solution_file(const hf::RadialSolution& sol, const std::string& dir,
                         const std::string& fmt, int index, std::vector<std::string>& files) {
  const std::string base = dir + "/solution_" + std::to_string(index);
  if (fmt == "csv") {
    std::ostringstream os;
    hf::write_csv(os, sol);
    write_text(base + ".csv", os.str());
    files.push_back(base + ".csv");
  } else {
    write_text(base + ".json", dump_json(hf::to_json(sol)));
    files.push_back(base + ".json");
  }
}

int run_solve(const SolveArgs& a) {
  if (a.format != "json" && a.format != "csv")
    throw hf::DomainError("--format must be json or csv");
  hf::ProblemParams p = hf::make_params(a.n, a.k, a.q, a.lambda);
  const double qs = hf::q_star(a.n, a.k);
  std::vector<std::string> files;

  if (a.q == qs) {
    // closed-form branch at the critical exponent
    const auto sols = hf::critical_solutions(a.lambda, a.n, a.k);
    int idx = 1;
    for (const auto& cs : sols) {
      hf::RadialSolution rs = cs.sample();
      write_solution_file(rs, a.out_dir, a.format, idx, files);
      std::cout << "solution " << idx << ": d=" << hf::fmt_g(cs.d) << " u(0)="
                << hf::fmt_g(rs.origin_value) << " -> " << files.back() << "\n";
      ++idx;
    }
    std::cout << "count     = " << sols.size() << "\n";
    std::cout << "truncated = false\n";
    if (!a.json_path.empty()) {
      hf::MultiplicityReport rep;
      rep.lambda_physical = a.lambda;
      rep.lambda_rescaled = a.lambda / hf::c_nk(a.n, a.k).to_double();
      rep.count = static_cast<int>(sols.size());
      rep.truncated = false;
      hf::ojson j = hf::to_json(rep, p);
      j["files"] = files;
      write_text(a.json_path, dump_json(j));
    }
    return 0;
  }

  hf::IvpOptions opt;
  opt.s_max = a.s_max;
  opt.tol = resolve_tol(a.tol, 1e-10);
  const hf::VProfile prof = hf::integrate_ivp(p, opt);  // throws RegimeError for q < q_star
  const hf::MultiplicityReport rep = hf::count_solutions(prof, a.lambda);

  int idx = 1;
  for (double s0 : rep.roots) {
    hf::RadialSolution rs = hf::reconstruct_u(prof, s0);
    write_solution_file(rs, a.out_dir, a.format, idx, files);
    std::cout << "solution " << idx << ": s0=" << hf::fmt_g(s0) << " u(0)="
              << hf::fmt_g(rs.origin_value) << " -> " << files.back() << "\n";
    ++idx;
  }
  std::cout << "count     = " << rep.count << "\n";
  std::cout << "truncated = " << (rep.truncated ? "true" : "false") << "\n";
  if (!a.json_path.empty()) {
    hf::ojson j = hf::to_json(rep, p);
    j["files"] = files;
    write_text(a.json_path, dump_json(j));
  }
  return 0;
}

// ---- verify ----

struct VerifyArgs {
  std::string input;
  std::optional<double> tol;
};

int run_verify(const VerifyArgs& a) {
  std::ifstream is(a.input, std::ios::binary);
  if (!is) throw hf::DomainError("cannot open input file: " + a.input);
  hf::ojson j;
  try {
    is >> j;
  } catch (const hf::ojson::exception& e) {
    throw hf::DomainError(std::string("input is not valid JSON: ") + e.what());
  }
  std::optional<double> tol = a.tol;
  if (!tol) tol = env_tol();

  std::string kind;
  try {
    kind = j.at("kind").get<std::string>();
  } catch (const hf::ojson::exception&) {
    throw hf::DomainError("input JSON lacks a kind field");
  }

  hf::VerifyReport rep;
  if (kind == "vprofile") {
    rep = hf::verify_vprofile(hf::vprofile_from_json(j), tol);
  } else if (kind == "solution") {
    rep = hf::verify_solution(hf::solution_from_json(j), tol);
  } else {
    throw hf::DomainError("verify supports kinds vprofile and solution, got: " + kind);
  }

  for (const auto& c : rep.checks)
    std::cout << "check " << c.name << ": residual=" << hf::fmt_g(c.value)
              << " tol=" << hf::fmt_g(c.tol) << (c.pass ? " PASS" : " FAIL") << "\n";
  const bool ok = rep.pass();
  std::cout << "verify    = " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial k-Hessian boundary-value structure: exponents, orbits, branches"};
  app.require_subcommand(1);

  ExponentsArgs ea;
  auto* exp_cmd = app.add_subcommand("exponents", "critical exponents and constants for (n, k)");
  exp_cmd->add_option("--n", ea.n, "dimension")->required();
  exp_cmd->add_option("--k", ea.k, "Hessian order")->required();
  exp_cmd->add_option("--q", ea.q, "growth exponent (adds regime diagnostics)");
  exp_cmd->add_option("--json", ea.json_path, "write JSON report to file ('-' for stdout)");

  OrbitArgs oa;
  auto* orb_cmd = app.add_subcommand("orbit", "integrate the global profile, emit phase orbit");
  orb_cmd->add_option("--n", oa.n, "dimension")->required();
  orb_cmd->add_option("--k", oa.k, "Hessian order")->required();
  orb_cmd->add_option("--q", oa.q, "growth exponent")->required();
  orb_cmd->add_option("--s-max", oa.s_max, "integration endpoint in s");
  orb_cmd->add_option("--tol", oa.tol, "integrator tolerance (default 1e-10, or HF_TOL)");
  orb_cmd->add_option("--s-init", oa.s_init, "series handoff radius");
  orb_cmd->add_option("--min-winding", oa.min_winding,
                      "fail with a range error unless this many revolutions are resolved");
  orb_cmd->add_option("--json", oa.json_path, "write orbit JSON to file");
  orb_cmd->add_option("--csv", oa.csv_path, "write orbit CSV (t,y,z) to file");
  orb_cmd->add_option("--profile-json", oa.profile_json_path,
                      "write the underlying profile JSON (s,v,vprime,flux) to file");
  orb_cmd->add_option("--profile-csv", oa.profile_csv_path,
                      "write the underlying profile CSV to file");

  BifurcationArgs ba;
  auto* bif_cmd = app.add_subcommand("bifurcation", "emit the branch lambda(s0), A(s0)");
  bif_cmd->add_option("--n", ba.n, "dimension")->required();
  bif_cmd->add_option("--k", ba.k, "Hessian order")->required();
  bif_cmd->add_option("--q", ba.q, "growth exponent")->required();
  bif_cmd->add_option("--s-max", ba.s_max, "integration endpoint in s");
  bif_cmd->add_option("--s-lo", ba.s_lo, "first truncation radius of the branch grid");
  bif_cmd->add_option("--count", ba.count, "number of branch points");
  bif_cmd->add_option("--tol", ba.tol, "integrator tolerance (default 1e-10, or HF_TOL)");
  bif_cmd->add_option("--json", ba.json_path, "write branch JSON to file");
  bif_cmd->add_option("--csv", ba.csv_path, "write branch CSV to file");

  SolveArgs sa;
  auto* sol_cmd = app.add_subcommand("solve", "all unit-ball solutions at a given lambda");
  sol_cmd->add_option("--n", sa.n, "dimension")->required();
  sol_cmd->add_option("--k", sa.k, "Hessian order")->required();
  sol_cmd->add_option("--q", sa.q, "growth exponent")->required();
  sol_cmd->add_option("--lambda", sa.lambda, "physical eigenvalue")->required();
  sol_cmd->add_option("--s-max", sa.s_max, "integration endpoint in s");
  sol_cmd->add_option("--tol", sa.tol, "integrator tolerance (default 1e-10, or HF_TOL)");
  sol_cmd->add_option("--out-dir", sa.out_dir, "directory for solution profile files");
  sol_cmd->add_option("--format", sa.format, "profile file format: json or csv");
  sol_cmd->add_option("--json", sa.json_path, "write multiplicity summary JSON to file");

  VerifyArgs va;
  auto* ver_cmd = app.add_subcommand("verify", "residual checks on a stored JSON artifact");
  ver_cmd->add_option("--input", va.input, "vprofile or solution JSON file")->required();
  ver_cmd->add_option("--tol", va.tol, "uniform residual tolerance (default per check, or HF_TOL)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (exp_cmd->parsed()) return run_exponents(ea);
    if (orb_cmd->parsed()) return run_orbit(oa);
    if (bif_cmd->parsed()) return run_bifurcation(ba);
    if (sol_cmd->parsed()) return run_solve(sa);
    if (ver_cmd->parsed()) return run_verify(va);
  } catch (const hf::DomainError& e) {
    std::cerr << "error (validation): " << e.what() << "\n";
    return 2;
  } catch (const hf::RegimeError& e) {
    std::cerr << "error (regime): " << e.what() << "\n";
    return 3;
  } catch (const hf::Error& e) {
    std::cerr << "error (numeric): " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
