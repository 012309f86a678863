#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "hessfowler/hessfowler.hpp"

using namespace hf;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

TEST_CASE("fmt_g round trips doubles through text") {
  const double values[] = {1.0 / 3.0, 1e-280, -2.718281828459045e15, 5.0, 0.0, 1e300};
  for (double x : values) {
    const std::string s = fmt_g(x);
    REQUIRE(std::strtod(s.c_str(), nullptr) == x);
  }
  REQUIRE(fmt_g(5.0) == "5");
}

TEST_CASE("params serialize and parse") {
  SECTION("with lambda") {
    const ProblemParams p = make_params(13, 2, 5.0, 0.25);
    const ojson j = params_to_json(p);
    REQUIRE(j.at("n").get<int>() == 13);
    REQUIRE(j.at("k").get<int>() == 2);
    REQUIRE(j.at("q").get<double>() == 5.0);
    REQUIRE(j.at("lambda").get<double>() == 0.25);
    const ProblemParams p2 = params_from_json(ojson::parse(j.dump()));
    REQUIRE(p2.n == p.n);
    REQUIRE(p2.k == p.k);
    REQUIRE(p2.q == p.q);
    REQUIRE(p2.lambda.has_value());
    REQUIRE(*p2.lambda == 0.25);
  }
  SECTION("without lambda") {
    const ProblemParams p = make_params(11, 1, 8.0);
    const ojson j = params_to_json(p);
    REQUIRE(j.at("lambda").is_null());
    const ProblemParams p2 = params_from_json(ojson::parse(j.dump()));
    REQUIRE_FALSE(p2.lambda.has_value());
  }
  SECTION("malformed input is rejected") {
    REQUIRE_THROWS_AS(params_from_json(ojson::parse(R"({"n": 5, "k": 1})")), DomainError);
    REQUIRE_THROWS_AS(params_from_json(ojson::parse(R"({"n": "five", "k": 1, "q": 5.0})")),
                      DomainError);
    REQUIRE_THROWS_AS(params_from_json(ojson::parse(R"({"n": 4, "k": 2, "q": 5.0})")),
                      DomainError);
    REQUIRE_THROWS_AS(params_from_json(ojson::parse(R"({"n": 5, "k": 1, "q": 0.5})")),
                      DomainError);
    REQUIRE_THROWS_AS(params_from_json(ojson::parse(R"({"n": 5, "k": 1, "q": 5.0, "lambda": -1})")),
                      DomainError);
  }
}

TEST_CASE("vprofile json round trip preserves the curve") {
  const ProblemParams p = make_params(13, 2, 5.0);
  const VProfile prof = integrate_ivp(p, 100.0, 1e-10);

  const ojson j = to_json(prof);
  REQUIRE(j.at("kind").get<std::string>() == "vprofile");
  REQUIRE(j.at("tool").get<std::string>() == "hessfowler");
  REQUIRE(j.at("version").get<std::string>() == std::string(kVersion));
  REQUIRE(j.at("params").at("n").get<int>() == 13);
  REQUIRE(j.at("s_max").get<double>() == 100.0);
  REQUIRE(j.at("forcing").get<double>() == prof.consts.lam_tilde);
  REQUIRE(j.at("samples").at("s").size() == prof.nodes.size());

  const VProfile back = vprofile_from_json(ojson::parse(j.dump()));
  REQUIRE(back.params.n == 13);
  REQUIRE(back.params.k == 2);
  REQUIRE_FALSE(back.params.lambda.has_value());
  REQUIRE(back.scale_c == prof.scale_c);
  const double probes[] = {1e-3, 0.01, 0.1, 1.0, 5.0, 20.0, 80.0};
  for (double s : probes) {
    const double v1 = prof.v_at(s), v2 = back.v_at(s);
    const double w1 = prof.vprime_at(s), w2 = back.vprime_at(s);
    const double f1 = prof.flux_at(s), f2 = back.flux_at(s);
    REQUIRE(std::fabs(v2 - v1) <= 1e-12 * std::max(1.0, std::fabs(v1)));
    REQUIRE(std::fabs(w2 - w1) <= 1e-12 * std::max(1.0, std::fabs(w1)));
    REQUIRE(std::fabs(f2 - f1) <= 1e-12 * std::max(1.0, std::fabs(f1)));
  }

  SECTION("rescaled forcing survives the trip") {
    IvpOptions opt;
    opt.s_max = 50.0;
    opt.tol = 1e-10;
    opt.forcing = 2.0 * prof.consts.lam_tilde;
    const VProfile forced = integrate_ivp(p, opt);
    const VProfile fb = vprofile_from_json(ojson::parse(to_json(forced).dump()));
    REQUIRE(fb.forcing == forced.forcing);
    REQUIRE(fb.scale_c == forced.scale_c);
    for (double s : {0.5, 3.0, 30.0}) {
      const double v1 = forced.v_at(s), v2 = fb.v_at(s);
      REQUIRE(std::fabs(v2 - v1) <= 1e-12 * std::max(1.0, std::fabs(v1)));
    }
  }

  SECTION("tampered payloads are rejected") {
    ojson bad = ojson::parse(j.dump());
    bad["kind"] = "solution";
    REQUIRE_THROWS_AS(vprofile_from_json(bad), DomainError);

    bad = ojson::parse(j.dump());
    bad["samples"]["s"][3] = bad["samples"]["s"][2];
    REQUIRE_THROWS_AS(vprofile_from_json(bad), DomainError);

    bad = ojson::parse(j.dump());
    bad["samples"]["v"].erase(bad["samples"]["v"].size() - 1);
    REQUIRE_THROWS_AS(vprofile_from_json(bad), DomainError);

    bad = ojson::parse(j.dump());
    bad["forcing"] = -1.0;
    REQUIRE_THROWS_AS(vprofile_from_json(bad), DomainError);
  }
}

TEST_CASE("solution json round trip is exact") {
  const double lam = mu_star(5, 1).to_double() / 2.0;
  const auto sols = critical_solutions(lam, 5, 1);
  REQUIRE(sols.size() == 2);
  const RadialSolution rs = sols[0].sample(64);

  const ojson j = to_json(rs);
  REQUIRE(j.at("kind").get<std::string>() == "solution");
  REQUIRE(j.at("source").get<std::string>() == "closed_form");

  const RadialSolution back = solution_from_json(ojson::parse(j.dump()));
  REQUIRE(back.lambda_physical == rs.lambda_physical);
  REQUIRE(back.origin_value == rs.origin_value);
  REQUIRE(back.source == rs.source);
  REQUIRE(back.r.size() == rs.r.size());
  for (std::size_t i = 0; i < rs.r.size(); ++i) {
    REQUIRE(back.r[i] == rs.r[i]);
    REQUIRE(back.u[i] == rs.u[i]);
  }

  SECTION("tampered payloads are rejected") {
    ojson bad = ojson::parse(j.dump());
    bad["source"] = "oracle";
    REQUIRE_THROWS_AS(solution_from_json(bad), DomainError);

    bad = ojson::parse(j.dump());
    std::swap(bad["samples"]["r"][10], bad["samples"]["r"][11]);
    REQUIRE_THROWS_AS(solution_from_json(bad), DomainError);

    bad = ojson::parse(j.dump());
    ojson three_r = ojson::array(), three_u = ojson::array();
    for (int i = 0; i < 3; ++i) {
      three_r.push_back(bad["samples"]["r"][i]);
      three_u.push_back(bad["samples"]["u"][i]);
    }
    bad["samples"]["r"] = three_r;
    bad["samples"]["u"] = three_u;
    REQUIRE_THROWS_AS(solution_from_json(bad), DomainError);

    bad = ojson::parse(j.dump());
    bad["kind"] = "vprofile";
    REQUIRE_THROWS_AS(solution_from_json(bad), DomainError);
  }
}

TEST_CASE("orbit json carries regime and winding") {
  const ProblemParams p = make_params(13, 2, 5.0);
  const VProfile prof = integrate_ivp(p, 1e3, 1e-10);
  const PhaseOrbit orb = to_phase(prof);

  const int w = winding_count(orb);
  const ojson j = to_json(orb, w);
  REQUIRE(j.at("kind").get<std::string>() == "orbit");
  REQUIRE(j.at("regime").get<std::string>() == "SPIRAL");
  REQUIRE(j.at("winding").get<int>() == w);
  const auto eq = equilibria(p);
  REQUIRE(j.at("equilibria").at("o2")[0].get<double>() == eq.o2.y);
  REQUIRE(j.at("equilibria").at("o2")[1].get<double>() == eq.o2.z);
  REQUIRE(j.at("samples").at("t").size() == orb.samples.size());
  REQUIRE(j.at("samples").at("y").size() == orb.samples.size());
  REQUIRE(j.at("samples").at("z").size() == orb.samples.size());
  REQUIRE(j.at("samples").at("y")[0].get<double>() == orb.samples.front().y);

  const ojson j2 = to_json(orb, std::nullopt);
  REQUIRE(j2.at("winding").is_null());
}

TEST_CASE("branch json mirrors the curve points") {
  const ProblemParams p = make_params(11, 1, 8.0);
  const VProfile prof = integrate_ivp(p, 1e3, 1e-10);
  const BifurcationCurve curve = bifurcation_curve(prof, 0.1, 100.0, 16);

  const ojson j = to_json(curve);
  REQUIRE(j.at("kind").get<std::string>() == "branch");
  REQUIRE(j.at("points").at("s").size() == 16);
  REQUIRE(j.at("points").at("lambda_rescaled").size() == 16);
  REQUIRE(j.at("points").at("lambda_physical").size() == 16);
  REQUIRE(j.at("points").at("A").size() == 16);
  for (int i : {0, 7, 15}) {
    REQUIRE(j.at("points").at("s")[i].get<double>() == curve.points[i].s);
    REQUIRE(j.at("points").at("lambda_rescaled")[i].get<double>() ==
            curve.points[i].lambda_rescaled);
    REQUIRE(j.at("points").at("A")[i].get<double>() == curve.points[i].A);
  }
}

TEST_CASE("multiplicity json lists roots") {
  const ProblemParams p = make_params(13, 2, 5.0);
  const VProfile prof = integrate_ivp(p, 1e3, 1e-10);
  const double lam_phys = 6.0;
  const MultiplicityReport rep = count_solutions(prof, lam_phys);

  const ojson j = to_json(rep, p);
  REQUIRE(j.at("kind").get<std::string>() == "multiplicity");
  REQUIRE(j.at("lambda_physical").get<double>() == lam_phys);
  REQUIRE(j.at("lambda_rescaled").get<double>() == rep.lambda_rescaled);
  REQUIRE(j.at("count").get<int>() == rep.count);
  REQUIRE(j.at("truncated").get<bool>() == rep.truncated);
  REQUIRE(j.at("roots").size() == static_cast<std::size_t>(rep.count));
}

TEST_CASE("csv writers emit stable headers") {
  const ProblemParams p = make_params(13, 2, 5.0);
  const VProfile prof = integrate_ivp(p, 10.0, 1e-9);

  SECTION("vprofile csv") {
    std::ostringstream os;
    write_csv(os, prof);
    const auto lines = split_lines(os.str());
    REQUIRE(lines.size() == 4 + prof.nodes.size());
    REQUIRE(lines[0] == std::string("# hessfowler ") + kVersion);
    REQUIRE(lines[1] == "# kind=vprofile");
    REQUIRE(lines[2] == "# n=13 k=2 q=5");
    REQUIRE(lines[3] == "s,v,vprime,flux");
    for (std::size_t i = 4; i < lines.size(); ++i)
      REQUIRE(std::count(lines[i].begin(), lines[i].end(), ',') == 3);
  }

  SECTION("solution csv") {
    const auto sols = critical_solutions(mu_star(5, 1).to_double() / 2.0, 5, 1);
    std::ostringstream os;
    write_csv(os, sols[0].sample(16));
    const auto lines = split_lines(os.str());
    REQUIRE(lines.size() == 4 + 16);
    REQUIRE(lines[1] == "# kind=solution");
    REQUIRE(lines[3] == "r,u");
  }

  SECTION("orbit csv") {
    const PhaseOrbit orb = to_phase(prof);
    std::ostringstream os;
    write_csv(os, orb);
    const auto lines = split_lines(os.str());
    REQUIRE(lines[1] == "# kind=orbit");
    REQUIRE(lines[3] == "t,y,z");
    REQUIRE(lines.size() == 4 + orb.samples.size());
  }

  SECTION("branch csv") {
    const BifurcationCurve curve = bifurcation_curve(prof, 0.1, 5.0, 8);
    std::ostringstream os;
    write_csv(os, curve);
    const auto lines = split_lines(os.str());
    REQUIRE(lines[1] == "# kind=branch");
    REQUIRE(lines[3] == "s,lambda_rescaled,lambda_physical,A");
    REQUIRE(lines.size() == 4 + 8);
  }

  SECTION("output is byte deterministic") {
    std::ostringstream a, b;
    write_csv(a, prof);
    write_csv(b, prof);
    REQUIRE(a.str() == b.str());
    REQUIRE(to_json(prof).dump(2) == to_json(prof).dump(2));
  }
}
