#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hessfowler/errors.hpp"
#include "hessfowler/rational.hpp"

namespace hf {

// Problem data for the radial equation
//
//   c_nk * r^(1-n) * (r^(n-k) u'(r)^k)' = lambda * (1 - u)^q,   0 < r < 1,
//   u'(0) = 0,  u(1) = 0,  u < 0 on [0,1),
//
// in the supercritical dimension range n > 2k with q > k.
struct ProblemParams {
  int n = 0;
  int k = 0;
  double q = 0.0;
  std::optional<double> lambda;  // only meaningful for fixed-lambda operations
};

inline std::vector<std::string> validate_params(int n, int k, double q,
                                                std::optional<double> lambda = {}) {
  std::vector<std::string> bad;
  if (k < 1) bad.push_back("k must satisfy k >= 1");
  if (n <= 2 * k) bad.push_back("n must satisfy n > 2k");
  if (!(q > static_cast<double>(k))) bad.push_back("q must satisfy q > k");
  if (!std::isfinite(q)) bad.push_back("q must be finite");
  if (lambda && !(*lambda > 0.0 && std::isfinite(*lambda)))
    bad.push_back("lambda must be positive and finite");
  return bad;
}

// Validates every constraint and reports all violations at once.
inline ProblemParams make_params(int n, int k, double q, std::optional<double> lambda = {}) {
  auto bad = validate_params(n, k, q, lambda);
  if (!bad.empty()) {
    std::string msg = "invalid parameters:";
    for (const auto& b : bad) msg += " " + b + ";";
    msg.pop_back();
    throw DomainError(msg);
  }
  return ProblemParams{n, k, q, lambda};
}

// Normalization constant of the radial k-Hessian operator, binom(n,k)/n, exact.
inline Rational c_nk(int n, int k) {
  if (k < 1 || n < k) throw DomainError("c_nk: need 1 <= k <= n");
  return Rational(binomial(n, k), n);
}

// Critical growth exponent (n+2)k/(n-2k).
inline double q_star(int n, int k) {
  if (n <= 2 * k) throw DomainError("q_star: need n > 2k");
  return static_cast<double>((n + 2) * k) / static_cast<double>(n - 2 * k);
}

// Oscillation-loss exponent.  Finite only for n > 2k+8; the empty optional is
// the +infinity branch, so any finite q compares as q < q_jl there.
inline std::optional<double> q_jl(int n, int k) {
  if (n <= 2 * k) throw DomainError("q_jl: need n > 2k");
  if (n <= 2 * k + 8) return std::nullopt;
  const double kk = k, nn = n;
  const double root = 2.0 * std::sqrt(2.0 * ((kk + 1.0) * nn - 2.0 * kk));
  const double num = (kk + 1.0) * nn - 2.0 * (kk - 1.0) - root;
  const double den = (kk + 1.0) * nn - 2.0 * kk * (kk + 3.0) - root;
  return kk * num / den;
}

// Threshold combination tau^k (n - 2k - k*tau) with tau = 2k/(q-k).
// Positive exactly when q > nk/(n-2k).
inline double lambda_tilde(int n, int k, double q) {
  auto bad = validate_params(n, k, q);
  if (!bad.empty()) throw DomainError("lambda_tilde: " + bad.front());
  const double tau = 2.0 * k / (q - k);
  return std::pow(tau, k) * (n - 2 * k - k * tau);
}

// Fold point of the critical-exponent branch, binom(n,k)(n-2k)^k/(k+1)^(k+1), exact.
inline Rational mu_star(int n, int k) {
  if (k < 1 || n <= 2 * k) throw DomainError("mu_star: need k >= 1 and n > 2k");
  const std::int64_t num = detail::checked_mul_i64(binomial(n, k), ipow(n - 2 * k, k));
  return Rational(num, ipow(k + 1, k + 1));
}

// Dimension-matching function: n - 2k = f_k(q_jl) on the finite branch, and
// f_k decays to the horizontal asymptote 8 as q grows.
inline double f_k(int k, double q) {
  if (k < 1 || !(q > static_cast<double>(k))) throw DomainError("f_k: need k >= 1 and q > k");
  return 4.0 * q / (q - k) + 4.0 * std::sqrt(q / (q - k)) + 2.0 * k * (k - 1) / (q - k);
}

enum class RegimeTag { Subcritical, Center, Spiral, Node };

inline const char* regime_name(RegimeTag t) {
  switch (t) {
    case RegimeTag::Subcritical: return "SUBCRITICAL";
    case RegimeTag::Center: return "CENTER";
    case RegimeTag::Spiral: return "SPIRAL";
    case RegimeTag::Node: return "NODE";
  }
  return "?";
}

struct Regime {
  RegimeTag tag;
  std::complex<double> eig_minus;
  std::complex<double> eig_plus;
};

// Everything downstream code derives from (n, k, q).
struct DerivedConstants {
  Rational cnk;
  double tau = 0.0;           // 2k/(q-k)
  double a = 0.0;             // q(n-2k) - nk
  double lam_tilde = 0.0;     // tau^k (n-2k-k*tau)
  double qs = 0.0;            // q_star
  std::optional<double> qjl;  // empty = +infinity
  Rational mu;                // mu_star
  double trace_j = 0.0;       // (2k-a)/(q-k)
  double det_j = 0.0;         // 2a/(q-k)
  double discriminant = 0.0;  // trace^2 - 4 det
};

inline DerivedConstants derive_constants(const ProblemParams& p) {
  auto bad = validate_params(p.n, p.k, p.q);
  if (!bad.empty()) throw DomainError("derive_constants: " + bad.front());
  DerivedConstants d;
  d.cnk = c_nk(p.n, p.k);
  d.tau = 2.0 * p.k / (p.q - p.k);
  d.a = p.q * (p.n - 2 * p.k) - static_cast<double>(p.n) * p.k;
  d.lam_tilde = std::pow(d.tau, p.k) * (p.n - 2 * p.k - p.k * d.tau);
  d.qs = q_star(p.n, p.k);
  d.qjl = q_jl(p.n, p.k);
  d.mu = mu_star(p.n, p.k);
  d.trace_j = (2.0 * p.k - d.a) / (p.q - p.k);
  d.det_j = 2.0 * d.a / (p.q - p.k);
  d.discriminant = d.trace_j * d.trace_j - 4.0 * d.det_j;
  return d;
}

// Linearization at the interior equilibrium of the phase-plane system.
// Boundaries are compared exactly: q == q_star is CENTER, q >= q_jl is NODE.
inline Regime classify_regime(const ProblemParams& p) {
  const DerivedConstants d = derive_constants(p);
  Regime r;
  if (p.q < d.qs) {
    r.tag = RegimeTag::Subcritical;
  } else if (p.q == d.qs) {
    r.tag = RegimeTag::Center;
  } else if (d.qjl && p.q >= *d.qjl) {
    r.tag = RegimeTag::Node;
  } else {
    r.tag = RegimeTag::Spiral;
  }
  const double half_tr = 0.5 * d.trace_j;
  if (d.discriminant >= 0.0) {
    const double s = 0.5 * std::sqrt(d.discriminant);
    r.eig_minus = {half_tr - s, 0.0};
    r.eig_plus = {half_tr + s, 0.0};
  } else {
    const double s = 0.5 * std::sqrt(-d.discriminant);
    r.eig_minus = {half_tr, -s};
    r.eig_plus = {half_tr, s};
  }
  return r;
}

}  // namespace hf
