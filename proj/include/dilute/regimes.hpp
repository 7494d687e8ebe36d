#pragma once
// Parameter schedule of the free-energy lower bound and the scalar
// hypotheses that the schedule has to satisfy. Powers are handled as logs.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "verdict.hpp"

namespace dilute {

struct RegimeParams {
  double rho = 0.0, a = 0.0, T = 0.0, eta = 0.0, nu = 0.0;

  double x() const { return rho * a * a * a; }  // ρa³
  double log_x() const { return std::log(rho) + 3.0 * std::log(a); }
  // K_ℓ = (ρa³)^{−η}
  double log_K_ell() const { return -eta * log_x(); }
  // ℓ = K_ℓ(ρa)^{−1/2}
  double log_ell() const { return log_K_ell() - 0.5 * (std::log(rho) + std::log(a)); }
  double log_K_H() const { return 5.0 * log_K_ell(); }
  double gamma() const { return 20.0 * eta; }
  double alpha() const { return 0.25 + eta / 2.0; }
  // 𝓜 = ρℓ³K_ℓ^{−21}
  double log_M() const { return std::log(rho) + 3.0 * log_ell() - 21.0 * log_K_ell(); }
  double m() const { return 10.0 / eta; }

  double K_ell() const { return std::exp(log_K_ell()); }
  double ell() const { return std::exp(log_ell()); }
  double K_H() const { return std::exp(log_K_H()); }
  double M() const { return std::exp(log_M()); }
};

inline RegimeParams derive(double rho, double a, double T, double eta, double nu) {
  if (!(rho > 0.0) || !(a > 0.0) || !(T > 0.0) || !(eta > 0.0) || !(nu > 0.0))
    throw std::invalid_argument("derive needs rho, a, T, eta, nu > 0");
  return {rho, a, T, eta, nu};
}

enum class ConstraintKind { exact, structural, advisory };

inline const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::exact: return "exact";
    case ConstraintKind::structural: return "structural (C = 1)";
    case ConstraintKind::advisory: return "advisory";
  }
  return "?";
}

struct RegimeVerdict {
  Verdict verdict;
  ConstraintKind kind;
  std::string source;  // which hypothesis the inequality belongs to
};

inline constexpr double eta_max = 1.0 / 1026.0;

// Each check compares logs, lhs < rhs (or <=) with value = lhs, bound = rhs.
inline std::vector<RegimeVerdict> check_constraints(const RegimeParams& p) {
  std::vector<RegimeVerdict> out;
  auto add = [&](std::string name, bool ok, double lhs, double rhs, ConstraintKind k, std::string src,
                 std::string note = "") {
    out.push_back({{std::move(name), ok, lhs, rhs, std::move(note)}, k, std::move(src)});
  };
  const double lx = p.log_x(), lK = p.log_K_ell(), lH = p.log_K_H();

  add("eta < 1/1026", p.eta < eta_max, p.eta, eta_max, ConstraintKind::exact, "main bound: range of eta",
      "an earlier statement only asks for eta small enough");
  add("nu < eta/3", p.nu < p.eta / 3.0, p.nu, p.eta / 3.0, ConstraintKind::exact, "main bound: range of nu");
  {
    const double lhs = std::log(p.T), rhs = std::log(p.rho * p.a) - p.nu * lx;
    add("T <= rho a (rho a^3)^-nu", lhs <= rhs, lhs, rhs, ConstraintKind::exact, "main bound: temperature window",
        "logs");
  }
  {
    const double lhs = p.alpha() + 2.5 * p.nu;
    add("alpha + 5 nu/2 < 6/17", lhs < 6.0 / 17.0, lhs, 6.0 / 17.0, ConstraintKind::exact,
        "a priori localization: alpha and nu");
  }
  {
    const double rhs = 2.0 / p.eta + 14.0;
    add("m > 2/eta + 14", p.m() > rhs, p.m(), rhs, ConstraintKind::exact, "c-number substitution: m");
  }
  {
    const double rhs = (p.m() + 1.0) / 12.0 * lK;
    add("K_H <= K_ell^((m+1)/12)", lH <= rhs, lH, rhs, ConstraintKind::exact, "c-number substitution: K_H", "logs");
  }
  add("K_H >= C K_ell^4", lH >= 4.0 * lK, lH, 4.0 * lK, ConstraintKind::structural, "c-number substitution", "logs");
  {
    const double lhs = lK + 3.0 * lH, rhs = -0.5 * lx;
    add("K_ell K_H^3 <= (rho a^3)^-1/2", lhs <= rhs, lhs, rhs, ConstraintKind::structural, "c-number substitution",
        "logs");
  }
  {
    const double lhs = 1.25 * lK + 2.0 * lH, rhs = -0.5 * lx;
    add("K_ell^(5/4) K_H^2 <= C^-1 (rho a^3)^-1/2", lhs <= rhs, lhs, rhs, ConstraintKind::structural,
        "three-Q bound", "logs");
  }
  {
    const double rhs = std::log(p.rho) + 3.0 * p.log_ell() - 7.0 * lK - 2.0 * lH;
    add("M <= C^-1 rho ell^3 K_ell^-7 K_H^-2", p.log_M() <= rhs, p.log_M(), rhs, ConstraintKind::structural,
        "three-Q bound: gap absorption", "logs");
  }
  {
    // M = ρℓ³(ρa³)^{21η} against ρℓ³(ρa³)^{γ}; with γ = 20η this needs 21η <= 20η
    const double rhs = std::log(p.rho) + 3.0 * p.log_ell() + p.gamma() * lx;
    add("M >= rho ell^3 (rho a^3)^gamma, gamma = 20 eta", p.log_M() >= rhs, p.log_M(), rhs, ConstraintKind::advisory,
        "localization to n_L <= M",
        "fails for every eta under the schedule; holds for gamma >= 21 eta, and the hypothesis only asks for some "
        "gamma > 0");
  }
  return out;
}

inline bool exact_passed(const std::vector<RegimeVerdict>& v) {
  for (const auto& r : v)
    if (r.kind == ConstraintKind::exact && !r.verdict.passed) return false;
  return true;
}

inline bool structural_passed(const std::vector<RegimeVerdict>& v) {
  for (const auto& r : v)
    if (r.kind == ConstraintKind::structural && !r.verdict.passed) return false;
  return true;
}

struct SweepResult {
  std::size_t points = 0;
  std::size_t exact_pass = 0;
  std::size_t structural_pass = 0;
  double first_failure = NAN;  // smallest eta with an exact failure
};

// η log-spaced on [lo, hi], ν = nu_frac·η, T = t_frac·ρa
inline SweepResult sweep_eta(double rho_a3, double lo, double hi, std::size_t n, double nu_frac = 0.25,
                             double t_frac = 1.0) {
  SweepResult s;
  const double a = 1.0, rho = rho_a3;
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * double(i) / double(n - 1));
    const auto v = check_constraints(derive(rho, a, t_frac * rho * a, eta, nu_frac * eta));
    ++s.points;
    if (exact_passed(v))
      ++s.exact_pass;
    else if (std::isnan(s.first_failure))
      s.first_failure = eta;
    if (structural_passed(v)) ++s.structural_pass;
  }
  return s;
}

}  // namespace dilute
