#pragma once
// Bogoliubov free energies: the box functional F_Bog(ℓ, n), the
// thermodynamic formula, the LHY integral, lattice-vs-integral comparisons,
// μ, convexity and the grand-canonical assembly of boxes.
//
// Units: kinetic energy p², so the Bogoliubov dispersion is
// ω_p = √(p⁴ + 16πρa p²).

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lattice.hpp"
#include "numeric.hpp"
#include "scattering.hpp"

namespace dilute {

inline constexpr double lhy_constant = 128.0 / (15.0 * 1.7724538509055160273);  // 128/(15√π)

// ---------------------------------------------------------------- thermal sums

// T Σ_{p∈Λ*₊} log(1 − e^{−ω_p/T}) on the Neumann lattice of a box of side ℓ.
// Shells beyond p_max are dropped; for |n| > N,
//   e^{−c|n|²} <= e^{−c(1−θ)N²} e^{−cθ|n|²},  Σ_{ℕ₀³} e^{−cθ|n|²} <= (1 + √(π/4cθ))³
// so choosing p_max as below bounds the dropped part by ~1e-16·T.
class ThermalLattice {
 public:
  ThermalLattice(double ell, double T, std::int64_t shell_budget = 50'000'000) : ell_(ell), T_(T) {
    if (!(ell > 0.0)) throw std::invalid_argument("thermal lattice needs ell > 0");
    if (!(T >= 0.0)) throw std::invalid_argument("thermal lattice needs T >= 0");
    if (T == 0.0) return;
    const double theta = 0.1;
    const double c = pi * pi / (T * ell * ell);
    const double cube = std::pow(1.0 + std::sqrt(pi / (4.0 * c * theta)), 3.0);
    const double x = (37.0 + std::log(cube)) / (1.0 - theta);
    p_max_ = std::sqrt(x * T);
    tail_ = T * std::exp(-(1.0 - theta) * x) * cube / (-std::expm1(-x));
    const auto m_max = std::int64_t(std::floor(p_max_ * p_max_ * ell * ell / (pi * pi)));
    if (m_max > shell_budget)
      throw std::length_error("thermal lattice needs " + std::to_string(m_max) + " shells, budget " +
                              std::to_string(shell_budget));
    const auto t = shell_table(m_max);
    for (std::int64_t m = 1; m <= m_max; ++m)
      if (t.n0[m] != 0.0) shells_.push_back({pi * std::sqrt(double(m)) / ell, t.n0[m]});
  }

  double ell() const { return ell_; }
  double T() const { return T_; }
  double p_max() const { return p_max_; }
  double tail_bound() const { return tail_; }
  std::size_t shells() const { return shells_.size(); }

  // u = ρa
  double sum(double u) const {
    if (T_ == 0.0) return 0.0;
    KahanSum s;
    for (const auto& [p, w] : shells_) s += w * log1mexp(omega(p, u) / T_);
    return T_ * s.value();
  }

  // ∂/∂u of sum(u) = Σ n_B(ω) · 8πp²/ω
  double dsum(double u) const {
    if (T_ == 0.0) return 0.0;
    KahanSum s;
    for (const auto& [p, w] : shells_) {
      const double om = omega(p, u);
      s += w * 8.0 * pi * p * p / (om * std::expm1(om / T_));
    }
    return s.value();
  }

  // T Σ log(1 − e^{−p²/T}) restricted to the kept shells, with a per-shell energy
  template <class E>
  double sum_with(E&& energy) const {
    if (T_ == 0.0) return 0.0;
    KahanSum s;
    for (const auto& [p, w] : shells_) s += w * log1mexp(energy(p) / T_);
    return T_ * s.value();
  }

  static double omega(double p, double u) { return std::sqrt(p * p * p * p + 16.0 * pi * u * p * p); }

 private:
  struct Shell {
    double p, w;
  };
  double ell_, T_;
  double p_max_ = 0.0;
  double tail_ = 0.0;
  std::vector<Shell> shells_;
};

// ---------------------------------------------------------------- reports

struct FreeEnergyReport {
  double ell = 0.0, n = 0.0, rho = 0.0, a = 0.0, T = 0.0;
  double mean_field = 0.0;        // 4πρ²aℓ³
  double lhy = 0.0;               // 4πρ²aℓ³ · 128/(15√π) √(ρa³)
  double thermal_sum = 0.0;       // T Σ_{Λ*₊} log(1 − e^{−ω/T})
  double thermal_integral = 0.0;  // ℓ³ × thermal part of the thermodynamic formula
  double mu = 0.0;                // ∂F/∂n, analytic
  double sum_tail_bound = 0.0;
  double integral_tail_bound = 0.0;
  double p_max = 0.0;
  std::size_t shells = 0;
  double total() const { return mean_field + lhy + thermal_sum; }
  bool tail_ok() const {
    return sum_tail_bound <= 1e-3 * std::abs(thermal_sum) || sum_tail_bound <= 1e-14 * std::abs(total());
  }
};

struct ThermoReport {
  double rho = 0.0, T = 0.0, a = 0.0;
  double mean_field = 0.0;  // 4πaρ²
  double lhy = 0.0;
  double thermal = 0.0;     // T^{5/2}(2π)^{-3}∫ log(1 − e^{−√(p⁴+16πρa p²/T)}) dp
  double tail_bound = 0.0;
  double total() const { return mean_field + lhy + thermal; }
};

// ---------------------------------------------------------------- thermodynamic formula

namespace detail {

// ∫_0^∞ q² log(1 − e^{−q√(q²+s)}) dq and a bound on the part beyond the cut
inline QuadResult thermal_radial_integral(double s) {
  auto f = [s](double q) {
    const double x = q * std::sqrt(q * q + s);
    if (!(x > 0.0)) return 0.0;
    if (x < 1e-8) return q * q * (std::log(x) - 0.5 * x);
    return q * q * log1mexp(x);
  };
  const double Q = std::sqrt(50.0);
  std::vector<double> cuts{0.0};
  const double qs = std::sqrt(s);
  for (double c : {0.25 * qs, qs, 4.0 * qs, 0.5, 1.0, 2.0, 4.0})
    if (c > 1e-3 && c < Q) cuts.push_back(c);
  cuts.push_back(Q);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  KahanSum acc;
  double err = 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (i == 0) {
      double e = 0.0;
      acc += ts.integrate(f, cuts[0], cuts[1], 1e-12, &e);
      err += std::abs(e);
    } else {
      auto r = integrate_gk(f, cuts[i], cuts[i + 1], 1e-12, 10);
      acc += r.value;
      err += r.error;
    }
  }
  // |log(1 − e^{−x})| <= e^{−x}/(1 − e^{−Q²}) and x >= q²
  const double tail =
      (0.5 * Q * std::exp(-Q * Q) + 0.25 * std::sqrt(pi) * std::erfc(Q)) / (-std::expm1(-Q * Q));
  return {acc.value(), err + tail};
}

}  // namespace detail

inline ThermoReport f_thermo(double rho, double T, double a) {
  if (!(rho >= 0.0) || !(T >= 0.0) || !(a >= 0.0)) throw std::invalid_argument("f_thermo needs rho, T, a >= 0");
  ThermoReport r;
  r.rho = rho;
  r.T = T;
  r.a = a;
  r.mean_field = 4.0 * pi * a * rho * rho;
  r.lhy = r.mean_field * lhy_constant * std::sqrt(rho * a * a * a);
  if (T > 0.0) {
    const auto q = detail::thermal_radial_integral(16.0 * pi * rho * a / T);
    const double pref = std::pow(T, 2.5) * 4.0 * pi / (8.0 * pi * pi * pi);
    r.thermal = pref * q.value;
    r.tail_bound = pref * q.error;
  }
  return r;
}

// ---------------------------------------------------------------- box functional

// F_Bog(ℓ, n) only, for loops over n
inline double f_bog_total(const ThermalLattice& lat, double n, double a) {
  const double V = lat.ell() * lat.ell() * lat.ell(), rho = n / V;
  const double mf = 4.0 * pi * rho * rho * a * V;
  return mf + mf * lhy_constant * std::sqrt(rho * a * a * a) + lat.sum(rho * a);
}

inline FreeEnergyReport f_bog(const ThermalLattice& lat, double n, double a) {
  if (!(n >= 0.0) || !(a > 0.0)) throw std::invalid_argument("f_bog needs n >= 0 and a > 0");
  FreeEnergyReport r;
  const double ell = lat.ell(), V = ell * ell * ell;
  r.ell = ell;
  r.n = n;
  r.rho = n / V;
  r.a = a;
  r.T = lat.T();
  r.mean_field = 4.0 * pi * r.rho * r.rho * a * V;
  r.lhy = r.mean_field * lhy_constant * std::sqrt(r.rho * a * a * a);
  r.thermal_sum = lat.sum(r.rho * a);
  r.sum_tail_bound = lat.tail_bound();
  r.p_max = lat.p_max();
  r.shells = lat.shells();
  const auto th = f_thermo(r.rho, r.T, a);
  r.thermal_integral = th.thermal * V;
  r.integral_tail_bound = th.tail_bound * V;
  r.mu = 8.0 * pi * a * r.rho + 10.0 * pi * lhy_constant * a * r.rho * std::sqrt(r.rho * a * a * a) +
         a / V * lat.dsum(r.rho * a);
  return r;
}

inline FreeEnergyReport f_bog(double ell, double n, double a, double T) {
  return f_bog(ThermalLattice(ell, T), n, a);
}

// ---------------------------------------------------------------- LHY integral

namespace detail {

// G(t) = √(1+2t) − 1 − t + t²/2, written without cancellation
inline double lhy_G(double t) {
  const double s = std::sqrt(1.0 + 2.0 * t);
  return t * t * t * (2.0 / (s + 1.0) + 1.0) / (2.0 * (s + 1.0 + t));
}

// ∫_0^∞ q⁴ G(1/q²) dq = ∫_0^1 q⁴G(1/q²)dq + ∫_0^1 s⁻⁶G(s²)ds
inline double lhy_radial_constant() {
  static const double J = [] {
    auto f1 = [](double q) { return q == 0.0 ? 0.5 : q * q * q * q * lhy_G(1.0 / (q * q)); };
    auto f2 = [](double s) {
      if (s < 1e-3) {
        const double t = s * s;  // G(t)/t³ = 1/2 − 5t/8 + ...
        return 0.5 - 0.625 * t + 0.875 * t * t;
      }
      const double s2 = s * s;
      return lhy_G(s2) / (s2 * s2 * s2);
    };
    return integrate_gk(f1, 0.0, 1.0, 1e-15).value + integrate_gk(f2, 0.0, 1.0, 1e-15).value;
  }();
  return J;
}

}  // namespace detail

// ∫_{ℝ³} p² G(8πx/p²) dp for x = ρ_z a
inline double lhy_integral(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("lhy_integral needs rho_z a >= 0");
  if (x == 0.0) return 0.0;
  return std::pow(8.0 * pi * x, 2.5) * 4.0 * pi * detail::lhy_radial_constant();
}

inline double lhy_closed_form(double x) { return 64.0 * std::pow(pi, 4) * lhy_constant * std::pow(x, 2.5); }

// ---------------------------------------------------------------- Bogoliubov sum vs LHY

struct LhyComparison {
  double gomega_term = 0.0;  // ρ_z² ĝω(0)
  double lattice_sum = 0.0;  // (1/ℓ³) Σ_{Λ*₊} (D − τ − ρ_zĝ)
  double head = 0.0;
  double tail = 0.0;
  double tail_bound = 0.0;
  double lhs = 0.0;
  double lhy = 0.0;          // 8π(ρ_z a)^{5/2}·128/(15√π)
  double deviation = 0.0;    // lhs − lhy
  double relative() const { return deviation / lhy; }
};

struct LhyOptions {
  int head_multiple = 60;
};

namespace detail {

// D − τ − x = −x²/(τ(s + 1 + t)), t = x/τ, s = √(1+2t)
inline double bog_summand(double tau, double x) {
  if (x == 0.0) return 0.0;
  const double t = x / tau;
  if (1.0 + 2.0 * t < 0.0) throw std::domain_error("negative Bogoliubov radicand in lattice sum");
  const double s = std::sqrt(1.0 + 2.0 * t);
  return -x * x / (tau * (s + 1.0 + t));
}

}  // namespace detail

// Evaluates ρ_z²ĝω(0) + (1/ℓ³) Σ_{p∈Λ*₊} (D_p − τ(p) − ρ_zĝ(p)).
// Shells |n| <= H are summed under a smooth cutoff χ; the smooth remainder
// uses the Neumann-lattice sum formula
//   Σ_{ℕ₀³} F = (1/8)[Σ_{ℤ³} + 3Σ_{ℤ²} + 3Σ_{ℤ} + F(0)],  Σ_{ℤ^d} F ≈ (ℓ/π)^d ∫_{ℝ^d} F.
inline LhyComparison bog_sum_minus_integral(double ell, double rho_z, const ScatteringSolution& sol, double K_H,
                                            const LhyOptions& opt = {}) {
  if (!(ell > 0.0) || !(rho_z >= 0.0) || !(K_H >= 1.0))
    throw std::invalid_argument("bog_sum_minus_integral needs ell > 0, rho_z >= 0, K_H >= 1");
  LhyComparison r;
  r.lhy = 8.0 * pi * std::pow(rho_z * sol.a, 2.5) * lhy_constant;
  if (rho_z == 0.0) return r;
  r.gomega_term = rho_z * rho_z * g_omega_zero(sol);

  const double kH = K_H / ell;
  auto tau = [&](double k) {
    return MomentumLattice::tau_of(k, k <= kH * (1.0 + 1e-14) ? MomentumClass::low : MomentumClass::high, ell, K_H);
  };
  auto f = [&](double k, double g) { return detail::bog_summand(tau(k), rho_z * g); };

  const int H = opt.head_multiple;
  const double P = H * pi / ell;
  const auto shells = shell_table(std::int64_t(H) * H);
  const auto g = ghat_shells(sol, ell, shells.n0);
  KahanSum head;
  for (std::int64_t m = 1; m <= shells.m_max; ++m) {
    if (shells.n0[m] == 0.0) continue;
    const double k = pi * std::sqrt(double(m)) / ell;
    head += shells.n0[m] * f(k, g[m]) * radial_cutoff(k, P);
  }
  r.head = head.value() / (ell * ell * ell);

  // F(k) = f(k)(1 − χ(k)); radial weights of the 3D, 2D and 1D integrals
  auto F = [&](double k) { return f(k, fourier_hat(sol, k)) * (1.0 - radial_cutoff(k, P)); };
  auto weight = [&](double k) {
    return (k * k / (2.0 * pi * pi)) + 3.0 * k / (4.0 * pi * ell) + 3.0 / (4.0 * pi * ell * ell);
  };
  // Beyond K: ĝ = c0·sinc(k r_c) + h with |h| <= e2/k², c0 = 8π r_c u'(r_c).
  // The core part −ρ_z²c0² sin²(k r_c)/(2r_c²k⁴) of F is integrated in closed
  // form; everything else is bounded through the envelope.
  const auto env = fourier_envelope(sol);
  const double R = std::max(sol.support_radius, sol.core_radius);
  const double rc = sol.core_radius, e1 = env.e1, e2 = env.e2;
  const double dtau = pi / (2.0 * ell * ell) + K_H / (ell * ell);
  auto residual = [&](double k) {
    const double env_k = e1 / k + e2 / (k * k);
    const double eps = 4.0 * dtau / (k * k) + 8.0 * rho_z * env_k / (k * k);
    return rho_z * rho_z * ((2.0 * e1 * e2 / (k * k * k) + e2 * e2 / (k * k * k * k)) + env_k * env_k * eps) /
           (2.0 * k * k);
  };
  auto bound_beyond = [&](double K) {
    // k = K/u maps [K, ∞) to (0, 1]
    auto h = [&](double u) {
      if (u <= 0.0) return 0.0;
      const double k = K / u;
      return weight(k) * residual(k) * K / (u * u);
    };
    double b = integrate_gk(h, 0.0, 1.0, 1e-6, 8).value;
    if (rc > 0.0) {
      const double c = rho_z * rho_z * e1 * e1 / 2.0;  // c0²/r_c² = e1²
      b += c * (1.0 / (2.0 * pi * pi) * 1.0 / (2.0 * rc * rc * K * K * K) + 3.0 / (4.0 * pi * ell) / (2.0 * K * K) +
                3.0 / (4.0 * pi * ell * ell) / (3.0 * K * K * K));
    }
    return b;
  };
  // ∫_K^∞ sin²(bk)/k² dk = 1/(2K) + sin(2bK)/(4bK²) + O(1/(2b²K³))
  auto core_tail = [&](double K) {
    if (rc == 0.0) return 0.0;
    const double I = 1.0 / (2.0 * K) + std::sin(2.0 * rc * K) / (4.0 * rc * K * K);
    return -rho_z * rho_z * e1 * e1 / 2.0 / (2.0 * pi * pi) * I;
  };
  double K = std::max(P, 64.0 / R);
  const double target = 1e-9 * r.lhy;
  while (bound_beyond(K) > target && K < 65536.0 / R) K *= 2.0;
  r.tail_bound = bound_beyond(K);

  std::vector<double> cuts{0.5 * P, P};
  if (kH > 0.5 * P && kH < K) cuts.push_back(kH);
  const double w = pi / R;
  for (double c = P + w; c < K; c += w) cuts.push_back(c);
  cuts.push_back(K);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> parts(cuts.size() - 1, 0.0);
  parallel_for(parts.size(), [&](std::size_t i) {
    parts[i] = integrate_gk([&](double k) { return weight(k) * F(k); }, cuts[i], cuts[i + 1], 1e-13, 10).value;
  });
  KahanSum tail;
  for (double x : parts) tail += x;
  tail += core_tail(K);
  r.tail = tail.value();
  r.lattice_sum = r.head + r.tail;
  r.lhs = r.gomega_term + r.lattice_sum;
  r.deviation = r.lhs - r.lhy;
  return r;
}

// ---------------------------------------------------------------- thermal comparison

struct ThermalComparison {
  double left = 0.0;   // T Σ log(1 − e^{−D̃/T}),  D̃ = D on P_L, D/K_H on P_H
  double right = 0.0;  // T Σ log(1 − e^{−ω/T})
  double gap = 0.0;    // left − right
  double scale = 0.0;  // ℓ³(ρa)³
  double empirical_C = 0.0;
  double max_dw_ratio = 0.0;  // max over P_L of |D − ω|·|p|ℓ²/√(ρ_z a)
};

inline ThermalComparison thermal_sum_compare(double ell, double rho_z, double T, double K_H,
                                             const ScatteringSolution& sol, std::int64_t shell_budget = 4'000'000) {
  ThermalComparison c;
  const double a = sol.a;
  c.scale = ell * ell * ell * std::pow(rho_z * a, 3);
  if (T == 0.0) return c;
  // P_H energies are divided by K_H, so the lattice must reach K_H times further in energy
  const ThermalLattice base(ell, T, shell_budget);
  const double pm2 = base.p_max() * base.p_max();
  const auto m_low = std::int64_t(std::floor(pm2 * ell * ell / (pi * pi)));
  const auto m_high = std::int64_t(std::floor(K_H * pm2 * ell * ell / (pi * pi)));
  const auto m_max = std::max(m_low, m_high);
  if (m_max > shell_budget) throw std::length_error("thermal_sum_compare exceeds the shell budget");
  const auto t = shell_table(m_max);
  const auto g = ghat_shells(sol, ell, t.n0);
  KahanSum L, Rt;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    if (t.n0[m] == 0.0) continue;
    const double k = pi * std::sqrt(double(m)) / ell;
    const auto cls = classify(m, K_H);
    const double tau = MomentumLattice::tau_of(k, cls, ell, K_H);
    const double D = bogoliubov(tau, rho_z * g[m]).D;
    const double Dt = cls == MomentumClass::high ? D / K_H : D;
    const double om = omega_disp(k, rho_z, a);
    if (Dt > 0.0) L += t.n0[m] * log1mexp(Dt / T);
    if (m <= m_low) Rt += t.n0[m] * log1mexp(om / T);
    if (cls == MomentumClass::low)
      c.max_dw_ratio = std::max(c.max_dw_ratio, std::abs(D - om) * k * ell * ell / std::sqrt(rho_z * a));
  }
  c.left = T * L.value();
  c.right = T * Rt.value();
  c.gap = c.left - c.right;
  c.empirical_C = c.gap < 0.0 ? -c.gap / c.scale : 0.0;
  return c;
}

// ---------------------------------------------------------------- μ

struct ChemicalPotential {
  double mu = 0.0;           // central difference, step 1 in n
  double mu_half = 0.0;      // step 1/2
  double mu_analytic = 0.0;  // exact derivative
  double mean_field_lhy = 0.0;  // 8πaρ + 10π·c·aρ√(ρa³)
  bool richardson_ok = false;
};

inline ChemicalPotential chemical_potential(const ThermalLattice& lat, double rho, double a) {
  const double V = lat.ell() * lat.ell() * lat.ell();
  const double n = rho * V;
  auto F = [&](double m) { return f_bog_total(lat, std::max(m, 0.0), a); };
  auto diff = [&](double h) {
    if (n - h < 0.0) return (F(n + h) - F(n)) / h;
    return (F(n + h) - F(n - h)) / (2.0 * h);
  };
  ChemicalPotential c;
  c.mu = diff(1.0);
  c.mu_half = diff(0.5);
  c.mu_analytic = f_bog(lat, n, a).mu;
  c.mean_field_lhy = 8.0 * pi * a * rho + 10.0 * pi * lhy_constant * a * rho * std::sqrt(rho * a * a * a);
  const double base = 8.0 * pi * a * rho;
  c.richardson_ok = std::abs(c.mu - c.mu_half) <= 0.01 * std::abs(c.mu - base) + 1e-13 * std::abs(c.mu);
  return c;
}

inline ChemicalPotential chemical_potential(double ell, double rho, double a, double T) {
  return chemical_potential(ThermalLattice(ell, T), rho, a);
}

// ---------------------------------------------------------------- convexity

// Derivatives of S(ρ) = T Σ log(1 − e^{−ω/T}) in ϱ = ρa/T, the variable in
// which S/(T^{5/2}ℓ³) has a T-independent continuum limit.
struct ConvexitySample {
  double rho = 0.0;
  double d1 = 0.0, d2 = 0.0;            // ∂_ϱ S, ∂²_ϱ S at step h
  double d1_half = 0.0, d2_half = 0.0;  // step h/2
  double d1_analytic = 0.0;
  double c1 = 0.0, c2 = 0.0;            // |d1|, |d2| over T^{5/2}ℓ³
  bool resolved = false;
};

struct ConvexityReport {
  std::vector<ConvexitySample> samples;
  double scale = 0.0;  // T^{5/2}ℓ³
  bool signs_ok = false;
  bool resolved = false;
  double c1_max = 0.0, c2_max = 0.0;
};

inline ConvexityReport convexity_check(const ThermalLattice& lat, double a, const std::vector<double>& rhos) {
  ConvexityReport rep;
  const double T = lat.T(), ell = lat.ell();
  if (!(T > 0.0)) throw std::invalid_argument("convexity_check needs T > 0");
  rep.scale = std::pow(T, 2.5) * ell * ell * ell;
  auto S = [&](double vr) { return lat.sum(vr * T); };  // ϱ → S, ρa = ϱT
  rep.signs_ok = true;
  rep.resolved = true;
  for (double rho : rhos) {
    ConvexitySample s;
    s.rho = rho;
    const double vr = rho * a / T;
    const double h = 0.02 * std::min(vr, 1.0);
    auto derivs = [&](double hh, double& d1, double& d2) {
      const double sp = S(vr + hh), sm = S(vr - hh), s0 = S(vr);
      d1 = (sp - sm) / (2.0 * hh);
      d2 = (sp - 2.0 * s0 + sm) / (hh * hh);
    };
    derivs(h, s.d1, s.d2);
    derivs(0.5 * h, s.d1_half, s.d2_half);
    s.d1_analytic = T * lat.dsum(vr * T);
    s.c1 = std::abs(s.d1_half) / rep.scale;
    s.c2 = std::abs(s.d2_half) / rep.scale;
    s.resolved = std::abs(s.d1 - s.d1_half) <= 0.01 * std::abs(s.d1_half) &&
                 std::abs(s.d2 - s.d2_half) <= 0.01 * std::abs(s.d2_half);
    rep.resolved = rep.resolved && s.resolved;
    rep.signs_ok = rep.signs_ok && s.d1_half >= -1e-12 * rep.scale && -s.d2_half >= -1e-10 * rep.scale;
    rep.c1_max = std::max(rep.c1_max, s.c1);
    rep.c2_max = std::max(rep.c2_max, s.c2);
    rep.samples.push_back(s);
  }
  return rep;
}

// ---------------------------------------------------------------- assembly

struct AssemblyReport {
  double M = 0.0;          // number of boxes (L/ℓ)³
  double rho = 0.0;
  double n_star = 0.0;     // ρℓ³
  double mu = 0.0;
  double F_star = 0.0;     // F_Bog(ℓ, ρℓ³)
  double bound = 0.0;      // −TM log Σ_n e^{−(F(n) − μn)/T} + μN
  double reference = 0.0;  // M·F_star
  double entropy_slack = 0.0;  // T M log(N + 1)
  double b3_min_margin = 0.0;  // min over n of (F(n) − μn) − (F* − μn*)
  std::int64_t b3_checked = 0;
  bool b3_ok = false;
  bool within_slack = false;   // reference − slack <= bound <= reference
  std::int64_t terms = 0;
};

inline AssemblyReport box_assembly_bound(double L, double N, double ell, double a, double T) {
  if (!(L > 0.0) || !(ell > 0.0) || !(N >= 0.0) || !(T > 0.0)) throw std::invalid_argument("bad assembly input");
  const double side = L / ell;
  if (std::abs(side - std::round(side)) > 1e-9 * side) throw std::invalid_argument("L/ell must be an integer");
  AssemblyReport r;
  r.M = std::pow(std::round(side), 3);
  r.rho = N / (L * L * L);
  r.n_star = r.rho * ell * ell * ell;
  const ThermalLattice lat(ell, T);
  r.mu = chemical_potential(lat, r.rho, a).mu;
  auto G = [&](double n) { return f_bog_total(lat, n, a) - r.mu * n; };
  r.F_star = f_bog_total(lat, r.n_star, a);
  r.reference = r.M * r.F_star;
  const double G_star = r.F_star - r.mu * r.n_star;

  // log Σ e^{−G(n)/T}: walk out from the minimum; G is convex, so the walk stops
  // once terms fall 60 e-folds below the largest
  const auto Nmax = std::int64_t(std::llround(N));
  const auto n0 = std::clamp<std::int64_t>(std::llround(r.n_star), 0, Nmax);
  std::vector<double> ex;
  double top = -G(double(n0)) / T;
  ex.push_back(top);
  for (int dir : {-1, +1}) {
    for (std::int64_t n = n0 + dir; n >= 0 && n <= Nmax; n += dir) {
      const double e = -G(double(n)) / T;
      ex.push_back(e);
      top = std::max(top, e);
      if (e < top - 60.0) break;
    }
  }
  KahanSum s;
  for (double e : ex) s += std::exp(e - top);
  r.terms = std::int64_t(ex.size());
  r.bound = -T * r.M * (top + std::log(s.value())) + r.mu * N;
  r.entropy_slack = T * r.M * std::log(N + 1.0);

  // F(n) − μn >= F* − μn* on [0, 20ρℓ³]
  const auto n_hi = std::int64_t(std::ceil(20.0 * r.n_star));
  double margin = std::numeric_limits<double>::infinity();
  for (std::int64_t n = 0; n <= n_hi; ++n) margin = std::min(margin, G(double(n)) - G_star);
  r.b3_min_margin = margin;
  r.b3_checked = n_hi + 1;
  const double tol = 1e-12 * (std::abs(r.F_star) + std::abs(r.mu * r.n_star));
  r.b3_ok = margin >= -tol;
  const double btol = 1e-12 * std::abs(r.reference);
  r.within_slack = r.bound <= r.reference + btol && r.bound >= r.reference - r.entropy_slack - btol;
  return r;
}

}  // namespace dilute
