#pragma once
// Neumann momentum lattices (π/ℓ)ℕ₀³, the modified kinetic symbol τ,
// Bogoliubov coefficients and the ĝω lattice sums.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"
#include "scattering.hpp"

namespace dilute {

enum class MomentumClass { zero, low, high };

inline const char* to_string(MomentumClass c) {
  switch (c) {
    case MomentumClass::zero: return "zero";
    case MomentumClass::low: return "low";
    default: return "high";
  }
}

struct Momentum {
  std::array<int, 3> n;
  std::int64_t m;  // |n|²
  double norm;     // |p| = π|n|/ℓ
  MomentumClass cls;
};

// 0 < |p| <= K_H/ℓ  ⟺  π²m <= K_H² (inclusive up to rounding of K_H)
inline MomentumClass classify(std::int64_t m, double K_H) {
  if (m == 0) return MomentumClass::zero;
  return pi * pi * double(m) <= K_H * K_H * (1.0 + 1e-14) ? MomentumClass::low : MomentumClass::high;
}

struct MomentumLattice {
  double ell = 0.0;
  double K_H = 0.0;
  double p_max = 0.0;
  std::vector<Momentum> momenta;  // sorted by |p|, then lexicographic
  std::size_t count_low = 0;
  std::size_t count_high = 0;

  double tau(const Momentum& p) const {
    return tau_of(p.norm, p.cls, ell, K_H);
  }

  static double tau_of(double norm, MomentumClass c, double ell, double K_H) {
    if (c == MomentumClass::zero) return 0.0;
    double t = norm * norm - pi / (2.0 * ell * ell);
    if (c == MomentumClass::high) t -= K_H / (ell * ell);
    return t;
  }

  // min over nonzero momenta of τ(p)/|p|²
  double min_tau_ratio() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : momenta)
      if (p.cls != MomentumClass::zero) best = std::min(best, tau(p) / (p.norm * p.norm));
    return best;
  }
};

inline MomentumLattice build_lattice(double ell, double K_H, double p_max, std::size_t budget = 20'000'000) {
  if (!(ell > 0.0)) throw std::invalid_argument("lattice needs ell > 0");
  if (!(K_H >= 1.0)) throw std::invalid_argument("lattice needs K_H >= 1");
  if (!(p_max > K_H / ell)) throw std::invalid_argument("lattice needs p_max > K_H/ell");
  const double nr = p_max * ell / pi;
  const double cube = std::pow(std::floor(nr) + 1.0, 3.0);
  if (cube > double(budget))
    throw std::length_error("lattice enumeration of ~" + std::to_string(std::int64_t(cube)) +
                            " points exceeds the budget of " + std::to_string(budget));
  const int nmax = int(std::floor(nr));
  const double m_lim = nr * nr * (1.0 + 1e-14);

  MomentumLattice L;
  L.ell = ell;
  L.K_H = K_H;
  L.p_max = p_max;
  for (int i = 0; i <= nmax; ++i)
    for (int j = 0; j <= nmax; ++j)
      for (int k = 0; k <= nmax; ++k) {
        const std::int64_t m = std::int64_t(i) * i + std::int64_t(j) * j + std::int64_t(k) * k;
        if (double(m) > m_lim) continue;
        const auto c = classify(m, K_H);
        L.momenta.push_back({{i, j, k}, m, pi * std::sqrt(double(m)) / ell, c});
        if (c == MomentumClass::low) ++L.count_low;
        if (c == MomentumClass::high) ++L.count_high;
      }
  std::sort(L.momenta.begin(), L.momenta.end(), [](const Momentum& a, const Momentum& b) {
    if (a.m != b.m) return a.m < b.m;
    return a.n < b.n;
  });
  return L;
}

// Number of lattice points on each sphere |n|² = m, m = 0..m_max, in ℕ₀³ and ℤ³.
struct ShellTable {
  std::int64_t m_max = 0;
  std::vector<double> n0;  // ℕ₀³
  std::vector<double> z3;  // ℤ³, i.e. ℕ₀³ weighted by 2^{#nonzero}
};

inline ShellTable shell_table(std::int64_t m_max) {
  if (m_max < 0) throw std::invalid_argument("shell table needs m_max >= 0");
  if (m_max > 400'000'000) throw std::length_error("shell table too large");
  ShellTable t;
  t.m_max = m_max;
  const std::size_t sz = std::size_t(m_max) + 1;
  std::vector<double> s2n(sz, 0.0), s2z(sz, 0.0);
  const auto r = std::int64_t(std::sqrt(double(m_max)));
  for (std::int64_t b = 0; b <= r; ++b)
    for (std::int64_t c = 0; b * b + c * c <= m_max; ++c) {
      const double w = (b ? 2.0 : 1.0) * (c ? 2.0 : 1.0);
      s2n[std::size_t(b * b + c * c)] += 1.0;
      s2z[std::size_t(b * b + c * c)] += w;
    }
  t.n0.assign(sz, 0.0);
  t.z3.assign(sz, 0.0);
  for (std::int64_t a = 0; a * a <= m_max; ++a) {
    const double w = a ? 2.0 : 1.0;
    const std::size_t off = std::size_t(a * a);
    for (std::size_t m = 0; m + off < sz; ++m) {
      if (s2n[m] == 0.0) continue;
      t.n0[m + off] += s2n[m];
      t.z3[m + off] += w * s2z[m];
    }
  }
  return t;
}

// ---------------------------------------------------------------- Bogoliubov

struct BogoliubovPair {
  double D;
  double alpha;
};

// x = ρ_z ĝ(p). α = (τ + x − D)/x is evaluated as x/(τ + x + D).
inline BogoliubovPair bogoliubov(double tau, double x) {
  const double rad = tau * tau + 2.0 * tau * x;
  if (rad < 0.0 || std::isnan(rad)) {
    std::ostringstream os;
    os << "negative Bogoliubov radicand: tau=" << tau << " rho_z*ghat=" << x;
    throw std::domain_error(os.str());
  }
  const double D = std::sqrt(rad);
  if (x == 0.0) return {D, 0.0};
  return {D, x / (tau + x + D)};
}

inline BogoliubovPair bogoliubov(const Momentum& p, const MomentumLattice& L, double rho_z, double ghat) {
  try {
    return bogoliubov(L.tau(p), rho_z * ghat);
  } catch (const std::domain_error& e) {
    throw std::domain_error(std::string(e.what()) + " at |p|=" + std::to_string(p.norm));
  }
}

// Residuals of the quadratic-form diagonalisation with A = τ + x, B = x:
//   diagonal  [A(1+α²) − 2Bα]/(1−α²) = D
//   pairing   (B/2)(1+α²) − Aα = 0
//   constant  (Aα² − Bα)/(1−α²) = ½(D − A)
struct BogoliubovResidual {
  double diagonal, pairing, constant;
};

inline BogoliubovResidual bogoliubov_residual(double tau, double x) {
  const auto [D, al] = bogoliubov(tau, x);
  const double A = tau + x, B = x, s2 = 1.0 - al * al;
  return {(A * (1.0 + al * al) - 2.0 * B * al) / s2 - D, 0.5 * B * (1.0 + al * al) - A * al,
          (A * al * al - B * al) / s2 - 0.5 * (D - A)};
}

inline double omega_disp(double p, double rho, double a) {
  return std::sqrt(p * p * p * p + 16.0 * pi * a * rho * p * p);
}

inline double c_coord(int n) { return n == 0 ? 1.0 : std::sqrt(2.0); }

inline double c_factor(const std::array<int, 3>& p, const std::array<int, 3>& k) {
  double c = 1.0;
  for (int i = 0; i < 3; ++i) c *= c_coord(k[i] - p[i]) / (c_coord(p[i]) * c_coord(k[i]));
  return c;
}

struct ShellSymbol {
  double p;
  double multiplicity;
  double tau;
  double D;
  double alpha;
};

// One row per shell of the lattice.
inline std::vector<ShellSymbol> symbol_table(const MomentumLattice& L, double rho_z, const ScatteringSolution& sol) {
  std::vector<ShellSymbol> rows;
  for (const auto& p : L.momenta) {
    if (!rows.empty() && rows.back().p == p.norm) {
      rows.back().multiplicity += 1.0;
      continue;
    }
    const double t = L.tau(p);
    const auto b = bogoliubov(p, L, rho_z, fourier_hat(sol, p.norm));
    rows.push_back({p.norm, 1.0, t, b.D, b.alpha});
  }
  return rows;
}

// ĝ at k_m = π√m/ℓ for m = 0..m_max, skipping empty shells.
inline std::vector<double> ghat_shells(const ScatteringSolution& sol, double ell, const std::vector<double>& weight) {
  std::vector<double> g(weight.size(), 0.0);
  parallel_for(weight.size(), [&](std::size_t m) {
    if (weight[m] != 0.0) g[m] = fourier_hat(sol, pi * std::sqrt(double(m)) / ell);
  });
  return g;
}

// ---------------------------------------------------------------- ĝω sums

struct LatticeSumOptions {
  int head_multiple = 40;  // explicit shells up to |n| = head_multiple
  double tail_rel = 1e-9;  // target for the certified truncation bound
  double k_cap = 0.0;      // 0: 2^16 / R
};

struct LatticeSumResult {
  double value = 0.0;
  double head = 0.0;
  double smooth_tail = 0.0;  // integral of the (1 − χ) part up to k_max
  double tail_bound = 0.0;   // certified bound on what lies beyond k_max
  double k_max = 0.0;
  std::int64_t shells = 0;
  bool truncation_ok = false;
};

// (1/(8ℓ³)) Σ_{k∈(π/ℓ)ℤ³\0} ĝ(k)²/(2k²).
// Shells with |n| <= H are summed explicitly under a smooth cutoff χ; the
// (1 − χ) remainder is smooth on the lattice scale and replaced by its
// integral (1/4π²)∫ĝ²(1 − χ)dk, cut at k_max with the envelope bound.
inline LatticeSumResult g_omega_lattice_sum(const ScatteringSolution& sol, double ell,
                                            const LatticeSumOptions& opt = {}) {
  if (!(ell > 0.0)) throw std::invalid_argument("lattice sum needs ell > 0");
  LatticeSumResult res;
  const double R = std::max(sol.support_radius, sol.core_radius);
  if (sol.segments.empty() && !sol.has_core()) {
    res.truncation_ok = true;
    return res;
  }
  const int H = opt.head_multiple;
  const double P = H * pi / ell;
  const auto shells = shell_table(std::int64_t(H) * H);
  const auto g = ghat_shells(sol, ell, shells.z3);
  KahanSum head;
  for (std::int64_t m = 1; m <= shells.m_max; ++m) {
    if (shells.z3[m] == 0.0) continue;
    const double k = pi * std::sqrt(double(m)) / ell;
    head += shells.z3[m] * g[m] * g[m] / (2.0 * k * k) * radial_cutoff(k, P);
  }
  res.head = head.value() / (8.0 * ell * ell * ell);
  res.shells = shells.m_max;

  const auto env = fourier_envelope(sol);
  auto bound_beyond = [&](double K) {
    return 2.0 * (env.e2 * env.e2 / (3.0 * K * K * K) + env.e1 * env.e1 / K) / (4.0 * pi * pi);
  };
  const double k_cap = opt.k_cap > 0.0 ? opt.k_cap : 65536.0 / R;
  double K = std::max(P, 64.0 / R);
  const double scale = std::max(res.head, 8.0 * pi * sol.a * 8.0 * pi * sol.a / (4.0 * pi * pi * R));
  while (bound_beyond(K) > opt.tail_rel * scale && K < k_cap) K *= 2.0;
  K = std::max(K, P);
  res.k_max = K;
  res.tail_bound = bound_beyond(K);

  auto f = [&](double k) {
    const double gh = fourier_hat(sol, k);
    return gh * gh * (1.0 - radial_cutoff(k, P));
  };
  const double w = pi / R;
  const auto nchunk = std::size_t(std::ceil((K - P) / w));
  std::vector<double> parts(nchunk + 1, 0.0);
  parts[0] = integrate_gk(f, 0.5 * P, P, 1e-13, 12).value;
  parallel_for(nchunk, [&](std::size_t i) {
    const double lo = P + double(i) * w;
    const double hi = std::min(K, lo + w);
    parts[i + 1] = integrate_gk(f, lo, hi, 1e-13, 8).value;
  });
  KahanSum tail;
  for (double x : parts) tail += x;
  res.smooth_tail = tail.value() / (4.0 * pi * pi);
  res.value = res.head + res.smooth_tail;
  res.truncation_ok = res.tail_bound <= 1e-3 * std::abs(res.value);
  return res;
}

// (1/ℓ³) Σ_{k∈P_L^ℤ} ĝ(k)²/(2k²)
inline double g_omega_low_sum(const ScatteringSolution& sol, double ell, double K_H) {
  const auto m_max = std::int64_t(std::floor(K_H * K_H / (pi * pi) * (1.0 + 1e-14)));
  const auto shells = shell_table(m_max);
  const auto g = ghat_shells(sol, ell, shells.z3);
  KahanSum s;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    if (shells.z3[m] == 0.0) continue;
    const double k = pi * std::sqrt(double(m)) / ell;
    s += shells.z3[m] * g[m] * g[m] / (2.0 * k * k);
  }
  return s.value() / (ell * ell * ell);
}

}  // namespace dilute
