#pragma once
// Mirror maps of the box Λ = [0, ℓ]³, symmetrized kernels and the Neumann
// cosine basis, with a numerical check that f^s is diagonal in that basis.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "numeric.hpp"

namespace dilute {

using Vec3 = std::array<double, 3>;
using Index3 = std::array<int, 3>;

// (p_z(x))_i = (−1)^{z_i}(x_i − ℓ/2) + ℓ/2 + ℓz_i
inline Vec3 mirror(const Index3& z, const Vec3& x, double ell) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const double s = (z[i] % 2 == 0) ? 1.0 : -1.0;
    out[i] = s * (x[i] - ell / 2.0) + ell / 2.0 + ell * z[i];
  }
  return out;
}

inline double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

struct RadialKernel {
  std::function<double(double)> f;  // f(|w|), zero beyond R
  double R = 0.0;
};

// (1 − (r/R)²)³ on [0, R]
inline RadialKernel bump_kernel(double R) {
  if (!(R > 0.0)) throw std::invalid_argument("bump radius must be positive");
  return {[R](double r) {
            if (r >= R) return 0.0;
            const double t = 1.0 - (r / R) * (r / R);
            return t * t * t;
          },
          R};
}

// Fourier transform of the bump, ∫ f(|x|)e^{−ipx}dx
inline double bump_hat(double p, double R) {
  const double k = std::abs(p) * R;
  if (k < 2.0) {
    // 4π Σ (−1)^j k^{2j}/(2j+1)! · 3/((j+3/2)(j+5/2)(j+7/2)(j+9/2))
    KahanSum s;
    double term = 1.0;  // k^{2j}/(2j+1)!
    for (int j = 0; j < 30; ++j) {
      const double h = j + 1.5;
      s += (j % 2 ? -1.0 : 1.0) * term * 3.0 / (h * (h + 1) * (h + 2) * (h + 3));
      term *= k * k / ((2.0 * j + 2) * (2.0 * j + 3));
    }
    return 4.0 * pi * s.value() * R * R * R;
  }
  const double sk = std::sin(k), ck = std::cos(k), k2 = k * k;
  const double num = k2 * k2 * sk + 10 * k2 * k * ck - 45 * k2 * sk - 105 * k * ck + 105 * sk;
  return 192.0 * pi * num / std::pow(k, 9) * R * R * R;
}

// ∫ f(|x|)e^{−ipx}dx by radial quadrature, for any kernel
inline double radial_hat(const RadialKernel& K, double p) {
  auto g = [&](double r) { return 4.0 * pi * r * r * K.f(r) * sinc(p * r); };
  return gauss_panels(g, 0.0, K.R, 64);
}

// f^s(x, y) = Σ_{|z_i| <= 1} f(p_z(x) − y); |z_i| >= 2 terms vanish when R <= ℓ/2
inline double symmetrized_kernel(const RadialKernel& K, const Vec3& x, const Vec3& y, double ell) {
  if (K.R > ell / 2.0) throw std::invalid_argument("kernel support exceeds ell/2");
  KahanSum s;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) {
        const Vec3 m = mirror({a, b, c}, x, ell);
        const double r = norm({m[0] - y[0], m[1] - y[1], m[2] - y[2]});
        if (r < K.R) s += K.f(r);
      }
  return s.value();
}

// ---------------------------------------------------------------- basis

inline double c_norm(int n) { return n == 0 ? 1.0 : std::sqrt(2.0); }

// u_p(x) = ℓ^{-3/2} Π c_{n_i} cos(πn_i x_i/ℓ)
inline double neumann_u(const Index3& n, const Vec3& x, double ell) {
  double v = std::pow(ell, -1.5);
  for (int i = 0; i < 3; ++i) v *= c_norm(n[i]) * std::cos(pi * n[i] * x[i] / ell);
  return v;
}

// −Δu_p, differentiated by hand
inline double neumann_minus_laplacian(const Index3& n, const Vec3& x, double ell) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double k = pi * n[i] / ell;
    double v = std::pow(ell, -1.5) * k * k;
    for (int j = 0; j < 3; ++j) v *= c_norm(n[j]) * std::cos(pi * n[j] * x[j] / ell);
    s += v;
  }
  return s;
}

// all n ∈ ℕ₀³ with |n| <= r, sorted by |n|²
inline std::vector<Index3> neumann_indices(int r) {
  std::vector<Index3> out;
  for (int m = 0; m <= r * r; ++m)
    for (int i = 0; i <= r; ++i)
      for (int j = 0; j <= r; ++j)
        for (int k = 0; k <= r; ++k)
          if (i * i + j * j + k * k == m) out.push_back({i, j, k});
  return out;
}

// ---------------------------------------------------------------- diagonalization

namespace detail {

// ∫_lo^hi cos(p(y + s))cos(qy) dy
inline double cos_cos_integral(double p, double q, double s, double lo, double hi) {
  if (hi <= lo) return 0.0;
  // ½[cos((p+q)y + ps) + cos((p−q)y + ps)]
  auto prim = [&](double f, double y) {
    if (f == 0.0) return y * std::cos(p * s);
    return std::sin(f * y + p * s) / f;
  };
  return 0.5 * (prim(p + q, hi) - prim(p + q, lo) + prim(p - q, hi) - prim(p - q, lo));
}

// K(w) = Σ_{z∈{−1,0,1}} ∫_0^ℓ 1[x ∈ [0,ℓ]] u_n(x)u_m(y) dy with x = σ(w + y − β),
// the one-dimensional factor of the mirror sum after w = p_z(x) − y
inline double mirror_factor(int n, int m, double w, double ell) {
  const double p = pi * n / ell, q = pi * m / ell;
  KahanSum s;
  for (int z = -1; z <= 1; ++z) {
    const double sg = (z % 2 == 0) ? 1.0 : -1.0;
    const double beta = ell / 2.0 * (1.0 - sg) + ell * z;
    // σ(w + y − β) ∈ [0, ℓ]
    double lo = beta - w, hi = beta - w + ell;
    if (sg < 0.0) {
      lo = beta - w - ell;
      hi = beta - w;
    }
    lo = std::max(lo, 0.0);
    hi = std::min(hi, ell);
    // cos(p·σ(w + y − β)) = cos(p(y + w − β))
    s += cos_cos_integral(p, q, w - beta, lo, hi);
  }
  return c_norm(n) * c_norm(m) / ell * s.value();
}

}  // namespace detail

// ∫_Λ u_n u_m from the closed-form cosine integrals
inline double basis_overlap(const Index3& n, const Index3& m, double ell) {
  double v = 1.0;
  for (int i = 0; i < 3; ++i)
    v *= c_norm(n[i]) * c_norm(m[i]) / ell *
         detail::cos_cos_integral(pi * n[i] / ell, pi * m[i] / ell, 0.0, 0.0, ell);
  return v;
}

struct DiagonalizationResult {
  std::vector<Index3> p_list, q_list;
  std::vector<double> matrix;    // M_{pq}, row-major
  std::vector<double> residual;  // M_{pq} − δ_{pq} f̂(p)
  std::vector<double> fhat;      // f̂(|p|) for each p in p_list, by radial quadrature
  double fhat0 = 0.0;
  double max_offdiag = 0.0;
  double max_diag_rel = 0.0;
  double resolution_change = 0.0;  // max |M(n) − M(n_coarse)| over f̂(0)
  int nodes = 0;
};

namespace detail {

// ∫_{B_R} f(|w|) K_1(w_1)K_2(w_2)K_3(w_3) dw for every (p, q) pair. The K_i
// only kink at w_i = 0, so each octant gets its own spherical product rule.
template <int N>
std::vector<double> mirror_matrix(const RadialKernel& K, double ell, const std::vector<Index3>& P,
                                  const std::vector<Index3>& Q) {
  const auto& x = boost::math::quadrature::gauss<double, N>::abscissa();
  const auto& wt = boost::math::quadrature::gauss<double, N>::weights();
  // full N-point rule on [−1, 1] from boost's half rule
  std::vector<double> t, tw;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      t.push_back(0.0);
      tw.push_back(wt[i]);
      continue;
    }
    t.push_back(x[i]);
    tw.push_back(wt[i]);
    t.push_back(-x[i]);
    tw.push_back(wt[i]);
  }
  int nmax = 0;
  for (const auto& a : P)
    for (int v : a) nmax = std::max(nmax, v);
  for (const auto& a : Q)
    for (int v : a) nmax = std::max(nmax, v);
  const int D = nmax + 1;

  // nodes: radius in [0, R], polar θ in [0, π/2], azimuth φ in [0, π/2], then 8 sign flips
  struct Node {
    Vec3 w;
    double weight;
  };
  std::vector<Node> nodes;
  const double R = K.R, h = pi / 4.0;
  for (std::size_t a = 0; a < t.size(); ++a) {
    const double r = R / 2.0 * (t[a] + 1.0);
    const double wr = R / 2.0 * tw[a] * r * r * K.f(r);
    for (std::size_t b = 0; b < t.size(); ++b) {
      const double th = h * (t[b] + 1.0), wth = h * tw[b] * std::sin(th);
      for (std::size_t c = 0; c < t.size(); ++c) {
        const double ph = h * (t[c] + 1.0), wph = h * tw[c];
        const Vec3 w{r * std::sin(th) * std::cos(ph), r * std::sin(th) * std::sin(ph), r * std::cos(th)};
        for (int sgn = 0; sgn < 8; ++sgn)
          nodes.push_back({{(sgn & 1) ? -w[0] : w[0], (sgn & 2) ? -w[1] : w[1], (sgn & 4) ? -w[2] : w[2]},
                           wr * wth * wph});
      }
    }
  }
  // per node and coordinate, K for every (n, m) pair
  std::vector<double> table(nodes.size() * 3 * D * D);
  parallel_for(nodes.size(), [&](std::size_t k) {
    for (int i = 0; i < 3; ++i)
      for (int n = 0; n < D; ++n)
        for (int m = 0; m < D; ++m)
          table[((k * 3 + i) * D + n) * D + m] = mirror_factor(n, m, nodes[k].w[i], ell);
  });
  std::vector<double> M(P.size() * Q.size(), 0.0);
  parallel_for(M.size(), [&](std::size_t e) {
    const auto& p = P[e / Q.size()];
    const auto& q = Q[e % Q.size()];
    KahanSum s;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double* T = &table[k * 3 * D * D];
      s += nodes[k].weight * T[(0 * D + p[0]) * D + q[0]] * T[(1 * D + p[1]) * D + q[1]] *
           T[(2 * D + p[2]) * D + q[2]];
    }
    M[e] = s.value();
  });
  return M;
}

}  // namespace detail

inline DiagonalizationResult verify_diagonalization(const RadialKernel& K, double ell, const std::vector<Index3>& P,
                                                    const std::vector<Index3>& Q) {
  if (K.R > ell / 2.0) throw std::invalid_argument("kernel support exceeds ell/2");
  DiagonalizationResult r;
  r.p_list = P;
  r.q_list = Q;
  r.matrix = detail::mirror_matrix<20>(K, ell, P, Q);
  const auto coarse = detail::mirror_matrix<14>(K, ell, P, Q);
  r.nodes = 8 * 20 * 20 * 20;
  r.fhat0 = radial_hat(K, 0.0);
  for (const auto& p : P)
    r.fhat.push_back(radial_hat(K, pi / ell * std::sqrt(double(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]))));
  r.residual.resize(r.matrix.size());
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = 0; j < Q.size(); ++j) {
      const std::size_t e = i * Q.size() + j;
      const bool diag = P[i] == Q[j];
      r.residual[e] = r.matrix[e] - (diag ? r.fhat[i] : 0.0);
      if (diag)
        r.max_diag_rel = std::max(r.max_diag_rel, std::abs(r.residual[e] / r.fhat[i]));
      else
        r.max_offdiag = std::max(r.max_offdiag, std::abs(r.residual[e]));
      r.resolution_change = std::max(r.resolution_change, std::abs(r.matrix[e] - coarse[e]) / r.fhat0);
    }
  return r;
}

inline DiagonalizationResult verify_diagonalization(const RadialKernel& K, double ell, int shell_radius = 3) {
  const auto idx = neumann_indices(shell_radius);
  return verify_diagonalization(K, ell, idx, idx);
}

}  // namespace dilute
