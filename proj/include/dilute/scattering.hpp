#pragma once
// Zero-energy scattering for piecewise-constant radial potentials.
//
// With u = rφ the radial equation is u'' = ½Vu. On a constant piece the
// solution is a sum of e^{±κr}, κ = √(V/2), so every piece is propagated
// exactly. The state is carried with a separate log scale so strong
// potentials (κh in the thousands) do not overflow.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "numeric.hpp"
#include "potentials.hpp"

namespace dilute {

// On [r0, r1]:  v > 0: u = P e^{κ(r−r1)} + Q e^{−κ(r−r0)}
//               v = 0: u = P + Q (r − r0)
struct Segment {
  double r0, r1, v, kappa, P, Q;

  double u(double r) const {
    if (v == 0.0) return P + Q * (r - r0);
    return P * std::exp(kappa * (r - r1)) + Q * std::exp(-kappa * (r - r0));
  }
  double du(double r) const {
    if (v == 0.0) return Q;
    return kappa * (P * std::exp(kappa * (r - r1)) - Q * std::exp(-kappa * (r - r0)));
  }
};

struct ScatteringSolution {
  double a = 0.0;
  double core_radius = 0.0;
  double support_radius = 0.0;
  double R_out = 0.0;
  double core_slope = 0.0;  // u'(rc); strength of the boundary layer of a hard core
  std::vector<Segment> segments;

  std::vector<double> grid, phi, omega, g;
  double fit_a = 0.0;
  double fit_residual = 0.0;

  double u(double r) const {
    if (r < core_radius) return 0.0;
    if (r >= support_radius) return r - a;
    return find(r).u(r);
  }
  double du(double r) const {
    if (r < core_radius) return 0.0;
    if (r >= support_radius) return 1.0;
    return find(r).du(r);
  }
  double phi_at(double r) const {
    if (r < core_radius) return 0.0;
    if (r == 0.0) return du(0.0);
    return u(r) / r;
  }
  double omega_at(double r) const { return 1.0 - phi_at(r); }
  double g_at(double r) const {
    if (r < core_radius || r >= support_radius) return 0.0;
    return find(r).v * phi_at(r);
  }
  bool has_core() const { return core_radius > 0.0; }

  const Segment& find(double r) const {
    auto it = std::upper_bound(segments.begin(), segments.end(), r,
                               [](double x, const Segment& s) { return x < s.r1; });
    if (it == segments.end()) return segments.back();
    return *it;
  }
};

struct ScatterOptions {
  double R_out = 0.0;  // 0: use 2R (or 1 when R = 0)
  std::size_t grid_size = 1024;
};

inline ScatteringSolution solve_scattering(const RadialPotential& V, const ScatterOptions& opt = {}) {
  if (opt.grid_size < 64) throw std::invalid_argument("grid_size must be >= 64");
  ScatteringSolution s;
  s.core_radius = V.core_radius();
  s.support_radius = V.support_radius();
  const double R = s.support_radius;
  s.R_out = opt.R_out > 0.0 ? opt.R_out : (R > 0.0 ? 2.0 * R : 1.0);
  if (s.R_out < 2.0 * R) throw std::invalid_argument("R_out must be at least twice the support radius");

  struct Raw {
    Segment seg;
    double L;
  };
  std::vector<Raw> raw;
  raw.reserve(V.pieces().size());
  double L = 0.0, u = 0.0, du = 1.0;
  for (const auto& p : V.pieces()) {
    const double h = p.hi - p.lo;
    Segment seg{p.lo, p.hi, p.value, 0.0, 0.0, 0.0};
    if (p.value == 0.0) {
      seg.P = u;
      seg.Q = du;
      raw.push_back({seg, L});
      u += du * h;
    } else {
      const double k = std::sqrt(0.5 * p.value);
      const double al = 0.5 * (u + du / k);
      const double be = 0.5 * (u - du / k);
      const double e = std::exp(-k * h);
      seg.kappa = k;
      seg.P = al;
      seg.Q = be * e;
      L += k * h;
      raw.push_back({seg, L});
      u = al + be * e * e;
      du = k * (al - be * e * e);
    }
    const double m = std::max(std::abs(u), std::abs(du));
    if (!(m > 0.0) || !std::isfinite(m)) throw std::runtime_error("scattering propagation lost the solution");
    u /= m;
    du /= m;
    L += std::log(m);
    if (u < 0.0 || du <= 0.0) throw std::runtime_error("negative scattering solution: potential is not repulsive");
  }

  if (raw.empty()) {
    s.a = s.core_radius;
    s.core_slope = s.has_core() ? 1.0 : 0.0;
  } else {
    s.a = R - u / du;
    s.core_slope = s.has_core() ? std::exp(-L) / du : 0.0;
    s.segments.reserve(raw.size());
    for (auto& r : raw) {
      const double f = std::exp(r.L - L) / du;
      r.seg.P *= f;
      r.seg.Q *= f;
      s.segments.push_back(r.seg);
    }
  }

  const std::size_t n = opt.grid_size;
  s.grid.resize(n);
  s.phi.resize(n);
  s.omega.resize(n);
  s.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.core_radius + (s.R_out - s.core_radius) * double(i) / double(n - 1);
    s.grid[i] = r;
    s.phi[i] = s.phi_at(r);
    if (s.phi[i] < -1e-12 || s.phi[i] > 1.0 + 1e-12) throw std::runtime_error("scattering solution left [0, 1]");
    s.omega[i] = 1.0 - s.phi[i];
    s.g[i] = s.g_at(r);
  }

  // affine fit of u on the outer segment, kept as a health figure
  double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.grid[i];
    if (r < 1.2 * R) continue;
    const double y = s.phi[i] * r;
    sx += r;
    sy += y;
    sxx += r * r;
    sxy += r * y;
    cnt += 1;
  }
  if (cnt >= 2) {
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / cnt;
    s.fit_a = -icpt / slope;
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (s.grid[i] < 1.2 * R) continue;
      res = std::max(res, std::abs(s.phi[i] * s.grid[i] - (icpt + slope * s.grid[i])));
    }
    s.fit_residual = res;
  }
  return s;
}

inline ScatteringSolution solve_scattering(const RadialPotential& V, double R_out, std::size_t grid_size) {
  return solve_scattering(V, ScatterOptions{R_out, grid_size});
}

inline double scattering_length(const RadialPotential& V) {
  return solve_scattering(V, ScatterOptions{0.0, 64}).a;
}

// a = R − tanh(κR)/κ for the square well, κ = √(K/2)
inline double square_well_length(double K, double R) {
  const double k = std::sqrt(0.5 * K);
  return R - std::tanh(k * R) / k;
}

namespace detail {

constexpr double layer_width = 46.0;  // e^{-46} ~ 1e-20

// ∫ f over a segment, skipping the interior of long pieces where both
// exponentials are below e^{-46} of their edge values.
template <class F>
double integrate_segment(const Segment& s, F&& f) {
  const double h = s.r1 - s.r0;
  const double kh = s.kappa * h;
  if (kh <= 2.0 * layer_width) return gauss_panels(f, s.r0, s.r1, int(std::ceil(kh / 2.0)) + 1);
  const double w = layer_width / s.kappa;
  const int n = int(std::ceil(layer_width / 2.0)) + 1;
  return gauss_panels(f, s.r0, s.r0 + w, n) + gauss_panels(f, s.r1 - w, s.r1, n);
}

// ∫_{r0}^{r1} e^{κ(r−r1)} r sinc(pr) dr  (dir = +1)
// ∫_{r0}^{r1} e^{−κ(r−r0)} r sinc(pr) dr (dir = −1)
inline double exp_sinc_term(double k, double r0, double r1, double p, int dir) {
  const double h = r1 - r0;
  const double w = std::min(h, layer_width / k);
  if (p * w >= 2.0 && p * r1 >= 2.0) {
    using C = std::complex<double>;
    const C I(0.0, 1.0);
    const double e = std::exp(-k * h);
    C z;
    if (dir > 0)
      z = (std::exp(I * (p * r1)) - e * std::exp(I * (p * r0))) / C(k, p);
    else
      z = (std::exp(I * (p * r0)) - e * std::exp(I * (p * r1))) / C(k, -p);
    return z.imag() / p;
  }
  const int n = int(std::ceil(std::max(k * w, p * w) / 2.0)) + 1;
  if (dir > 0)
    return gauss_panels([&](double r) { return std::exp(k * (r - r1)) * r * sinc(p * r); }, r1 - w, r1, n);
  return gauss_panels([&](double r) { return std::exp(-k * (r - r0)) * r * sinc(p * r); }, r0, r0 + w, n);
}

}  // namespace detail

// ĝ(p) = 4π∫ g(r) sinc(pr) r² dr, plus the surface term of a hard core.
inline double fourier_hat(const ScatteringSolution& sol, double p) {
  if (p < 0.0 || std::isnan(p)) throw std::domain_error("fourier_hat needs p >= 0");
  KahanSum acc;
  for (const auto& s : sol.segments) {
    if (s.v == 0.0) continue;
    const double h = s.r1 - s.r0;
    double I;
    if (s.kappa * h <= 4.0 && p * h <= 4.0) {
      I = boost::math::quadrature::gauss<double, 16>::integrate(
          [&](double r) { return s.u(r) * r * sinc(p * r); }, s.r0, s.r1);
    } else {
      I = s.P * detail::exp_sinc_term(s.kappa, s.r0, s.r1, p, +1) +
          s.Q * detail::exp_sinc_term(s.kappa, s.r0, s.r1, p, -1);
    }
    acc += 4.0 * pi * s.v * I;
  }
  if (sol.has_core()) acc += 8.0 * pi * sol.core_radius * sol.core_slope * sinc(p * sol.core_radius);
  return acc.value();
}

// ĝω(0) = 4π∫ g ω r² dr
inline double g_omega_zero(const ScatteringSolution& sol) {
  KahanSum acc;
  for (const auto& s : sol.segments) {
    if (s.v == 0.0) continue;
    const double I = detail::integrate_segment(s, [&](double r) {
      const double u = s.u(r);
      return u * (r - u);
    });
    acc += 4.0 * pi * s.v * I;
  }
  if (sol.has_core()) acc += 8.0 * pi * sol.core_radius * sol.core_slope;
  return acc.value();
}

// (1/4π)∫(|∇φ|² + ½V|φ|²) = ∫ (u' − u/r)² + ½V u² dr
inline double variational_energy(const ScatteringSolution& sol) {
  KahanSum acc;
  for (const auto& s : sol.segments) {
    if (s.v == 0.0) {
      const double c = s.Q * s.r0 - s.P;
      if (c != 0.0) acc += c * c * (1.0 / s.r0 - 1.0 / s.r1);
      continue;
    }
    acc += detail::integrate_segment(s, [&](double r) {
      const double u = s.u(r);
      const double d = s.du(r) - u / r;
      return d * d + 0.5 * s.v * u * u;
    });
  }
  if (sol.support_radius > 0.0) acc += sol.a * sol.a / sol.support_radius;
  return acc.value();
}

inline double variational_energy(const ScatteringSolution& sol, const RadialPotential&) {
  return variational_energy(sol);
}

// |ĝ(k)| <= e2/k² + e1/k for all k > 0.
struct FourierEnvelope {
  double e1 = 0.0;
  double e2 = 0.0;
  double operator()(double k) const { return e2 / (k * k) + e1 / k; }
};

inline FourierEnvelope fourier_envelope(const ScatteringSolution& sol) {
  // total variation of V·u, including the jumps to zero at both ends
  KahanSum tv;
  double prev = 0.0;
  for (const auto& s : sol.segments) {
    const double lo = s.v * s.u(s.r0);
    const double hi = s.v * s.u(s.r1);
    tv += std::abs(lo - prev);
    tv += std::abs(hi - lo);
    prev = hi;
  }
  tv += std::abs(prev);
  return {sol.has_core() ? 8.0 * pi * sol.core_slope : 0.0, 4.0 * pi * tv.value()};
}

}  // namespace dilute
