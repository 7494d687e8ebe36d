#pragma once
// Replacement of a strong (possibly hard-core) potential V by a bounded,
// integrable v <= V with almost the same scattering length.
//
// Steps: cap at K = ℓ²a⁻⁴, cut the tail so that 4π∫_{R_S} V = 8πS·a with
// S = ℓ/a, extend the innermost kept level inwards by ε = a²/ℓ, then fill
// [0, R_S − ε] with min(max g_S, ℓR_S⁻³).

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"
#include "potentials.hpp"
#include "scattering.hpp"
#include "verdict.hpp"

namespace dilute {

struct RegularizeTrace {
  double K = 0.0;        // cap level
  double a_capped = 0.0; // a(min(V, K)), used for the tail cut
  double S = 0.0;
  double R_S = 0.0;
  double epsilon = 0.0;
  double M = 0.0;        // fill ceiling ℓR_S⁻³
  double x0 = 0.0;       // argmax of g_S
  double g_S_x0 = 0.0;
  double fill = 0.0;
  bool truncated = false;
  bool degenerate = false;
};

struct RegularizationCertificate {
  double a_V = 0.0;
  double a_v = 0.0;
  double a_gap = 0.0;
  double integral_v = 0.0;
  double sup_v = 0.0;
  double g_dominance_constant = 0.0;  // exact sup over |x| <= |y| of g_v(y)/v(x)
  double g_dominance_sampled = 0.0;   // same ratio on a 256 x 256 radius grid
  double rho = 0.0, eta = 0.0;
  double K_ell = 0.0, ell = 0.0;
  RegularizeTrace trace;
};

struct Regularized {
  RadialPotential v;
  RegularizationCertificate cert;
};

namespace detail {

// sup_{|x| <= |y|} g(y)/v(x). g = vφ increases inside each piece, so the sup
// over a piece is its left limit at the right end.
inline double dominance_exact(const ScatteringSolution& s) {
  const auto& seg = s.segments;
  if (seg.empty()) return 0.0;
  std::vector<double> top(seg.size());
  double run = 0.0;
  for (std::size_t j = seg.size(); j-- > 0;) {
    run = std::max(run, seg[j].v * seg[j].u(seg[j].r1) / seg[j].r1);
    top[j] = run;
  }
  double best = 0.0;
  for (std::size_t j = 0; j < seg.size(); ++j) {
    if (top[j] == 0.0) continue;
    if (seg[j].v == 0.0) return std::numeric_limits<double>::infinity();
    best = std::max(best, top[j] / seg[j].v);
  }
  return best;
}

inline double dominance_sampled(const ScatteringSolution& s, const RadialPotential& v, int n = 256) {
  const double R = v.support_radius();
  std::vector<double> g(n), vx(n);
  for (int i = 0; i < n; ++i) {
    const double r = R * (i + 0.5) / n;
    g[i] = s.g_at(r);
    vx[i] = v(r);
  }
  double best = 0.0, run = 0.0;
  for (int i = n; i-- > 0;) {
    run = std::max(run, g[i]);
    if (run == 0.0) continue;
    if (vx[i] == 0.0) return std::numeric_limits<double>::infinity();
    best = std::max(best, run / vx[i]);
  }
  return best;
}

}  // namespace detail

inline Regularized regularize(const RadialPotential& V, double rho, double eta) {
  if (!(rho > 0.0) || !(eta > 0.0)) throw std::invalid_argument("regularize needs rho > 0 and eta > 0");
  if (!V.non_increasing()) throw std::invalid_argument("regularize needs a non-increasing potential");
  if (V.is_zero()) throw std::invalid_argument("regularize needs a nonzero potential");

  Regularized out;
  auto& c = out.cert;
  auto& t = c.trace;
  c.rho = rho;
  c.eta = eta;
  c.a_V = scattering_length(V);
  const double a = c.a_V;
  const double x = rho * a * a * a;
  c.K_ell = std::exp(-eta * std::log(x));
  const double ell_a = c.K_ell / std::sqrt(x);  // ℓ/a
  c.ell = ell_a * a;

  t.K = ell_a * ell_a / (a * a);
  const RadialPotential capped = pointwise_min_cap(V, t.K);
  t.a_capped = scattering_length(capped);
  t.S = ell_a;
  const TailCut cut = tail_truncate(capped, t.S, t.a_capped);
  t.truncated = cut.truncated;
  t.R_S = cut.R_S;

  if (!cut.truncated) {
    out.v = capped;
  } else {
    t.epsilon = a / ell_a;
    double level = 0.0;
    for (const auto& p : cut.potential.pieces())
      if (p.value > 0.0) {
        level = p.value;
        break;
      }
    const double inner = t.R_S - t.epsilon;
    std::vector<Piece> w = cut.potential.pieces();
    std::erase_if(w, [&](const Piece& p) { return p.hi <= t.R_S * (1.0 + 1e-15) && p.value == 0.0; });
    if (inner <= 0.0) {
      t.degenerate = true;
      w.push_back({0.0, t.R_S, level});
      out.v = RadialPotential::piecewise(std::move(w));
    } else {
      w.push_back({inner, t.R_S, level});
      const RadialPotential wS = RadialPotential::piecewise(w);
      const ScatteringSolution sw = solve_scattering(wS, ScatterOptions{0.0, 64});
      const double R = wS.support_radius();

      // left limit of g_S; g_S only jumps at piece ends
      auto gl = [&](double r) {
        if (r <= inner) return sw.g_at(inner);
        const Segment& s = sw.find(std::nextafter(r, 0.0));
        return s.v * s.u(r) / r;
      };
      double best_r = inner, best_g = gl(inner);
      auto consider = [&](double r) {
        const double gv = gl(r);
        if (gv > best_g) {
          best_g = gv;
          best_r = r;
        }
      };
      const int n = 1024;
      for (int i = 0; i <= n; ++i) consider(inner + (R - inner) * i / n);
      const double h = (R - inner) / n;
      const double lo = std::max(inner, best_r - h), hi = std::min(R, best_r + h);
      consider(golden_max(gl, lo, hi));
      for (const auto& s : sw.segments)
        if (s.r1 > inner) consider(s.r1);
      t.x0 = best_r;
      t.g_S_x0 = best_g;
      t.M = c.ell / (t.R_S * t.R_S * t.R_S);
      t.fill = std::min(t.g_S_x0, t.M);
      w.push_back({0.0, inner, t.fill});
      out.v = RadialPotential::piecewise(std::move(w));
    }
  }

  const ScatteringSolution sv = solve_scattering(out.v, ScatterOptions{0.0, 64});
  c.a_v = sv.a;
  c.a_gap = c.a_V - c.a_v;
  c.integral_v = out.v.integral();
  c.sup_v = out.v.sup();
  c.g_dominance_constant = detail::dominance_exact(sv);
  c.g_dominance_sampled = detail::dominance_sampled(sv, out.v);
  return out;
}

inline std::vector<Verdict> verify_certificate(const RegularizationCertificate& c, double rho, double eta) {
  const double a = c.a_V;
  const double x = rho * a * a * a;
  const double K_ell = std::exp(-eta * std::log(x));
  const double ell = K_ell / std::sqrt(rho * a);
  std::vector<Verdict> out;

  // a√(ρa³)/K_ℓ is a²/ℓ
  const double gap_bound = a * std::sqrt(x) / K_ell;
  out.push_back({"a_gap <= a*sqrt(rho a^3)/K_ell", c.a_gap >= 0.0 && c.a_gap <= gap_bound, c.a_gap, gap_bound,
                 "ratio a_gap*ell/a^2 = " + std::to_string(c.a_gap * ell / (a * a))});
  const double norm = std::pow(rho * a, -0.5) * K_ell;
  out.push_back({"int v <= C (rho a)^{-1/2} K_ell", std::isfinite(c.integral_v), c.integral_v, norm,
                 "C = " + std::to_string(c.integral_v / norm) + " (same against ell)"});
  const double cap = ell * ell / (a * a * a * a);
  out.push_back({"sup v <= ell^2 a^-4", c.sup_v <= cap * (1.0 + 1e-15), c.sup_v, cap, ""});
  out.push_back({"g_v(y) <= C v(x) for |x| <= |y|", std::isfinite(c.g_dominance_constant),
                 c.g_dominance_constant, std::numeric_limits<double>::infinity(),
                 "sampled 256x256: " + std::to_string(c.g_dominance_sampled)});
  return out;
}

}  // namespace dilute
