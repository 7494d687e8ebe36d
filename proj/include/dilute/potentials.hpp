#pragma once
// Radial, non-negative, compactly supported potentials.
//
// The canonical form is piecewise constant: an optional hard core of radius
// rc followed by contiguous pieces covering [rc, R].

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace dilute {

struct Piece {
  double lo;
  double hi;
  double value;
};

inline double shell_integral(const Piece& p) {
  return 4.0 * pi / 3.0 * (p.hi * p.hi * p.hi - p.lo * p.lo * p.lo) * p.value;
}

class RadialPotential {
 public:
  RadialPotential() = default;  // V = 0

  static RadialPotential hard_core(double R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("hard core radius must be positive");
    RadialPotential v;
    v.core_ = R;
    return v;
  }

  static RadialPotential square_well(double K, double R) {
    return piecewise({{0.0, R, K}});
  }

  static RadialPotential piecewise(std::vector<Piece> pieces, double core_radius = 0.0) {
    RadialPotential v;
    v.core_ = core_radius;
    v.pieces_ = std::move(pieces);
    v.normalize();
    return v;
  }

  // Piecewise-linear samples (r_i, V_i), resampled onto `shells` equal shells
  // using the interpolant at each shell midpoint.
  static RadialPotential tabulated(const std::vector<double>& r, const std::vector<double>& V,
                                   std::size_t shells = 4096) {
    if (r.size() != V.size() || r.size() < 2) throw std::invalid_argument("tabulated potential needs >= 2 samples");
    if (shells == 0) throw std::invalid_argument("shell count must be positive");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r[i]) || !std::isfinite(V[i]) || V[i] < 0.0 || r[i] < 0.0)
        throw std::invalid_argument("tabulated sample " + std::to_string(i) + " is negative or not finite");
      if (i > 0 && !(r[i] > r[i - 1])) throw std::invalid_argument("tabulated radii must increase strictly");
    }
    auto interp = [&](double x) {
      auto it = std::upper_bound(r.begin(), r.end(), x);
      if (it == r.begin()) return V.front();
      if (it == r.end()) return V.back();
      const std::size_t j = std::size_t(it - r.begin());
      const double t = (x - r[j - 1]) / (r[j] - r[j - 1]);
      return V[j - 1] + t * (V[j] - V[j - 1]);
    };
    std::vector<Piece> ps;
    if (r.front() > 0.0) ps.push_back({0.0, r.front(), V.front()});
    const double h = (r.back() - r.front()) / double(shells);
    for (std::size_t i = 0; i < shells; ++i) {
      const double lo = r.front() + double(i) * h;
      const double hi = i + 1 == shells ? r.back() : lo + h;
      ps.push_back({lo, hi, interp(0.5 * (lo + hi))});
    }
    return piecewise(std::move(ps));
  }

  double core_radius() const { return core_; }
  bool has_core() const { return core_ > 0.0; }
  double support_radius() const { return pieces_.empty() ? core_ : pieces_.back().hi; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_zero() const { return core_ == 0.0 && pieces_.empty(); }

  double operator()(double r) const {
    if (r < 0.0 || std::isnan(r)) throw std::domain_error("potential evaluated at negative radius");
    if (r < core_) return std::numeric_limits<double>::infinity();
    if (pieces_.empty() || r > pieces_.back().hi) return 0.0;
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), r,
                               [](double x, const Piece& p) { return x < p.hi; });
    if (it == pieces_.end()) return pieces_.back().value;
    return it->value;
  }

  // 4π∫V r²dr, infinite with a hard core
  double integral() const {
    if (has_core()) return std::numeric_limits<double>::infinity();
    return finite_integral();
  }

  double finite_integral() const {
    KahanSum s;
    for (const auto& p : pieces_) s += shell_integral(p);
    return s.value();
  }

  double sup() const {
    if (has_core()) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (const auto& p : pieces_) m = std::max(m, p.value);
    return m;
  }

  bool non_increasing() const {
    double last = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) {
      if (p.value > last) return false;
      last = p.value;
    }
    return true;
  }

 private:
  void normalize() {
    if (!(core_ >= 0.0) || !std::isfinite(core_)) throw std::invalid_argument("core radius must be finite and >= 0");
    for (const auto& p : pieces_) {
      if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !(p.hi > p.lo))
        throw std::invalid_argument("piece needs finite lo < hi");
      if (!std::isfinite(p.value) || p.value < 0.0)
        throw std::invalid_argument("piece values must be finite and >= 0");
    }
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    std::vector<Piece> out;
    double at = core_;
    for (const auto& p : pieces_) {
      const double tol = 1e-14 * std::max(1.0, p.hi);
      if (p.lo < at - tol) throw std::invalid_argument("pieces overlap or intrude into the hard core");
      if (p.lo > at + tol) out.push_back({at, p.lo, 0.0});
      const double lo = std::max(at, p.lo);
      if (p.hi <= lo) continue;
      if (!out.empty() && out.back().value == p.value)
        out.back().hi = p.hi;
      else
        out.push_back({lo, p.hi, p.value});
      at = p.hi;
    }
    while (!out.empty() && out.back().value == 0.0) out.pop_back();
    pieces_ = std::move(out);
  }

  double core_ = 0.0;
  std::vector<Piece> pieces_;
};

inline double evaluate(const RadialPotential& V, double r) { return V(r); }

inline RadialPotential pointwise_min_cap(const RadialPotential& V, double K) {
  if (!(K > 0.0) || !std::isfinite(K)) throw std::invalid_argument("cap must be positive and finite");
  std::vector<Piece> ps;
  if (V.has_core()) ps.push_back({0.0, V.core_radius(), K});
  for (auto p : V.pieces()) {
    p.value = std::min(p.value, K);
    ps.push_back(p);
  }
  return RadialPotential::piecewise(std::move(ps));
}

struct TailCut {
  RadialPotential potential;
  double R_S;
  bool truncated;
};

// Keeps V on [R_S, ∞) with 4π∫_{R_S} V r² = 8πS·a_V, or returns V unchanged
// when its integral is already at most that.
inline TailCut tail_truncate(const RadialPotential& V, double S, double a_V) {
  if (!(S > 0.0)) throw std::invalid_argument("tail_truncate needs S > 0");
  if (!(a_V >= 0.0)) throw std::invalid_argument("tail_truncate needs a_V >= 0");
  const double target = 8.0 * pi * S * a_V;
  if (V.integral() <= target) return {V, V.core_radius(), false};

  const auto& ps = V.pieces();
  double above = 0.0;
  for (std::size_t j = ps.size(); j-- > 0;) {
    const double here = shell_integral(ps[j]);
    if (above + here >= target && ps[j].value > 0.0) {
      const double hi3 = ps[j].hi * ps[j].hi * ps[j].hi;
      double r3 = hi3 - 3.0 * (target - above) / (4.0 * pi * ps[j].value);
      double rs = std::cbrt(std::max(r3, 0.0));
      rs = std::clamp(rs, ps[j].lo, ps[j].hi);
      std::vector<Piece> out;
      if (rs < ps[j].hi) out.push_back({rs, ps[j].hi, ps[j].value});
      for (std::size_t k = j + 1; k < ps.size(); ++k) out.push_back(ps[k]);
      // leading zero gap [0, rs) is implicit
      return {RadialPotential::piecewise(std::move(out)), rs, true};
    }
    above += here;
  }
  throw std::domain_error("tail truncation radius falls inside the hard core");
}

}  // namespace dilute
