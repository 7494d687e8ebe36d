#pragma once
// The fourteen acceptance checks. Shared by tests/acceptance.cpp and `dilute_cli verify`.

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "free_energy.hpp"
#include "lattice.hpp"
#include "neumann.hpp"
#include "regimes.hpp"
#include "regularize.hpp"
#include "scattering.hpp"
#include "verdict.hpp"

namespace dilute {

struct Criterion {
  int id;
  std::string title;
  std::function<Verdict()> run;
};

namespace acceptance {

inline double rel(double x, double y) { return std::abs(x - y) / std::abs(y); }

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class... Ts>
std::string fmt(const Ts&... xs) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << xs);
  return os.str();
}

inline Verdict hard_core() {
  double worst = 0.0, slowest = 0.0;
  for (double R : {0.5, 1.0, 2.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const double a = solve_scattering(RadialPotential::hard_core(R)).a;
    slowest = std::max(slowest, seconds_since(t0));
    worst = std::max(worst, rel(a, R));
  }
  return {"hard-core scattering length a = R", worst < 1e-8 && slowest < 1.0, worst, 1e-8,
          fmt("R in {0.5,1,2}; slowest ", slowest, " s")};
}

// the root is found on the matching condition itself, not through the closed form
inline double well_root(double gamma) {
  const double e = std::exp(-2.0 * gamma);
  const double ratio = (1.0 - e) / (gamma - 1.0 + e * (gamma + 1.0));
  auto f = [&](double a) { return (1.0 - a) / a - ratio; };
  boost::uintmax_t it = 200;
  const auto r = boost::math::tools::toms748_solve(f, 1e-12, 1.0, boost::math::tools::eps_tolerance<double>(52), it);
  return 0.5 * (r.first + r.second);
}

inline Verdict square_well() {
  double worst = 0.0;
  for (double g : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double a = solve_scattering(RadialPotential::square_well(2.0 * g * g, 1.0)).a;
    worst = std::max(worst, rel(a, well_root(g)));
  }
  return {"square well against the matching-condition root", worst < 1e-8, worst, 1e-8,
          "gamma in {0.5,1,2,5,10}, R = 1"};
}

inline std::vector<RadialPotential> five_potentials() {
  std::vector<double> r, V;
  for (int i = 0; i <= 400; ++i) {
    r.push_back(i / 400.0);
    V.push_back(30.0 * (1.0 - r.back()) * (1.0 - r.back()));
  }
  return {RadialPotential::hard_core(1.0), RadialPotential::square_well(0.5, 1.0),
          RadialPotential::square_well(8.0, 1.0), RadialPotential::square_well(200.0, 1.0),
          RadialPotential::piecewise({{0.0, 0.5, 1e5}, {0.5, 1.0, 40.0}}), RadialPotential::tabulated(r, V)};
}

inline Verdict variational() {
  double worst = 0.0;
  for (const auto& V : five_potentials()) {
    const auto s = solve_scattering(V);
    worst = std::max(worst, rel(variational_energy(s), s.a));
  }
  return {"variational energy equals the scattering length", worst < 1e-6, worst, 1e-6,
          "hard core, wells gamma 0.5/2/10, two-step, tabulated 30(1-r)^2"};
}

inline Verdict born() {
  double worst = 0.0;
  for (const auto& V : five_potentials()) {
    const auto s = solve_scattering(V);
    worst = std::max(worst, rel(fourier_hat(s, 0.0), 8.0 * pi * s.a));
  }
  return {"g-hat(0) = 8 pi a", worst < 1e-6, worst, 1e-6, "same six potentials"};
}

inline Verdict lhy() {
  double worst = 0.0, homog = 0.0;
  for (double x : {1e-12, 1e-6, 1e-3, 1.0, 7.5}) {
    worst = std::max(worst, rel(lhy_integral(x), lhy_closed_form(x)));
    for (double lam : {4.0, 0.01, 3.0}) homog = std::max(homog, rel(lhy_integral(lam * x), std::pow(lam, 2.5) * lhy_integral(x)));
  }
  return {"LHY integral and 5/2-homogeneity", worst < 1e-6 && homog < 1e-12, worst, 1e-6,
          fmt("homogeneity err ", homog, "; magnitudes compared: the integrand is >= 0, the stated value carries a minus sign")};
}

inline Verdict diagonal() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = verify_diagonalization(bump_kernel(1.0), 3.0);
  const double dt = seconds_since(t0);
  const bool ok = r.max_offdiag < 1e-8 * r.fhat0 && r.max_diag_rel < 1e-6 && dt < 60.0;
  return {"symmetrized kernel is diagonal in the Neumann basis", ok, r.max_offdiag / r.fhat0, 1e-8,
          fmt(r.p_list.size(), " modes with |p| ell/pi <= 3; diag rel ", r.max_diag_rel, "; ", dt, " s")};
}

inline Verdict pipeline() {
  bool below = true, sup_exact = true;
  std::vector<double> ratio, dom;
  for (double x : {1e-4, 1e-5, 1e-6}) {
    const auto V = RadialPotential::hard_core(1.0);
    const auto r = regularize(V, x, 0.05);
    const auto& c = r.cert;
    const double ell = std::pow(x, -0.05) / std::sqrt(x);
    sup_exact = sup_exact && rel(c.sup_v, ell * ell) < 1e-14 && r.v.sup() == c.sup_v;
    // cell midpoints: the two conventions differ only on the sphere |x| = R
    for (int i = 0; i < 30000; ++i) {
      const double q = 1.5 * (i + 0.5) / 30000.0;
      below = below && r.v(q) <= V(q);
    }
    ratio.push_back(c.a_gap * c.ell);
    dom.push_back(c.g_dominance_constant);
    below = below && c.a_gap >= 0.0;
  }
  const double rmax = *std::max_element(ratio.begin(), ratio.end());
  const auto [dlo, dhi] = std::minmax_element(dom.begin(), dom.end());
  const double mid = 0.5 * (*dlo + *dhi), spread = (*dhi - *dlo) / (2.0 * mid);
  const bool ok = below && sup_exact && rmax <= 10.0 && std::isfinite(*dhi) && spread <= 0.2;
  return {"regularization pipeline, hard core", ok, rmax, 10.0,
          fmt("v<=V ", below, ", sup v = ell^2 ", sup_exact, ", dominance ", *dlo, "..", *dhi, " (+-",
              100 * spread, "%)")};
}

inline Verdict cap_loss() {
  const std::vector<RadialPotential> Vs{RadialPotential::hard_core(1.0), RadialPotential::square_well(1e8, 1.0),
                                        RadialPotential::piecewise({{0.0, 0.5, 1e7}, {0.5, 1.0, 40.0}})};
  bool ok = true;
  double worst = 0.0;
  for (const auto& V : Vs)
    for (double K : {1e2, 1e4, 1e6}) {
      const double loss = scattering_length(V) - scattering_length(pointwise_min_cap(V, K));
      const double bound = 2.0 * std::sqrt(2.0) / std::sqrt(K);
      ok = ok && loss >= 0.0 && loss <= bound;
      worst = std::max(worst, loss / bound);
    }
  return {"cap loss 0 <= a(V) - a(min(V,K)) <= 2 sqrt2/sqrt K", ok, worst, 1.0, "max loss/bound on a 3x3 grid"};
}

inline Verdict lattice_identity() {
  const auto sw = solve_scattering(RadialPotential::square_well(8.0, 1.0));
  const double go = g_omega_zero(sw);
  std::vector<double> d;
  bool trunc = true;
  for (double ell : {10.0, 20.0, 40.0, 80.0, 160.0}) {
    const auto r = g_omega_lattice_sum(sw, ell);
    trunc = trunc && r.truncation_ok;
    d.push_back(std::abs(go - r.value) * ell / (sw.a * sw.a));
  }
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  return {"g-omega(0) minus lattice sum is O(a^2/ell)", trunc && *lo > 0.0 && *hi / *lo <= 2.0, *hi / *lo, 2.0,
          fmt("|diff| ell/a^2 from ", d.front(), " to ", d.back(), " over ell = 10..160")};
}

inline Verdict convergence() {
  const double a = 1.0, rho = 1e-6, T = 1e-6;
  std::vector<double> d;
  for (double ell : {32000.0, 64000.0, 128000.0}) {
    const ThermalLattice lat(ell, T);
    d.push_back(std::abs(f_bog(lat, rho * ell * ell * ell, a).total() / (ell * ell * ell) - f_thermo(rho, T, a).total()));
  }
  bool ok = true;
  double lo = 1e300;
  std::string note = "ratios";
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double q = d[i - 1] / d[i];
    ok = ok && q >= 1.4 && q <= 2.6;
    lo = std::min(lo, q);
    note += fmt(" ", q);
  }
  return {"box free energy density converges to the thermodynamic formula", ok, lo, 1.4,
          note + " (band 1.4..2.6); ell = 32000, 64000, 128000"};
}

inline Verdict convexity() {
  const double a = 1.0, ell = 400.0;
  bool ok = true;
  std::vector<double> c1;
  for (double Tl2 : {400.0, 4000.0}) {
    const double T = Tl2 / (ell * ell);
    std::vector<double> rhos;
    for (int i = 0; i < 10; ++i) rhos.push_back(T / a * std::pow(10.0, -1.0 + 2.0 * i / 9.0));
    const auto r = convexity_check(ThermalLattice(ell, T), a, rhos);
    ok = ok && r.signs_ok && r.resolved;
    c1.push_back(r.c1_max);
  }
  const double q = c1[0] / c1[1];
  ok = ok && std::abs(q - 1.0) <= 0.3;
  return {"convexity of the thermal sum", ok, q, 1.3,
          fmt("signs and FD resolution at 10 densities; c1 = ", c1[0], ", ", c1[1], " for T ell^2 = 400, 4000")};
}

inline Verdict chemical() {
  bool ok = true;
  double prev = 1e300;
  std::string note = "|mu - 8 pi a rho|/(rho a):";
  for (double x : {1e-4, 1e-5, 1e-6, 1e-7}) {
    const double ell = std::pow(x, -0.05) / std::sqrt(x);
    const auto c = chemical_potential(ell, x, 1.0, x);
    const double d = std::abs(c.mu - 8.0 * pi * x) / x;
    ok = ok && d < prev;
    prev = d;
    note += fmt(" ", d);
  }
  return {"chemical potential approaches 8 pi a rho", ok, prev, 0.0, note + "; T = rho a, eta = 0.05"};
}

inline Verdict assembly() {
  const double a = 1.0, rho = 1e-6, ell = 2000.0, n = rho * ell * ell * ell;
  const auto r = box_assembly_bound(2.0 * ell, 8.0 * n, ell, a, 1e-6 * rho * a);
  const double err = rel(r.bound, r.reference);
  const bool ok = r.b3_ok && r.b3_checked == std::int64_t(20.0 * n) + 1 && err < 1e-6;
  return {"box assembly", ok, err, 1e-6,
          fmt("termwise inequality on ", r.b3_checked, " values of n, min margin ", r.b3_min_margin,
              "; T = 1e-6 rho a, M = ", r.M)};
}

inline Verdict regime() {
  bool ok = true;
  std::size_t pts = 0;
  for (double x : {1e-4, 1e-8, 1e-20}) {
    const auto in = sweep_eta(x, 1e-7, eta_max * (1 - 1e-12), 2000);
    const auto out = sweep_eta(x, eta_max * (1 + 1e-9), 0.5, 500);
    ok = ok && in.exact_pass == in.points && in.structural_pass == in.points && out.exact_pass == 0;
    pts += in.points + out.points;
  }
  bool eta_fails = false;
  for (const auto& v : check_constraints(derive(1e-6, 1.0, 1e-6, 1e-3, 2.5e-4)))
    if (v.verdict.name == "eta < 1/1026") eta_fails = !v.verdict.passed;
  return {"parameter schedule hypotheses", ok && eta_fails, double(pts), 0.0,
          "eta log-swept inside and outside (0, 1/1026), nu = eta/4, T = rho a; eta = 1e-3 fails the range"};
}

}  // namespace acceptance

inline std::vector<Criterion> acceptance_criteria() {
  using namespace acceptance;
  return {{1, "hard-core scattering", hard_core},     {2, "square-well root", square_well},
          {3, "variational consistency", variational}, {4, "zero-momentum transform", born},
          {5, "LHY integral", lhy},                   {6, "Neumann diagonalization", diagonal},
          {7, "regularization pipeline", pipeline},   {8, "cap loss", cap_loss},
          {9, "lattice identity", lattice_identity},   {10, "thermodynamic convergence", convergence},
          {11, "convexity", convexity},                {12, "chemical potential", chemical},
          {13, "box assembly", assembly},              {14, "regime checker", regime}};
}

// runs every criterion; a throwing criterion counts as a failure
inline std::vector<Verdict> run_acceptance(const std::function<void(const Criterion&, const Verdict&, double)>& report) {
  std::vector<Verdict> out;
  for (const auto& c : acceptance_criteria()) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {c.title, false, NAN, NAN, std::string("error: ") + e.what()};
    }
    report(c, v, acceptance::seconds_since(t0));
    out.push_back(v);
  }
  return out;
}

}  // namespace dilute
