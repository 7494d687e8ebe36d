#include <catch_amalgamated.hpp>

#include <cmath>

#include "dilute/free_energy.hpp"

using namespace dilute;

// frozen from tests/oracles/compute_oracles.py
static constexpr double lhy_at_one = 30013.95582524856505968426;  // 64π⁴·128/(15√π)
static constexpr double free_gas = -0.03011422948715939946408616;  // −ζ(5/2)Γ(5/2)4π/(2π)³

TEST_CASE("LHY integral", "[free_energy]") {
  CHECK(lhy_integral(0.0) == 0.0);
  CHECK(lhy_integral(1.0) == Catch::Approx(lhy_at_one).epsilon(1e-12));
  CHECK(lhy_closed_form(1.0) == Catch::Approx(lhy_at_one).epsilon(1e-14));
  for (double x : {1e-9, 3.7e-4, 0.2, 5.0}) {
    CHECK(lhy_integral(x) == Catch::Approx(lhy_closed_form(x)).epsilon(1e-9));
    CHECK(std::abs(lhy_integral(4 * x) / lhy_integral(x) - 32.0) < 1e-12);
  }
  SECTION("G >= 0 and matches the naive form where that is safe") {
    for (double t = 1e-3; t < 1e3; t *= 1.7) {
      const double g = detail::lhy_G(t);
      CHECK(g >= 0.0);
      if (t > 0.1) CHECK(g == Catch::Approx(std::sqrt(1 + 2 * t) - 1 - t + t * t / 2).epsilon(1e-9));
    }
    CHECK(detail::lhy_G(1e-6) == Catch::Approx(0.5e-18).epsilon(1e-5));
  }
  CHECK_THROWS(lhy_integral(-1.0));
}

TEST_CASE("thermodynamic formula", "[free_energy]") {
  SECTION("T = 0") {
    const auto r = f_thermo(1e-5, 0.0, 1.0);
    CHECK(r.thermal == 0.0);
    CHECK(r.total() == Catch::Approx(4 * pi * 1e-10 * (1 + lhy_constant * std::sqrt(1e-5))).epsilon(1e-15));
  }
  SECTION("free gas") {
    for (double T : {1.0, 0.01, 3e-7}) {
      const auto r = f_thermo(0.3, T, 0.0);
      CHECK(r.thermal == Catch::Approx(free_gas * std::pow(T, 2.5)).epsilon(1e-10));
      CHECK(r.tail_bound < 1e-10 * std::abs(r.thermal));
      CHECK(r.mean_field == 0.0);
    }
  }
  SECTION("collapse in (ρa³, T/(ρa))") {
    // (ρ, a, T) → (λ⁻³ρ, λa, λ⁻²T) scales f by λ⁻⁵
    const auto r1 = f_thermo(1e-6, 2e-6, 1.0);
    const double L = 3.0;
    const auto r2 = f_thermo(1e-6 / (L * L * L), 2e-6 / (L * L), L);
    CHECK(r2.total() * std::pow(L, 5) == Catch::Approx(r1.total()).epsilon(1e-10));
  }
  SECTION("thermal part is negative and increases with ρa") {
    double prev = -1e300;
    for (double rho : {0.0, 1e-4, 1e-3, 1e-2, 1e-1}) {
      const double t = f_thermo(rho, 0.1, 1.0).thermal;
      CHECK(t <= 0.0);
      CHECK(t >= prev);
      prev = t;
    }
  }
}

TEST_CASE("box functional", "[free_energy]") {
  SECTION("T = 0") {
    const auto r = f_bog(100.0, 2000.0, 1.0, 0.0);
    const double rho = 2e-3;
    CHECK(r.thermal_sum == 0.0);
    CHECK(r.total() == Catch::Approx(4 * pi * rho * rho * 1e6 * (1 + lhy_constant * std::sqrt(rho))).epsilon(1e-14));
  }
  SECTION("n = 0 is the ideal gas sum") {
    const double ell = 30.0, T = 0.4;
    const ThermalLattice lat(ell, T);
    const auto r = f_bog(lat, 0.0, 1.0);
    CHECK(r.mean_field == 0.0);
    CHECK(r.lhy == 0.0);
    const double ideal = lat.sum_with([](double p) { return p * p; });
    CHECK(r.thermal_sum == Catch::Approx(ideal).epsilon(1e-14));
    // |T Σ log(1 − e^{−p²/T})| against T^{5/2}ℓ³
    const double C = std::abs(ideal) / (std::pow(T, 2.5) * ell * ell * ell);
    CHECK(C < 0.05);
    CHECK(C > 0.01);
  }
  SECTION("brute-force lattice sum") {
    const double ell = 12.0, T = 0.3, n = 5.0, a = 0.7;
    const double u = n / (ell * ell * ell) * a;
    KahanSum s;
    for (int i = 0; i < 60; ++i)
      for (int j = 0; j < 60; ++j)
        for (int k = 0; k < 60; ++k) {
          if (i + j + k == 0) continue;
          const double p = pi / ell * std::sqrt(double(i * i + j * j + k * k));
          s += std::log(-std::expm1(-ThermalLattice::omega(p, u) / T));
        }
    const auto r = f_bog(ell, n, a, T);
    CHECK(r.thermal_sum == Catch::Approx(T * s.value()).epsilon(1e-12));
    CHECK(r.tail_ok());
    CHECK(r.thermal_sum <= 0.0);
    CHECK(r.thermal_integral <= 0.0);
  }
  SECTION("thermal sum is non-increasing in ω (raise a)") {
    const ThermalLattice lat(20.0, 0.5);
    double prev = -1e300;
    for (double a : {0.1, 0.5, 1.0, 2.0}) {
      const double s = f_bog(lat, 10.0, a).thermal_sum;
      CHECK(s >= prev);
      prev = s;
    }
  }
  SECTION("tail bound") {
    const ThermalLattice lat(50.0, 1.0);
    CHECK(lat.tail_bound() < 1e-15);
    CHECK_THROWS_AS(ThermalLattice(1e4, 1.0, 1000), std::length_error);
  }
}

TEST_CASE("box converges to the thermodynamic formula", "[free_energy]") {
  // ρa³ = 1e-6, T = ρa; discrepancy ~ C(Tℓ²)^{-1/2}T^{5/2}
  const double a = 1.0, rho = 1e-6, T = 1e-6;
  double prev = 0.0;
  for (double ell : {32000.0, 64000.0, 128000.0}) {
    const ThermalLattice lat(ell, T);
    const auto r = f_bog(lat, rho * ell * ell * ell, a);
    const double d = std::abs(r.total() / (ell * ell * ell) - f_thermo(rho, T, a).total());
    CHECK(d < 0.01 * std::pow(T, 2.5) / std::sqrt(T * ell * ell));
    if (prev > 0.0) {
      CHECK(prev / d > 1.4);
      CHECK(prev / d < 2.6);
    }
    prev = d;
  }
}

TEST_CASE("Bogoliubov sum against LHY", "[free_energy]") {
  const auto sw = solve_scattering(RadialPotential::square_well(8.0, 1.0));
  const double a = sw.a, x = 1e-6, rho = x / (a * a * a);
  SECTION("ρ_z = 0") {
    const auto r = bog_sum_minus_integral(100.0, 0.0, sw, 4.0);
    CHECK(r.lhs == 0.0);
    CHECK(r.lhy == 0.0);
  }
  SECTION("deviation decays like 1/K_ℓ") {
    // dominated by the coordinate-plane terms of the Neumann lattice,
    // ≈ −24πa²ρ² log(…)/ℓ
    std::vector<double> dev;
    for (double Kl : {4.0, 8.0, 16.0}) {
      const double ell = Kl / std::sqrt(rho * a);
      const auto r = bog_sum_minus_integral(ell, rho, sw, 8.0);
      CHECK(r.tail_bound < 1e-8 * r.lhy);
      CHECK(r.lhy == Catch::Approx(8 * pi * lhy_constant * std::pow(rho * a, 2.5)).epsilon(1e-14));
      dev.push_back(std::abs(r.relative()));
    }
    for (std::size_t i = 1; i < dev.size(); ++i) {
      const double q = dev[i - 1] / dev[i];
      CHECK(q >= std::pow(2.0, 0.25));
      CHECK(q <= 2.0 * 1.05);
    }
  }
  SECTION("head/tail split does not matter") {
    const double ell = 8.0 / std::sqrt(rho * a);
    const auto r1 = bog_sum_minus_integral(ell, rho, sw, 8.0, {40});
    const auto r2 = bog_sum_minus_integral(ell, rho, sw, 8.0, {90});
    CHECK(r1.lhs == Catch::Approx(r2.lhs).epsilon(1e-6));
  }
  SECTION("hard core") {
    const auto hc = solve_scattering(RadialPotential::hard_core(1.0));
    double prev = 0.0;
    for (double Kl : {8.0, 16.0, 32.0}) {
      const auto r = bog_sum_minus_integral(Kl / std::sqrt(1e-8), 1e-8, hc, 8.0);
      CHECK(r.tail_bound < 1e-8 * r.lhy);
      const double c = r.relative() * Kl;
      if (prev != 0.0) CHECK(c == Catch::Approx(prev).epsilon(0.03));
      prev = c;
    }
  }
  SECTION("summand positivity") {
    for (double tau = 1e-4; tau < 10; tau *= 3)
      for (double xx = 1e-6; xx < 5; xx *= 4) CHECK(detail::bog_summand(tau, xx) + xx * xx / (2 * tau) >= 0.0);
  }
}

TEST_CASE("thermal sums with D̃ against ω", "[free_energy]") {
  const auto sw = solve_scattering(RadialPotential::square_well(8.0, 1.0));
  const double a = sw.a, rho = 1e-5 / (a * a * a), ell = 2.0 / std::sqrt(rho * a), K_H = 8.0;
  SECTION("T = 0") {
    const auto c = thermal_sum_compare(ell, rho, 0.0, K_H, sw);
    CHECK(c.gap == 0.0);
  }
  SECTION("ρ_z = 0: D̃ <= p² on every shell, so left <= right") {
    const auto c = thermal_sum_compare(ell, 0.0, rho * a, K_H, sw);
    CHECK(c.gap <= 0.0);
  }
  SECTION("gap relative to ℓ³(ρa)³") {
    const auto c = thermal_sum_compare(ell, rho, rho * a, K_H, sw);
    CHECK(std::isfinite(c.empirical_C));
    CHECK(c.scale == Catch::Approx(ell * ell * ell * std::pow(rho * a, 3)));
    CHECK(c.max_dw_ratio > 0.0);
    CHECK(std::isfinite(c.max_dw_ratio));
  }
}

TEST_CASE("chemical potential", "[free_energy]") {
  SECTION("T = 0, no thermal part: mean field plus LHY") {
    const auto c = chemical_potential(100.0, 1e-4, 1.0, 0.0);
    CHECK(c.mu == Catch::Approx(c.mean_field_lhy).epsilon(1e-5));  // step 1 at n = 100
    CHECK(c.mu_analytic == Catch::Approx(c.mean_field_lhy).epsilon(1e-14));
  }
  SECTION("FD agrees with the exact derivative") {
    const auto c = chemical_potential(300.0, 1e-5, 1.0, 1e-5);
    CHECK(c.richardson_ok);
    CHECK(c.mu == Catch::Approx(c.mu_analytic).epsilon(1e-6));
  }
  SECTION("|μ − 8πaρ|/(ρa) decreases along ρa³") {
    double prev = 1e300;
    for (double x : {1e-4, 1e-5, 1e-6, 1e-7}) {
      const double ell = std::pow(x, -0.05) / std::sqrt(x);
      const auto c = chemical_potential(ell, x, 1.0, x);
      const double d = std::abs(c.mu - 8 * pi * x) / x;
      CHECK(d < prev);
      prev = d;
    }
  }
  SECTION("second difference in n is non-negative") {
    const ThermalLattice lat(200.0, 1e-4);
    for (double n = 1; n < 400; n += 7) {
      const double d2 = f_bog_total(lat, n + 1, 1.0) - 2 * f_bog_total(lat, n, 1.0) + f_bog_total(lat, n - 1, 1.0);
      CHECK(d2 >= -1e-13 * f_bog_total(lat, n, 1.0));
    }
  }
}

TEST_CASE("convexity of the thermal sum", "[free_energy]") {
  const double a = 1.0, ell = 400.0;
  std::vector<double> c1;
  for (double Tl2 : {400.0, 4000.0}) {
    const double T = Tl2 / (ell * ell);
    std::vector<double> rhos;
    for (int i = 0; i < 10; ++i) rhos.push_back(T / a * std::pow(10.0, -1.0 + 2.0 * i / 9.0));
    const auto r = convexity_check(ThermalLattice(ell, T), a, rhos);
    CHECK(r.signs_ok);
    CHECK(r.resolved);
    for (const auto& s : r.samples) CHECK(s.d1_half == Catch::Approx(s.d1_analytic).epsilon(1e-3));
    c1.push_back(r.c1_max);
  }
  CHECK(c1[0] / c1[1] == Catch::Approx(1.0).epsilon(0.3));
}

TEST_CASE("box assembly", "[free_energy]") {
  const double a = 1.0, rho = 1e-6, ell = 2000.0, n = rho * ell * ell * ell;
  SECTION("single box") {
    const auto r = box_assembly_bound(ell, n, ell, a, rho * a);
    CHECK(r.M == 1.0);
    CHECK(r.b3_ok);
    CHECK(r.within_slack);
    CHECK(r.bound <= r.F_star * (1 + 1e-12));
    CHECK(r.F_star - r.bound <= rho * a * std::log(n + 1) * (1 + 1e-12));
  }
  SECTION("T → 0") {
    const auto r = box_assembly_bound(2 * ell, 8 * n, ell, a, 1e-6 * rho * a);
    CHECK(r.M == 8.0);
    CHECK(r.b3_ok);
    CHECK(r.b3_checked == std::int64_t(20 * n) + 1);
    CHECK(std::abs(r.bound - r.reference) < 1e-6 * std::abs(r.reference));
  }
  SECTION("log-sum-exp does not overflow") {
    const auto r = box_assembly_bound(ell, n, ell, a, 1e-300);
    CHECK(std::isfinite(r.bound));
  }
  CHECK_THROWS(box_assembly_bound(1.5 * ell, n, ell, a, 1e-6));
}
