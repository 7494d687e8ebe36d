#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "dilute/potentials.hpp"

using namespace dilute;
using Catch::Approx;

TEST_CASE("evaluate hard core and square well", "[potentials]") {
  auto hc = RadialPotential::hard_core(1.0);
  CHECK(std::isinf(hc(0.5)));
  CHECK(hc(2.0) == 0.0);
  CHECK(hc(1.0) == 0.0);
  CHECK(hc.support_radius() == 1.0);

  auto sw = RadialPotential::square_well(8.0, 1.0);
  CHECK(sw(0.5) == 8.0);
  CHECK(sw(0.0) == 8.0);
  CHECK(sw(1.0) == 8.0);
  CHECK(sw(1.0 + 1e-12) == 0.0);
  CHECK_THROWS_AS(sw(-0.1), std::domain_error);
}

TEST_CASE("piecewise normalisation", "[potentials]") {
  SECTION("gaps are filled with zero and trailing zeros dropped") {
    auto v = RadialPotential::piecewise({{0.5, 1.0, 2.0}, {0.0, 0.25, 3.0}, {1.0, 2.0, 0.0}});
    CHECK(v.support_radius() == 1.0);
    REQUIRE(v.pieces().size() == 3);
    CHECK(v(0.3) == 0.0);
    CHECK(v(0.1) == 3.0);
    CHECK(v(0.75) == 2.0);
  }
  SECTION("bad input") {
    CHECK_THROWS(RadialPotential::piecewise({{0.0, 1.0, -1.0}}));
    CHECK_THROWS(RadialPotential::piecewise({{0.0, 1.0, 1.0}, {0.5, 2.0, 1.0}}));
    CHECK_THROWS(RadialPotential::piecewise({{0.0, 1.0, 1.0}}, 0.5));
    CHECK_THROWS(RadialPotential::piecewise({{1.0, 1.0, 1.0}}));
    CHECK_THROWS(RadialPotential::hard_core(0.0));
  }
  SECTION("zero potential") {
    RadialPotential z;
    CHECK(z.is_zero());
    CHECK(z(3.0) == 0.0);
    CHECK(z.integral() == 0.0);
  }
}

TEST_CASE("tabulated profiles are resampled", "[potentials]") {
  std::vector<double> r{0.0, 0.5, 1.0}, V{4.0, 1.0, 0.0};
  auto v = RadialPotential::tabulated(r, V, 8);
  CHECK(v.pieces().size() == 8);
  CHECK(v(0.01) == Approx(4.0 - 6.0 * 0.0625));
  CHECK(v.support_radius() == 1.0);
  CHECK(v.non_increasing());
  CHECK_THROWS(RadialPotential::tabulated({0.0, 0.0}, {1.0, 1.0}));
  CHECK_THROWS(RadialPotential::tabulated({0.0, 1.0}, {1.0, -1.0}));
}

TEST_CASE("min cap", "[potentials]") {
  auto hc = pointwise_min_cap(RadialPotential::hard_core(1.0), 10.0);
  CHECK_FALSE(hc.has_core());
  CHECK(hc(0.0) == 10.0);
  CHECK(hc(0.999) == 10.0);
  CHECK(hc.support_radius() == 1.0);

  auto sw = RadialPotential::square_well(8.0, 1.0);
  CHECK(pointwise_min_cap(sw, 10.0)(0.5) == 8.0);
  CHECK(pointwise_min_cap(sw, 3.0)(0.5) == 3.0);
  CHECK_THROWS(pointwise_min_cap(sw, 0.0));

  SECTION("capped value never exceeds the original") {
    auto v = RadialPotential::piecewise({{0.0, 0.3, 50.0}, {0.3, 0.6, 5.0}, {0.6, 1.2, 0.5}});
    for (double K : {0.1, 1.0, 7.0, 100.0}) {
      auto c = pointwise_min_cap(v, K);
      CHECK(c.support_radius() <= v.support_radius());
      for (int i = 0; i <= 200; ++i) {
        const double x = 1.3 * i / 200.0;
        CHECK(c(x) <= v(x));
        if (v(x) <= K) CHECK(c(x) == v(x));
      }
    }
  }
}

TEST_CASE("tail truncation", "[potentials]") {
  auto sw = RadialPotential::square_well(100.0, 1.0);
  SECTION("huge S leaves V alone") {
    auto t = tail_truncate(sw, 1e9, 1.0);
    CHECK_FALSE(t.truncated);
    CHECK(t.R_S == 0.0);
    CHECK(t.potential(0.5) == 100.0);
  }
  SECTION("half the integral gives R_S = 2^{-1/3}") {
    const double I0 = 0.5 * sw.integral();
    const double a = 0.7;
    auto t = tail_truncate(sw, I0 / (8.0 * pi * a), a);
    REQUIRE(t.truncated);
    CHECK(t.R_S == Approx(std::cbrt(0.5)).epsilon(1e-14));
    CHECK(t.potential.integral() == Approx(I0).epsilon(1e-12));
    CHECK(t.potential(0.5) == 0.0);
    CHECK(t.potential(0.9) == 100.0);
  }
  SECTION("capped hard core re-integrates to the target") {
    auto v = pointwise_min_cap(RadialPotential::hard_core(1.0), 1e6);
    const double S = 50.0;
    auto t = tail_truncate(v, S, 1.0);
    REQUIRE(t.truncated);
    const double got = t.potential.integral();
    CHECK(std::abs(got - 8.0 * pi * S) / (8.0 * pi * S) < 1e-10);
    CHECK(t.potential.support_radius() <= v.support_radius());
  }
  SECTION("crossing inside a hard core is an error") {
    auto v = RadialPotential::piecewise({{1.0, 1.1, 1.0}}, 1.0);
    CHECK_THROWS_AS(tail_truncate(v, 100.0, 1.0), std::domain_error);
  }
  SECTION("output integral equals min(integral, target)") {
    auto v = RadialPotential::piecewise({{0.0, 0.4, 30.0}, {0.4, 0.9, 3.0}, {0.9, 1.5, 0.2}});
    for (double S : {0.01, 0.1, 0.5, 1.0, 10.0}) {
      auto t = tail_truncate(v, S, 0.8);
      const double want = std::min(v.integral(), 8.0 * pi * S * 0.8);
      CHECK(std::abs(t.potential.integral() - want) <= 1e-10 * want);
    }
  }
}
