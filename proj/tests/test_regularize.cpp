#include <catch_amalgamated.hpp>

#include <cmath>

#include "dilute/regularize.hpp"

using namespace dilute;

TEST_CASE("hard core at rho a^3 = 1e-6", "[regularize]") {
  const auto V = RadialPotential::hard_core(1.0);
  const auto r = regularize(V, 1e-6, 0.05);
  const auto& c = r.cert;
  const auto& t = c.trace;

  CHECK(c.a_V == 1.0);
  CHECK(c.K_ell == Catch::Approx(std::pow(10.0, 0.3)).epsilon(1e-14));
  CHECK(c.ell == Catch::Approx(c.K_ell * 1000.0).epsilon(1e-14));
  CHECK(c.sup_v == t.K);
  CHECK(t.K == Catch::Approx(c.ell * c.ell).epsilon(1e-14));
  REQUIRE(t.truncated);
  CHECK_FALSE(t.degenerate);
  CHECK(t.epsilon == Catch::Approx(1.0 / c.ell).epsilon(1e-14));

  SECTION("explicit two-level form") {
    // fill at M = ℓR_S⁻³ inside, K on the shell [R_S − ε, 1]
    CHECK(t.fill == t.M);
    REQUIRE(r.v.pieces().size() == 2);
    CHECK(r.v.pieces()[0].value == t.M);
    CHECK(r.v.pieces()[0].hi == Catch::Approx(t.R_S - t.epsilon).epsilon(1e-15));
    CHECK(r.v.pieces()[1].value == t.K);
    CHECK(r.v.support_radius() == 1.0);
    // shell thickness of order a²/ℓ
    const double shell = 1.0 - r.v.pieces()[0].hi;
    CHECK(shell * c.ell > 1.0);
    CHECK(shell * c.ell < 5.0);
  }
  SECTION("gap and certificate") {
    CHECK(c.a_gap >= 0.0);
    CHECK(c.a_gap * c.ell < 10.0);
    auto vs = verify_certificate(c, 1e-6, 0.05);
    REQUIRE(vs.size() == 4);
    CHECK(vs[2].passed);
    CHECK(vs[3].passed);
    CHECK(c.g_dominance_sampled <= c.g_dominance_constant * (1 + 1e-12));
  }
  SECTION("v is below V") {
    for (double x = 0.0; x <= 1.5; x += 1e-4) {
      if (x < 1.0) continue;  // V infinite
      CHECK(r.v(x) <= V(x));
    }
  }
}

TEST_CASE("ratio a_gap * ell / a^2 stays bounded", "[regularize]") {
  double lo = 1e300, hi = 0.0;
  for (double x : {1e-4, 1e-5, 1e-6}) {
    const auto c = regularize(RadialPotential::hard_core(1.0), x, 0.05).cert;
    const double ratio = c.a_gap * c.ell;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi < 10.0);
  CHECK(hi / lo < 1.5);
}

TEST_CASE("weak potential passes through unchanged", "[regularize]") {
  // after the cap the well is still integrable far below the tail threshold
  const auto V = RadialPotential::square_well(0.5, 1.0);
  const auto r = regularize(V, 1e-9, 0.05);
  CHECK_FALSE(r.cert.trace.truncated);
  CHECK(r.cert.a_gap == 0.0);
  CHECK(r.v.pieces().size() == 1);
  CHECK(r.v(0.5) == 0.5);
  CHECK(all_passed(verify_certificate(r.cert, 1e-9, 0.05)));
}

TEST_CASE("cap loss of a very strong well", "[regularize]") {
  const auto V = RadialPotential::square_well(1e14, 1.0);
  const auto r = regularize(V, 1e-5, 0.05);
  const double loss = r.cert.a_V - r.cert.trace.a_capped;
  CHECK(loss >= 0.0);
  CHECK(loss <= 2.0 * std::sqrt(2.0) / std::sqrt(r.cert.trace.K));
}

TEST_CASE("g_v increases on [0, R_S]", "[regularize]") {
  const auto V = RadialPotential::piecewise({{0.0, 0.5, 1e9}, {0.5, 1.0, 1e3}, {1.0, 1.2, 50.0}});
  const auto r = regularize(V, 1e-5, 0.05);
  const auto s = solve_scattering(r.v);
  double prev = 0.0;
  for (double x = 0.0; x <= r.cert.trace.R_S; x += r.cert.trace.R_S / 4000.0) {
    const double g = s.g_at(x);
    CHECK(g >= prev * (1.0 - 1e-12));
    prev = g;
  }
  for (double x = 0.0; x <= 1.3; x += 1e-3) CHECK(r.v(x) <= V(x));
  CHECK(r.cert.a_gap >= 0.0);
  CHECK(std::isfinite(r.cert.g_dominance_constant));
}

TEST_CASE("degenerate pipeline is flagged", "[regularize]") {
  // not dilute: ℓ ~ a, so the shell extension ε swallows the kept annulus
  const auto V = RadialPotential::hard_core(1.0);
  const auto r = regularize(V, 0.9, 0.05);
  CHECK(r.cert.trace.truncated);
  CHECK(r.cert.trace.degenerate);
  CHECK(r.cert.trace.R_S - r.cert.trace.epsilon <= 0.0);
  CHECK(r.v.sup() <= r.cert.trace.K);
}

TEST_CASE("preconditions", "[regularize]") {
  CHECK_THROWS(regularize(RadialPotential::hard_core(1.0), 0.0, 0.05));
  CHECK_THROWS(regularize(RadialPotential::hard_core(1.0), 1e-6, 0.0));
  CHECK_THROWS(regularize(RadialPotential::piecewise({{0, 1, 1.0}, {1, 2, 5.0}}), 1e-6, 0.05));
  CHECK_THROWS(regularize(RadialPotential{}, 1e-6, 0.05));
}
