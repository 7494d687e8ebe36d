#include <catch_amalgamated.hpp>

#include <sstream>

#include "dilute/config.hpp"
#include "dilute/scattering.hpp"

using namespace dilute;

static RunConfig from(const std::string& text) {
  std::istringstream in(text);
  return RunConfig::parse(in, "t.ini");
}

static std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST_CASE("values and lists", "[config]") {
  const auto c = from("; comment\n[run]\nrho = 1e-6\nell = 10, 20 ,40\n[tol]\ngrid_size = 256\n");
  CHECK(c.get_double("run", "rho") == 1e-6);
  CHECK(c.get_list("run", "ell") == std::vector<double>{10, 20, 40});
  CHECK(c.get_double("tol", "grid_size", 1024) == 256);
  CHECK(c.get_double("tol", "R_out", 2.5) == 2.5);
  CHECK(c.has_block("run"));
  CHECK_FALSE(c.has_block("potential"));
  CHECK(c.flatten() == std::vector<std::string>{"run.rho=1e-6", "run.ell=10, 20 ,40", "tol.grid_size=256"});
}

TEST_CASE("diagnostics carry the line", "[config]") {
  CHECK_THAT(error_of([] { from("[run]\nrho = 1\nthis line has no equals sign\n"); }),
             Catch::Matchers::StartsWith("t.ini:3:"));
  CHECK_THAT(error_of([] { from("[run]\nrho = 1\n[run]\n"); }), Catch::Matchers::StartsWith("t.ini:3:"));
  const auto c = from("[run]\nrho = 1\n\neta = fast\n");
  CHECK_THAT(error_of([&] { c.get_double("run", "eta"); }), Catch::Matchers::StartsWith("t.ini:4:"));
  CHECK_THAT(error_of([&] { c.get_double("run", "eta"); }), Catch::Matchers::ContainsSubstring("'fast'"));
  CHECK_THAT(error_of([&] { c.get_double("run", "T"); }), Catch::Matchers::ContainsSubstring("needs key 'T'"));
  CHECK_THAT(error_of([&] { from("[run]\nx = 1.5.2\n").get_double("run", "x"); }),
             Catch::Matchers::ContainsSubstring("not a number"));
}

TEST_CASE("a missing block is named", "[config]") {
  const auto c = from("[run]\nrho = 1e-6\n");
  CHECK(error_of([&] { potential_from(c); }) == "t.ini: missing [potential] block");
  CHECK_THAT(error_of([&] { c.get_double("sweep", "R"); }), Catch::Matchers::ContainsSubstring("[sweep]"));
}

TEST_CASE("tolerance overrides", "[config]") {
  auto c = from("[tol]\ngrid_size = 256\n");
  c.apply_override("grid_size=512");
  c.apply_override(" R_out = 4 ");
  CHECK(c.get_double("tol", "grid_size") == 512);
  CHECK(c.get_double("tol", "R_out") == 4);
  auto d = from("[run]\nrho = 1\n");
  d.apply_override("shell_budget=1e6");
  CHECK(d.get_double("tol", "shell_budget") == 1e6);
  for (const char* bad : {"grid_size", "=3", "grid_size=", "grid_size=abc"})
    CHECK_THROWS_AS(c.apply_override(bad), ConfigError);
}

TEST_CASE("potential blocks", "[config]") {
  CHECK(scattering_length(potential_from(from("[potential]\ntype = hard_core\nR = 2\n"))) == Catch::Approx(2.0));
  const auto w = potential_from(from("[potential]\ntype = square_well\nR = 1\ngamma = 2\n"));
  CHECK(w(0.5) == 8.0);
  CHECK(potential_from(from("[potential]\ntype = square_well\nR = 1\nK = 3\n"))(0.5) == 3.0);
  const auto p = potential_from(from("[potential]\ntype = piecewise\ncore = 0.2\nedges = 0.5, 1\nvalues = 100, 4\n"));
  CHECK(p.core_radius() == 0.2);
  CHECK(p(0.3) == 100.0);
  CHECK(p(0.7) == 4.0);
  CHECK(p(1.5) == 0.0);
  const auto t = potential_from(from("[potential]\ntype = tabulated\nr = 0, 1\nV = 2, 0\nshells = 10\n"));
  CHECK(t.pieces().size() == 10);
  CHECK(t(0.05) == Catch::Approx(1.9));

  CHECK_THAT(error_of([] { potential_from(from("[potential]\ntype = lennard_jones\n")); }),
             Catch::Matchers::ContainsSubstring("unknown potential type 'lennard_jones'"));
  CHECK_THAT(error_of([] { potential_from(from("[potential]\ntype = hard_core\nR = -1\n")); }),
             Catch::Matchers::ContainsSubstring("[potential]"));
  CHECK_THAT(error_of([] { potential_from(from("[potential]\ntype = piecewise\nedges = 1, 2\nvalues = 3\n")); }),
             Catch::Matchers::ContainsSubstring("differ in length"));
}

TEST_CASE("shipped configs", "[config]") {
  // run from the source tree
  const auto c = RunConfig::load("examples_cfg/hardcore.ini");
  CHECK(scattering_length(potential_from(c)) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(c.get_list("sweep", "gamma").size() == 5);
  CHECK(error_of([] { potential_from(RunConfig::load("tests/data/no_potential.ini")); }) ==
        "tests/data/no_potential.ini: missing [potential] block");
  CHECK_THROWS_AS(RunConfig::load("examples_cfg/does_not_exist.ini"), ConfigError);
}
