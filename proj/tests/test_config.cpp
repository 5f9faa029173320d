#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "gbbm/config.hpp"

using namespace gbbm;

namespace {

std::string minimal_text() {
  return "[grid]\n"
         "L1 = 12.566370614359172\n"
         "L2 = 20.0\n"
         "N1 = 64\n"
         "N2 = 64\n"
         "[time]\n"
         "T = 1.0\n"
         "dt = 1e-3\n";
}

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  const RunConfig c = parse_config(minimal_text());
  CHECK(c.N1 == 64);
  CHECK(c.T == 1.0);
  CHECK(c.flux_name == "bbm");
  CHECK(c.signal_name == "zero");
  CHECK(c.initial_name == "zero");
  CHECK(c.mode == "rk4");
  CHECK(c.nu1 == 0.0);
  CHECK(c.snapshot_every == 10);
  CHECK(c.picard_tol == 1e-8);
  CHECK(c.n_quad == 65);
  CHECK(c.dealias == false);
  CHECK(c.seed == 12345);
}

TEST_CASE("shipped example config parses to its documented values") {
  std::ifstream in(std::string(GBBM_SOURCE_DIR) + "/configs/example.cfg");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  const RunConfig c = parse_config(ss.str());
  CHECK(c.N1 == 128);
  CHECK(c.N2 == 64);
  CHECK(c.L2 == 20.0);
  CHECK(c.flux_name == "bbm");
  CHECK(c.signal_name == "pulse");
  CHECK(c.initial_name == "gaussian");
  CHECK(c.mode == "rk4");
}

TEST_CASE("missing required keys are named") {
  SUBCASE("grid.L1") {
    std::string text = minimal_text();
    text.erase(text.find("L1 = 12.566370614359172"), 24);
    try {
      parse_config(text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("grid.L1") != std::string::npos);
    }
  }
  SUBCASE("time.dt") {
    const char* text =
        "[grid]\nL1 = 1\nL2 = 1\nN1 = 8\nN2 = 8\n[time]\nT = 1\n";
    try {
      parse_config(text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("time.dt") != std::string::npos);
    }
  }
}

TEST_CASE("unknown keys are rejected with their line number") {
  const std::string text = minimal_text() + "wibble = 3\n";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("time.wibble") != std::string::npos);
    CHECK(msg.find("line 9") != std::string::npos);
  }
}

TEST_CASE("out-of-range values name the key") {
  auto expect_error = [](const std::string& text, const std::string& key) {
    try {
      parse_config(text);
      FAIL("expected ConfigError for ", key);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
  };
  expect_error(
      "[grid]\nL1 = 1\nL2 = 1\nN1 = 9\nN2 = 8\n[time]\nT = 1\ndt = 1e-3\n",
      "grid.N1");
  expect_error(minimal_text() + "dt = 0\n", "time.dt");  // duplicate key
  expect_error(minimal_text() + "nu1 = -1\n", "time.nu1");
  expect_error(minimal_text() + "mode = euler\n", "time.mode");
  expect_error(minimal_text() + "[flux]\nname = cubic\n", "flux.name");
  expect_error(minimal_text() + "[misc]\ndealias = maybe\n", "misc.dealias");
}

TEST_CASE("malformed lines are reported") {
  CHECK_THROWS_AS(parse_config("[grid\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("L1 = 2\n"), ConfigError);  // outside section
  CHECK_THROWS_AS(parse_config("[grid]\nL1\n"), ConfigError);
}

TEST_CASE("serialize-parse round trip is exact") {
  RunConfig c = parse_config(minimal_text());
  c.sig_amp = 0.1234567890123456789;  // exercise 17-digit formatting
  c.T = 1.0 / 3.0;
  c.seed = 9876543210123456789ull;
  c.dealias = true;
  c.mode = "both";
  const RunConfig back = parse_config(serialize_config(c));
  CHECK(back == c);
  const RunConfig back2 = parse_config(serialize_config(back));
  CHECK(back2 == back);
}

TEST_CASE("builders construct the configured families") {
  RunConfig c = parse_config(minimal_text());
  c.flux_name = "linear";
  c.flux_a = 2.0;
  c.flux_b = -1.0;
  const FluxSpec flux = build_flux(c);
  CHECK(flux.phi(1.0)[0] == 2.0);
  CHECK(flux.phi(1.0)[1] == -1.0);

  c.signal_name = "pulse_sum";
  c.sig_amp = 0.1;
  c.sig_amp2 = 0.2;
  CHECK(build_signal(c).terms().size() == 2);

  c.initial_name = "mode";
  c.init_m = 2;
  c.init_j = 3;
  const GridPtr g = build_grid(c);
  const InitialData init = build_initial(c);
  CHECK(init.eval(0.0, g->L2() / 6.0, *g) ==
        doctest::Approx(c.init_amp).epsilon(1e-12));
}
