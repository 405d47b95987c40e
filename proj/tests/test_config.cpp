#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "d2dcoex/config.hpp"
#include "d2dcoex/errors.hpp"
#include "test_util.hpp"

using namespace d2dcoex;
using Catch::Approx;

TEST_CASE("defaults are the macro-cell parameter set", "[config]") {
  const ScenarioConfig c;
  REQUIRE_NOTHROW(c.validate());
  REQUIRE(c.cell_radius == 250.0);
  REQUIRE(c.carrier_freq == 700e6);
  REQUIRE(c.subcarrier_spacing == 15e3);
  REQUIRE(c.cluster_radius_min == 50.0);
  REQUIRE(c.cluster_radius_max == 100.0);
  REQUIRE(c.cu_min_sinr_linear() == Approx(10.0));
  REQUIRE(c.max_tx_power_w() == Approx(0.251188643150958));
  REQUIRE(c.noise_per_subcarrier_w() == Approx(1.99526231496888e-16));
  REQUIRE(dbm_to_watt(30.0) == Approx(1.0));
  REQUIRE(db_to_linear(-3.0) == Approx(0.501187233627272));
}

TEST_CASE("the shipped config file matches the built-in defaults", "[config]") {
  const ScenarioConfig shipped = load_config(std::string(D2DCOEX_SOURCE_DIR) + "/data/table_ii.cfg");
  ScenarioConfig defaults;
  defaults.table_dir = shipped.table_dir;
  REQUIRE(format_config(shipped) == format_config(defaults));
  REQUIRE(shipped.table_dir);
  REQUIRE(std::filesystem::exists(*shipped.table_dir / "fbmc_fbmc.csv"));
}

TEST_CASE("format and parse round trip", "[config]") {
  ScenarioConfig c;
  c.layout = Layout::NonClustered;
  c.cluster_radius_fixed = 70.0;
  c.cluster_distance_fixed = 123.25;
  c.cp_ratio = 0.1;
  c.seed = 99;
  c.table_method = TableMethod::Psd;
  const ScenarioConfig d = parse_config(format_config(c));
  REQUIRE(format_config(d) == format_config(c));
  REQUIRE(d.layout == Layout::NonClustered);
  REQUIRE(*d.cluster_distance_fixed == 123.25);
}

TEST_CASE("parse errors carry line and column", "[config]") {
  const std::string text = "# comment\nnum_rbs = 25\n\n  iterations =   ten\n";
  try {
    parse_config(text, "x.cfg");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.line() == 4);
    REQUIRE(e.column() == 18);
  }
  try {
    parse_config("seed = 1\ncolour = blue\n", "x.cfg");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    REQUIRE(e.line() == 2);
    REQUIRE(e.column() == 1);
  }
  REQUIRE_THROWS_AS(parse_config("seed = 1\nseed = 2\n"), ParseError);
  REQUIRE_THROWS_AS(parse_config("seed 1\n"), ParseError);
  REQUIRE_THROWS_AS(parse_config("layout = ring\n"), ParseError);
  REQUIRE(parse_config("iterations = 5 # trailing\n").iterations == 5);
}

TEST_CASE("invariants are enforced by validate", "[config]") {
  ScenarioConfig c;
  c.num_d2d_pairs = 26;
  REQUIRE_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("num_d2d_pairs"));
  c = {};
  c.num_cus = 15;
  REQUIRE_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.cluster_radius_min = 120;
  REQUIRE_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.cluster_radius_fixed = 251;
  REQUIRE_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.cluster_radius_fixed = 70;
  c.cluster_distance_fixed = 180;
  REQUIRE_NOTHROW(c.validate());
  c.cluster_distance_fixed = 200;
  REQUIRE_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.cp_ratio = 0.3;
  REQUIRE_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("relative table_dir resolves against the config file", "[config]") {
  TempDir dir;
  std::filesystem::create_directories(dir / "sub");
  std::ofstream(dir / "sub" / "c.cfg") << "table_dir = tables\n";
  const ScenarioConfig c = load_config(dir / "sub" / "c.cfg");
  REQUIRE(*c.table_dir == dir / "sub" / "tables");
  REQUIRE_THROWS_AS(load_config(dir / "nope.cfg"), UnreadableFile);
}
