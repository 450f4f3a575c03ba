/*
 * Copyright 2026 The PVL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "scenario.hpp"

using namespace pvl;
namespace fs = std::filesystem;

namespace {

const char* kQuickConfig = R"(
scenario.name = quick
expect = critical
grid.n = 16
time.nodes = 16
q = 3
trajectory.source = exact
trajectory.family = constant
trajectory.cx = 1.0
trajectory.cy = 0.5
output.fields = true
)";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pvl-scn-" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("config: defaults and key parsing") {
  ScenarioConfig c = parse_scenario_config(kQuickConfig, "quick.cfg");
  CHECK(c.name == "quick");
  CHECK(c.grid_n == 16);
  CHECK(c.nodes == 16);
  CHECK(c.q == 3.0);
  CHECK(c.form == PdeForm::proof_form);
  CHECK(c.battery_profiles.size() == 5);
  CHECK(c.delta == 1e-3);
  CHECK(c.output_dir == "out/quick");
  CHECK_FALSE(c.stochastic_enabled);
}

TEST_CASE("config: diagnostics carry line and key") {
  SUBCASE("unknown key") {
    try {
      (void)parse_scenario_config("q = 2\ntrajectory.source = exact\nbogus.key = 1\n", "x.cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line == 3);
      CHECK(e.key == "bogus.key");
      CHECK(std::string(e.what()).find("x.cfg:3") != std::string::npos);
    }
  }
  SUBCASE("bad number") {
    try {
      (void)parse_scenario_config("q = two\ntrajectory.source = exact\n", "x.cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key == "q");
    }
  }
  SUBCASE("missing equals sign") {
    CHECK_THROWS_AS((void)parse_scenario_config("just words\n", "x.cfg"), ConfigError);
  }
  SUBCASE("duplicate key") {
    CHECK_THROWS_AS((void)parse_scenario_config("q = 2\nq = 3\ntrajectory.source = exact\n",
                                                "x.cfg"),
                    ConfigError);
  }
  SUBCASE("missing source") {
    CHECK_THROWS_AS((void)parse_scenario_config("q = 2\n", "x.cfg"), ConfigError);
  }
  SUBCASE("q below 2") {
    CHECK_THROWS_AS(
        (void)parse_scenario_config("q = 1.5\ntrajectory.source = exact\n", "x.cfg"),
        ConfigError);
  }
  SUBCASE("missing trajectory file") {
    CHECK_THROWS_AS((void)parse_scenario_config(
                        "q = 2\ntrajectory.source = file\ntrajectory.path = /no/such\n",
                        "x.cfg"),
                    ConfigError);
  }
}

TEST_CASE("run_scenario: quick constant scenario end to end") {
  TempDir tmp;
  ScenarioConfig cfg = parse_scenario_config(kQuickConfig, "quick.cfg");
  cfg.output_dir = (tmp.path / "out").string();
  RunResult r = run_scenario(cfg);
  CHECK(r.deterministic == Verdict::critical);
  CHECK(r.expectation_met);
  CHECK(fs::exists(r.report_path));
  CHECK(fs::exists(tmp.path / "out" / "series.csv"));
  CHECK(fs::exists(tmp.path / "out" / "trajectory" / "trajectory.manifest"));

  const std::string report1 = slurp(r.report_path);
  CHECK(report1.find("\"verdict\": \"critical\"") != std::string::npos);

  // bit-for-bit reproducibility of a re-run
  RunResult r2 = run_scenario(cfg);
  CHECK(slurp(r2.report_path) == report1);
}

TEST_CASE("run_scenario: expectation mismatch is reported, not thrown") {
  TempDir tmp;
  ScenarioConfig cfg = parse_scenario_config(kQuickConfig, "quick.cfg");
  cfg.expect = "non-critical";
  cfg.output_dir = (tmp.path / "out").string();
  RunResult r = run_scenario(cfg);
  CHECK(r.deterministic == Verdict::critical);
  CHECK_FALSE(r.expectation_met);
}

TEST_CASE("run_scenario: trajectory file round trip through source=file") {
  TempDir tmp;
  ScenarioConfig cfg = parse_scenario_config(kQuickConfig, "quick.cfg");
  cfg.output_dir = (tmp.path / "out").string();
  (void)run_scenario(cfg);

  ScenarioConfig cfg2 = cfg;
  cfg2.source = "file";
  cfg2.trajectory_path = (tmp.path / "out" / "trajectory").string();
  cfg2.output_dir = (tmp.path / "out2").string();
  RunResult r2 = run_scenario(cfg2);
  CHECK(r2.deterministic == Verdict::critical);
}

TEST_CASE("run_scenario: stochastic block") {
  TempDir tmp;
  ScenarioConfig cfg = parse_scenario_config(kQuickConfig, "quick.cfg");
  cfg.output_dir = (tmp.path / "out").string();
  cfg.stochastic_enabled = true;
  cfg.ensemble.samples = 4;
  cfg.ensemble.particles_per_axis = 8;
  cfg.ensemble.dt = 1.0 / 32.0;
  cfg.ensemble.snapshot_stride = 4;
  RunResult r = run_scenario(cfg);
  CHECK(r.stochastic.has_value());
  CHECK(*r.stochastic == Verdict::critical);
  CHECK(r.expectation_met);
  CHECK(fs::exists(tmp.path / "out" / "ensemble.csv"));
  const std::string report = slurp(r.report_path);
  CHECK(report.find("\"stochastic\"") != std::string::npos);
  CHECK(report.find("\"energy_mc\"") != std::string::npos);
}

TEST_CASE("bundled scenarios: at least six, all parseable, all described") {
  const auto& list = bundled_scenarios();
  CHECK(list.size() >= 6);
  for (const auto& s : list) {
    CAPTURE(s.name);
    CHECK_FALSE(s.summary.empty());
    ScenarioConfig c = parse_scenario_config(s.config_text, s.name);
    CHECK(c.name == s.name);
    CHECK_FALSE(c.claim.empty());  // every scenario names the claim it exercises
    CHECK(c.expect != "none");
  }
  CHECK(find_bundled_scenario("shear-q3") != nullptr);
  CHECK(find_bundled_scenario("nope") == nullptr);
}
