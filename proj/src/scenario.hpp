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
#ifndef PVL_SCENARIO_HPP
#define PVL_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "io.hpp"

namespace pvl {

/// Batch scenario configuration, parsed from flat `key = value` text with
/// `#` comments. Unknown keys are rejected with a line diagnostic.
struct ScenarioConfig {
  std::string name = "custom";
  std::string claim;
  std::string expect = "none";  // critical | non-critical | none

  int grid_dim = 2;
  int grid_n = 64;
  double horizon = 1.0;
  int nodes = 200;
  double q = 2.0;
  PdeForm form = PdeForm::proof_form;

  std::string source;  // exact | solver | file
  std::string family = "taylor_green";  // + frozen_taylor_green
  FamilyParams params;
  std::string trajectory_path;
  double solver_dt = 1e-3;

  std::vector<std::string> battery_profiles = {"taylor_green", "shear2", "cosy", "mixed", "diag3"};
  double delta = 1e-3;

  bool stochastic_enabled = false;
  EnsembleConfig ensemble;
  double stochastic_delta = 1e-3;
  bool stochastic_crn = true;

  std::string output_dir;  // default out/<name>
  bool output_fields = true;
  double theta_crit_rel = 1e-4;
  double theta_res_rel = 1e-5;
  int threads = 0;

  void validate() const;
};

ScenarioConfig parse_scenario_config(const std::string& text, const std::string& origin);
ScenarioConfig load_scenario_config(const std::string& path);

struct RunResult {
  Verdict deterministic = Verdict::inconclusive;
  std::optional<Verdict> stochastic;
  bool expectation_met = true;  // true when expect == none
  std::string report_path;
  std::string output_dir;
};

/// Execute a scenario: build the trajectory, run the criticality report
/// (and the stochastic one when enabled), and write report.json,
/// series.csv, the trajectory dump and the ensemble summary into the
/// output directory.
RunResult run_scenario(const ScenarioConfig& cfg);

struct BundledScenario {
  std::string name;
  std::string summary;
  std::string config_text;
};

const std::vector<BundledScenario>& bundled_scenarios();
const BundledScenario* find_bundled_scenario(const std::string& name);

}  // namespace pvl

#endif
