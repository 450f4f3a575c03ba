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
#include "scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "parallel.hpp"

namespace pvl {

namespace fs = std::filesystem;

namespace {

struct KvEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct KvTree {
  std::map<std::string, KvEntry> entries;
  std::string origin;

  const KvEntry* find(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  std::string get_string(const std::string& key, const std::string& def) {
    const KvEntry* e = find(key);
    return e ? e->value : def;
  }

  double get_double(const std::string& key, double def) {
    const KvEntry* e = find(key);
    if (!e) return def;
    try {
      std::size_t pos = 0;
      const double v = std::stod(e->value, &pos);
      if (pos != e->value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(strprintf("%s:%d: %s: '%s' is not a number", origin.c_str(),
                                  e->line, key.c_str(), e->value.c_str()),
                        e->line, key);
    }
  }

  int get_int(const std::string& key, int def) {
    const double v = get_double(key, def);
    const int i = static_cast<int>(std::llround(v));
    if (std::fabs(v - i) > 1e-12)
      throw ConfigError(strprintf("%s: %s must be an integer", origin.c_str(), key.c_str()),
                        0, key);
    return i;
  }

  bool get_bool(const std::string& key, bool def) {
    const KvEntry* e = find(key);
    if (!e) return def;
    if (e->value == "true" || e->value == "1") return true;
    if (e->value == "false" || e->value == "0") return false;
    throw ConfigError(strprintf("%s:%d: %s: expected true/false", origin.c_str(), e->line,
                                key.c_str()),
                      e->line, key);
  }

  void reject_unknown() const {
    for (const auto& [key, e] : entries) {
      if (!e.used)
        throw ConfigError(strprintf("%s:%d: unknown key '%s'", origin.c_str(), e.line,
                                    key.c_str()),
                          e.line, key);
    }
  }
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  const auto b = s.find_last_not_of(" \t\r");
  return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
}

KvTree parse_kv(const std::string& text, const std::string& origin) {
  KvTree tree;
  tree.origin = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(strprintf("%s:%d: expected 'key = value'", origin.c_str(), lineno),
                        lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(strprintf("%s:%d: empty key or value", origin.c_str(), lineno), lineno);
    if (tree.entries.count(key))
      throw ConfigError(strprintf("%s:%d: duplicate key '%s'", origin.c_str(), lineno,
                                  key.c_str()),
                        lineno, key);
    tree.entries[key] = KvEntry{value, lineno, false};
  }
  return tree;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text, const std::string& origin) {
  KvTree kv = parse_kv(text, origin);
  ScenarioConfig c;
  c.name = kv.get_string("scenario.name", "custom");
  c.claim = kv.get_string("scenario.claim", "");
  c.expect = kv.get_string("expect", "none");
  c.grid_dim = kv.get_int("grid.dim", 2);
  c.grid_n = kv.get_int("grid.n", 64);
  c.horizon = kv.get_double("time.horizon", 1.0);
  c.nodes = kv.get_int("time.nodes", 200);
  c.q = kv.get_double("q", 2.0);
  c.form = pde_form_from_string(kv.get_string("pde.form", "proof"));
  c.source = kv.get_string("trajectory.source", "");
  c.family = kv.get_string("trajectory.family", "taylor_green");
  c.params.c = {kv.get_double("trajectory.cx", 1.0), kv.get_double("trajectory.cy", 0.0),
                kv.get_double("trajectory.cz", 0.0)};
  c.params.amplitude = kv.get_double("trajectory.amplitude", 1.0);
  c.params.base = kv.get_double("trajectory.base", 1.0);
  c.params.wave = kv.get_double("trajectory.wave", 0.5);
  c.trajectory_path = kv.get_string("trajectory.path", "");
  c.solver_dt = kv.get_double("solver.dt", 1e-3);
  c.battery_profiles = split_list(kv.get_string(
      "battery.profiles", "taylor_green,shear2,cosy,mixed,diag3"));
  c.delta = kv.get_double("battery.delta", 1e-3);
  c.stochastic_enabled = kv.get_bool("stochastic.enabled", false);
  c.ensemble.samples = kv.get_int("stochastic.samples", 64);
  c.ensemble.dt = kv.get_double("stochastic.dt", 1e-3);
  c.ensemble.particles_per_axis = kv.get_int("stochastic.particles", 32);
  c.ensemble.snapshot_stride = kv.get_int("stochastic.stride", 4);
  c.ensemble.master_seed = static_cast<std::uint64_t>(kv.get_double("stochastic.seed", 1.0));
  c.stochastic_delta = kv.get_double("stochastic.delta", 1e-3);
  c.stochastic_crn = kv.get_bool("stochastic.crn", true);
  c.output_dir = kv.get_string("output.dir", "");
  c.output_fields = kv.get_bool("output.fields", true);
  c.theta_crit_rel = kv.get_double("tolerance.crit", 1e-4);
  c.theta_res_rel = kv.get_double("tolerance.residual", 1e-5);
  c.threads = kv.get_int("threads", 0);
  kv.reject_unknown();
  if (c.output_dir.empty()) c.output_dir = "out/" + c.name;

  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(strprintf("%s: %s", origin.c_str(), e.what()));
  }
  return c;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(strprintf("cannot open config '%s'", path.c_str()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_config(ss.str(), fs::path(path).filename().string());
}

void ScenarioConfig::validate() const {
  Grid g(grid_dim, grid_n);  // validates resolution
  (void)g;
  if (expect != "none" && expect != "critical" && expect != "non-critical")
    throw ConfigError(strprintf("expect must be critical, non-critical or none, got '%s'",
                                expect.c_str()));
  if (!(horizon > 0.0)) throw ConfigError("time.horizon must be positive");
  if (nodes < 8) throw ConfigError("time.nodes must be at least 8");
  if (!(q >= 2.0)) throw ConfigError("verification scenarios require q >= 2");
  if (source != "exact" && source != "solver" && source != "file")
    throw ConfigError(strprintf("trajectory.source must be exact, solver or file, got '%s'",
                                source.c_str()));
  if (source == "file" && trajectory_path.empty())
    throw ConfigError("trajectory.path is required with trajectory.source = file");
  if (source == "file" && !fs::exists(trajectory_path))
    throw ConfigError(strprintf("trajectory.path '%s' does not exist", trajectory_path.c_str()));
  if (battery_profiles.empty()) throw ConfigError("battery.profiles must not be empty");
  if (!(delta >= 1e-4 && delta <= 1e-2))
    throw ConfigError("battery.delta must lie in [1e-4, 1e-2]");
  if (stochastic_enabled) {
    if (ensemble.samples < 2) throw ConfigError("stochastic.samples must be at least 2");
    if (!(ensemble.dt > 0.0)) throw ConfigError("stochastic.dt must be positive");
    if (ensemble.particles_per_axis < 2)
      throw ConfigError("stochastic.particles must be at least 2");
    if (nodes % ensemble.snapshot_stride != 0)
      throw ConfigError("stochastic.stride must divide time.nodes");
  }
}

namespace {

Trajectory build_trajectory(const ScenarioConfig& cfg, TrajectoryMeta& meta) {
  const Grid grid(cfg.grid_dim, cfg.grid_n);
  meta.form = cfg.form;
  meta.family = cfg.family;
  if (cfg.source == "file") {
    meta.family = "file:" + cfg.trajectory_path;
    return load_trajectory(cfg.trajectory_path);
  }
  if (cfg.source == "solver") {
    if (cfg.q != 2.0) throw ConfigError("the time-stepping solver covers q = 2 only");
    Trajectory init = (cfg.family == "frozen_taylor_green")
                          ? frozen_taylor_green(cfg.params, grid, cfg.horizon, cfg.nodes)
                          : exact_family(family_from_string(cfg.family), cfg.params, cfg.q,
                                         grid, cfg.horizon, cfg.nodes);
    meta.family = "solver:" + cfg.family;
    return solve_ns(init.nodes.front(), cfg.horizon, cfg.solver_dt, cfg.nodes);
  }
  if (cfg.family == "frozen_taylor_green") {
    if (cfg.q != 2.0) throw ConfigError("frozen_taylor_green uses q = 2");
    return frozen_taylor_green(cfg.params, grid, cfg.horizon, cfg.nodes);
  }
  return exact_family(family_from_string(cfg.family), cfg.params, cfg.q, grid,
                      cfg.horizon, cfg.nodes);
}

Verdict parse_expect(const std::string& s) {
  return s == "critical" ? Verdict::critical : Verdict::non_critical;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  if (cfg.threads > 0) set_max_threads(cfg.threads);
  const Grid grid(cfg.grid_dim, cfg.grid_n);

  TrajectoryMeta meta;
  Trajectory traj = build_trajectory(cfg, meta);
  auto traj_ptr = std::make_shared<const Trajectory>(std::move(traj));

  std::vector<TestVectorField> battery;
  for (const auto& prof : cfg.battery_profiles) {
    TimeEnvelope env = (battery.size() % 2 == 0) ? TimeEnvelope::basic(cfg.horizon)
                                                 : TimeEnvelope::tilted(cfg.horizon);
    battery.emplace_back(battery_profile(grid, prof), env, prof);
  }

  CriticalityOptions copts;
  copts.delta = cfg.delta;
  copts.theta_crit_rel = cfg.theta_crit_rel;
  copts.theta_res_rel = cfg.theta_res_rel;
  copts.form = cfg.form;
  VariationReport rep = criticality_report(*traj_ptr, battery, copts);

  ensure_directory(cfg.output_dir);
  const fs::path out(cfg.output_dir);

  ResidualScan scan = residual_scan(*traj_ptr, cfg.form);
  write_series_csv((out / "series.csv").string(), *traj_ptr, scan);

  std::optional<StochasticReport> stoch;
  if (cfg.stochastic_enabled) {
    NoiseModel noise;
    noise.dim = grid.dim;
    StochasticOptions sopts;
    sopts.delta = cfg.stochastic_delta;
    sopts.theta_crit_rel = cfg.theta_crit_rel;
    sopts.common_random_numbers = cfg.stochastic_crn;
    FlowEnsemble ens = simulate_flow(traj_ptr, noise, cfg.ensemble);
    stoch = stochastic_criticality(ens, noise, battery, sopts);
    write_ensemble_csv((out / "ensemble.csv").string(), ens, mc_energy(ens, cfg.q));
  }

  if (cfg.output_fields) save_trajectory((out / "trajectory").string(), *traj_ptr, meta);

  RunResult result;
  result.output_dir = cfg.output_dir;
  result.report_path = (out / "report.json").string();
  {
    std::ofstream rp(result.report_path, std::ios::trunc);
    if (!rp) throw IoError(strprintf("cannot write '%s'", result.report_path.c_str()));
    rp << report_to_json(rep, stoch ? &*stoch : nullptr, cfg.name, cfg.claim);
  }

  result.deterministic = rep.verdict;
  if (stoch) result.stochastic = stoch->verdict;
  if (cfg.expect != "none") {
    const Verdict want = parse_expect(cfg.expect);
    result.expectation_met = (rep.verdict == want);
    if (stoch) result.expectation_met = result.expectation_met && (stoch->verdict == want);
  }
  return result;
}

namespace {

std::vector<BundledScenario> make_bundled() {
  std::vector<BundledScenario> list;

  list.push_back({"taylor-green-q2",
                  "Decaying Taylor-Green vortex, q = 2: a solution of the momentum-form "
                  "equation, so the flow energy must be stationary (forward direction of "
                  "the criticality equivalence).",
                  R"(scenario.name = taylor-green-q2
scenario.claim = criticality equivalence, forward direction: the decaying Taylor-Green vortex solves the q = 2 momentum-form equation, so the Gateaux derivative of the flow energy vanishes over the whole battery
expect = critical
grid.n = 64
time.nodes = 200
q = 2
pde.form = proof
trajectory.source = exact
trajectory.family = taylor_green
)"});

  list.push_back({"frozen-tg-noncritical",
                  "Time-frozen Taylor-Green profile: not a solution; the energy derivative "
                  "must be visibly nonzero (converse direction of the equivalence).",
                  R"(scenario.name = frozen-tg-noncritical
scenario.claim = criticality equivalence, converse direction: freezing the Taylor-Green profile in time leaves a nonzero projected residual, so the energy derivative must be nonzero for some battery field
expect = non-critical
grid.n = 64
time.nodes = 200
q = 2
pde.form = proof
trajectory.source = exact
trajectory.family = frozen_taylor_green
)"});

  list.push_back({"shear-q3",
                  "Shear flow with momentum solving the heat equation, q = 3: an exact "
                  "solution of the momentum-form equation beyond the Navier-Stokes case.",
                  R"(scenario.name = shear-q3
scenario.claim = the q = 3 shear flow (momentum = 1 + 0.5 e^{-t/2} sin y solves the heat equation) satisfies the momentum-form equation, so it is a critical point of the q = 3 flow energy
expect = critical
grid.n = 64
time.nodes = 200
q = 3
pde.form = proof
trajectory.source = exact
trajectory.family = shear
trajectory.base = 1
trajectory.wave = 0.5
)"});

  list.push_back({"shear-q2p5",
                  "Shear flow at the non-integer exponent q = 2.5.",
                  R"(scenario.name = shear-q2p5
scenario.claim = the shear family stays an exact critical point at the non-integer exponent q = 2.5
expect = critical
grid.n = 64
time.nodes = 200
q = 2.5
pde.form = proof
trajectory.source = exact
trajectory.family = shear
)"});

  list.push_back({"shear-q4",
                  "Shear flow at q = 4.",
                  R"(scenario.name = shear-q4
scenario.claim = the shear family stays an exact critical point at q = 4
expect = critical
grid.n = 64
time.nodes = 200
q = 4
pde.form = proof
trajectory.source = exact
trajectory.family = shear
)"});

  list.push_back({"constant-q5",
                  "Constant field, q = 5: all derivatives vanish, trivially critical.",
                  R"(scenario.name = constant-q5
scenario.claim = constant fields solve the momentum-form equation for every q, so they are critical points of the flow energy
expect = critical
grid.n = 64
time.nodes = 200
q = 5
pde.form = proof
trajectory.source = exact
trajectory.family = constant
trajectory.cx = 1
trajectory.cy = 0
)"});

  list.push_back({"ns-solve-taylor-green",
                  "Run the q = 2 pseudo-spectral solver from the Taylor-Green profile and "
                  "verify the computed trajectory is critical.",
                  R"(scenario.name = ns-solve-taylor-green
scenario.claim = a numerically integrated q = 2 trajectory (Crank-Nicolson / Adams-Bashforth pseudo-spectral solver) is a critical point of the flow energy within the solver's accuracy
expect = critical
grid.n = 64
time.nodes = 200
q = 2
pde.form = proof
trajectory.source = solver
trajectory.family = taylor_green
solver.dt = 1e-3
)"});

  list.push_back({"taylor-green-q2-stochastic",
                  "Stochastic criticality of the Taylor-Green solution: the Monte Carlo "
                  "energy of the incompressible diffusion flow is stationary (common "
                  "random numbers).",
                  R"(scenario.name = taylor-green-q2-stochastic
scenario.claim = stochastic criticality: the incompressible diffusion flow driven by the Taylor-Green solution is a critical point of the Monte Carlo flow energy, mirroring the deterministic verdict
expect = critical
grid.n = 64
time.nodes = 200
q = 2
pde.form = proof
trajectory.source = exact
trajectory.family = taylor_green
stochastic.enabled = true
stochastic.samples = 64
stochastic.dt = 1e-3
stochastic.seed = 1
)"});

  list.push_back({"frozen-tg-stochastic",
                  "Stochastic converse: the frozen Taylor-Green non-solution fails "
                  "stochastic criticality as well.",
                  R"(scenario.name = frozen-tg-stochastic
scenario.claim = stochastic criticality, converse direction: the frozen Taylor-Green non-solution has a nonzero Monte Carlo energy derivative far outside the error bars
expect = non-critical
grid.n = 64
time.nodes = 200
q = 2
pde.form = proof
trajectory.source = exact
trajectory.family = frozen_taylor_green
stochastic.enabled = true
stochastic.samples = 64
stochastic.dt = 1e-3
stochastic.seed = 1
)"});

  return list;
}

}  // namespace

const std::vector<BundledScenario>& bundled_scenarios() {
  static const std::vector<BundledScenario> list = make_bundled();
  return list;
}

const BundledScenario* find_bundled_scenario(const std::string& name) {
  for (const auto& s : bundled_scenarios())
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace pvl
