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
#include "pvl.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <sstream>

#include "io.hpp"
#include "parallel.hpp"
#include "scenario.hpp"

using namespace pvl;

extern "C" {

struct pvl_trajectory {
  std::shared_ptr<const Trajectory> rep;
  TrajectoryMeta meta;
};

}  // extern "C"

namespace {

thread_local std::string t_last_error;

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pvl_status to_status(const std::exception& e) {
  t_last_error = e.what();
  if (dynamic_cast<const ConfigError*>(&e)) return PVL_CONFIG_ERROR;
  if (dynamic_cast<const InvalidArgument*>(&e)) return PVL_INVALID_ARGUMENT;
  if (dynamic_cast<const IoError*>(&e)) return PVL_IO_ERROR;
  if (dynamic_cast<const NumericError*>(&e)) return PVL_NUMERIC_ERROR;
  return PVL_NUMERIC_ERROR;
}

template <class Fn>
pvl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return to_status(e);
  } catch (...) {
    t_last_error = "unknown error";
    return PVL_NUMERIC_ERROR;
  }
}

FamilyParams parse_params(const char* params) {
  FamilyParams p;
  if (!params || !*params) return p;
  std::istringstream in(params);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(strprintf("bad family parameter '%s'", item.c_str()));
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw InvalidArgument(strprintf("bad value in family parameter '%s'", item.c_str()));
    }
    if (key == "cx") p.c[0] = value;
    else if (key == "cy") p.c[1] = value;
    else if (key == "cz") p.c[2] = value;
    else if (key == "amplitude") p.amplitude = value;
    else if (key == "base") p.base = value;
    else if (key == "wave") p.wave = value;
    else throw InvalidArgument(strprintf("unknown family parameter '%s'", key.c_str()));
  }
  return p;
}

}  // namespace

extern "C" {

const char* pvl_version(void) { return "1.0.0"; }

const char* pvl_last_error(void) { return t_last_error.c_str(); }

void pvl_free(void* p) { std::free(p); }

void pvl_set_max_threads(int n) { set_max_threads(n); }

pvl_status pvl_run_scenario(const char* path_or_name, const char* output_dir_override,
                            char** report_path) {
  return guarded([&]() -> pvl_status {
    if (!path_or_name) throw InvalidArgument("pvl_run_scenario: null scenario");
    ScenarioConfig cfg;
    if (std::filesystem::exists(path_or_name)) {
      cfg = load_scenario_config(path_or_name);
    } else if (const BundledScenario* b = find_bundled_scenario(path_or_name)) {
      cfg = parse_scenario_config(b->config_text, b->name);
    } else {
      throw ConfigError(strprintf("'%s' is neither a config file nor a bundled scenario",
                                  path_or_name));
    }
    if (output_dir_override && *output_dir_override) cfg.output_dir = output_dir_override;
    RunResult r = run_scenario(cfg);
    if (report_path) *report_path = copy_string(r.report_path);
    return r.expectation_met ? PVL_OK : PVL_VERDICT_MISMATCH;
  });
}

int pvl_scenario_count(void) { return static_cast<int>(bundled_scenarios().size()); }

pvl_status pvl_scenario_name(int index, char** name) {
  return guarded([&]() -> pvl_status {
    const auto& list = bundled_scenarios();
    if (index < 0 || index >= static_cast<int>(list.size()))
      throw InvalidArgument("scenario index out of range");
    if (!name) throw InvalidArgument("null output pointer");
    *name = copy_string(list[index].name);
    return PVL_OK;
  });
}

pvl_status pvl_scenario_describe(const char* name, char** text) {
  return guarded([&]() -> pvl_status {
    if (!name || !text) throw InvalidArgument("null argument");
    const BundledScenario* b = find_bundled_scenario(name);
    if (!b) throw InvalidArgument(strprintf("unknown scenario '%s'", name));
    std::ostringstream out;
    out << b->name << "\n" << b->summary << "\n\nconfig:\n" << b->config_text;
    *text = copy_string(out.str());
    return PVL_OK;
  });
}

pvl_status pvl_trajectory_exact(const char* family, const char* params, int grid_n,
                                double horizon, int nodes, double q,
                                pvl_trajectory** out) {
  return guarded([&]() -> pvl_status {
    if (!family || !out) throw InvalidArgument("null argument");
    const Grid grid(2, grid_n);
    const FamilyParams p = parse_params(params);
    Trajectory traj;
    if (std::string(family) == "frozen_taylor_green") {
      if (q != 2.0) throw InvalidArgument("frozen_taylor_green uses q = 2");
      traj = frozen_taylor_green(p, grid, horizon, nodes);
    } else {
      traj = exact_family(family_from_string(family), p, q, grid, horizon, nodes);
    }
    auto* h = new pvl_trajectory;
    h->rep = std::make_shared<const Trajectory>(std::move(traj));
    h->meta.family = family;
    *out = h;
    return PVL_OK;
  });
}

pvl_status pvl_trajectory_load(const char* dir, pvl_trajectory** out) {
  return guarded([&]() -> pvl_status {
    if (!dir || !out) throw InvalidArgument("null argument");
    auto* h = new pvl_trajectory;
    TrajectoryMeta meta;
    h->rep = std::make_shared<const Trajectory>(load_trajectory(dir, &meta));
    h->meta = meta;
    *out = h;
    return PVL_OK;
  });
}

pvl_status pvl_trajectory_save(const pvl_trajectory* traj, const char* dir) {
  return guarded([&]() -> pvl_status {
    if (!traj || !dir) throw InvalidArgument("null argument");
    save_trajectory(dir, *traj->rep, traj->meta);
    return PVL_OK;
  });
}

void pvl_trajectory_release(pvl_trajectory* traj) { delete traj; }

pvl_status pvl_trajectory_residual(const pvl_trajectory* traj, const char* form,
                                   double* out) {
  return guarded([&]() -> pvl_status {
    if (!traj || !out) throw InvalidArgument("null argument");
    const PdeForm f = pde_form_from_string(form ? form : "proof");
    *out = residual_scan(*traj->rep, f).max_projected_rel;
    return PVL_OK;
  });
}

pvl_status pvl_verify_criticality(const pvl_trajectory* traj, double delta,
                                  char** report_json) {
  return guarded([&]() -> pvl_status {
    if (!traj || !report_json) throw InvalidArgument("null argument");
    CriticalityOptions opts;
    if (delta > 0.0) opts.delta = delta;
    const auto battery = standard_battery(traj->rep->grid(), traj->rep->T);
    VariationReport rep = criticality_report(*traj->rep, battery, opts);
    *report_json = copy_string(report_to_json(rep));
    return PVL_OK;
  });
}

pvl_status pvl_verify_stochastic(const pvl_trajectory* traj, int samples, double em_dt,
                                 uint64_t master_seed, int use_crn, char** report_json) {
  return guarded([&]() -> pvl_status {
    if (!traj || !report_json) throw InvalidArgument("null argument");
    NoiseModel noise;
    noise.dim = traj->rep->grid().dim;
    EnsembleConfig cfg;
    if (samples > 0) cfg.samples = samples;
    if (em_dt > 0.0) cfg.dt = em_dt;
    cfg.master_seed = master_seed;
    const int K = traj->rep->K();
    while (cfg.snapshot_stride > 1 && K % cfg.snapshot_stride != 0) --cfg.snapshot_stride;
    StochasticOptions sopts;
    sopts.common_random_numbers = use_crn != 0;
    const auto battery = standard_battery(traj->rep->grid(), traj->rep->T);
    StochasticReport rep = stochastic_criticality(traj->rep, noise, battery, cfg, sopts);
    *report_json = copy_string(stochastic_report_to_json(rep));
    return PVL_OK;
  });
}

pvl_status pvl_dump_fields(const char* trajectory_dir, const char* out_dir) {
  return guarded([&]() -> pvl_status {
    if (!trajectory_dir || !out_dir) throw InvalidArgument("null argument");
    Trajectory traj = load_trajectory(trajectory_dir);
    ensure_directory(out_dir);
    for (int k = 0; k <= traj.K(); ++k) {
      char name[32];
      std::snprintf(name, sizeof(name), "node_%04d.csv", k);
      write_field_csv((std::filesystem::path(out_dir) / name).string(), traj.nodes[k]);
    }
    return PVL_OK;
  });
}

}  // extern "C"
