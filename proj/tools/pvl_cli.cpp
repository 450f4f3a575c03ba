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

// Batch front-end over the pvl C API. Exit codes of `run`:
//   0  verdicts match the config's `expect` (or expect = none)
//   1  scenario ran but a verdict mismatched
//   2  configuration problem
//   3  numerical failure

#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "pvl.h"

namespace {

int map_exit(pvl_status st) {
  switch (st) {
    case PVL_OK: return 0;
    case PVL_VERDICT_MISMATCH: return 1;
    case PVL_CONFIG_ERROR:
    case PVL_IO_ERROR:
    case PVL_INVALID_ARGUMENT: return 2;
    case PVL_NUMERIC_ERROR: return 3;
  }
  return 3;
}

int fail(pvl_status st) {
  std::fprintf(stderr, "pvl: error: %s\n", pvl_last_error());
  return map_exit(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pvl - variational-principle laboratory for incompressible flows on the torus"};
  app.require_subcommand(1);

  std::string config_path, output_dir, scenario_name, traj_dir, csv_dir;
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (default: PVL_THREADS env)");

  CLI::App* run = app.add_subcommand("run", "run a scenario config file (or bundled name)");
  run->add_option("config", config_path, "config file path or bundled scenario name")
      ->required();
  run->add_option("-o,--output", output_dir, "override output.dir");

  CLI::App* list = app.add_subcommand("list-scenarios", "list the bundled scenarios");

  CLI::App* describe = app.add_subcommand("describe", "describe a bundled scenario");
  describe->add_option("name", scenario_name, "scenario name")->required();

  CLI::App* dump = app.add_subcommand("dump-fields",
                                      "export a serialized trajectory directory as CSV");
  dump->add_option("trajectory-dir", traj_dir, "directory with trajectory.manifest")
      ->required();
  dump->add_option("-o,--output", csv_dir, "CSV output directory (default: <dir>/csv)");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) pvl_set_max_threads(threads);

  if (run->parsed()) {
    char* report = nullptr;
    const pvl_status st = pvl_run_scenario(
        config_path.c_str(), output_dir.empty() ? nullptr : output_dir.c_str(), &report);
    if (st == PVL_OK || st == PVL_VERDICT_MISMATCH) {
      std::printf("report: %s\n", report ? report : "(none)");
      std::printf(st == PVL_OK ? "verdicts match the expectation\n"
                               : "VERDICT MISMATCH (see report)\n");
      pvl_free(report);
      return map_exit(st);
    }
    pvl_free(report);
    return fail(st);
  }

  if (list->parsed()) {
    const int count = pvl_scenario_count();
    for (int i = 0; i < count; ++i) {
      char* name = nullptr;
      if (pvl_scenario_name(i, &name) == PVL_OK) {
        std::printf("%s\n", name);
        pvl_free(name);
      }
    }
    return 0;
  }

  if (describe->parsed()) {
    char* text = nullptr;
    const pvl_status st = pvl_scenario_describe(scenario_name.c_str(), &text);
    if (st != PVL_OK) return fail(st);
    std::printf("%s", text);
    pvl_free(text);
    return 0;
  }

  if (dump->parsed()) {
    const std::string out = csv_dir.empty() ? traj_dir + "/csv" : csv_dir;
    const pvl_status st = pvl_dump_fields(traj_dir.c_str(), out.c_str());
    if (st != PVL_OK) return fail(st);
    std::printf("wrote CSV exports to %s\n", out.c_str());
    return 0;
  }

  return 2;
}
