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

/* pvl: variational-principle laboratory for incompressible flows on the
 * torus. C interface of the shared library: opaque handles + status codes.
 * Strings returned through char** are heap-allocated; release them with
 * pvl_free. Error details for the calling thread: pvl_last_error().
 */
#ifndef PVL_H
#define PVL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pvl_status {
  PVL_OK = 0,
  PVL_VERDICT_MISMATCH = 1, /* scenario ran, but the verdict differs from `expect` */
  PVL_CONFIG_ERROR = 2,     /* malformed configuration or missing input file */
  PVL_NUMERIC_ERROR = 3,    /* CFL violation, blow-up, non-convergence, ... */
  PVL_IO_ERROR = 4,
  PVL_INVALID_ARGUMENT = 5
} pvl_status;

const char* pvl_version(void);

/* Thread-local message describing the most recent failure. */
const char* pvl_last_error(void);

void pvl_free(void* p);

/* Cap the worker count (0 = PVL_THREADS env var / hardware default). */
void pvl_set_max_threads(int n);

/* ---- scenarios --------------------------------------------------------- */

/* Run a scenario config. `path_or_name` is a config file path or the name
 * of a bundled scenario. Optional overrides may be NULL. On success the
 * report JSON path is returned through report_path (if non-NULL). */
pvl_status pvl_run_scenario(const char* path_or_name, const char* output_dir_override,
                            char** report_path);

int pvl_scenario_count(void);
pvl_status pvl_scenario_name(int index, char** name);

/* Long-form description: summary, claim and the full config text. */
pvl_status pvl_scenario_describe(const char* name, char** text);

/* ---- trajectories ------------------------------------------------------ */

typedef struct pvl_trajectory pvl_trajectory;

/* family: constant | taylor_green | shear | frozen_taylor_green.
 * params: comma-separated key=value list (cx, cy, amplitude, base, wave)
 * or NULL for defaults. */
pvl_status pvl_trajectory_exact(const char* family, const char* params, int grid_n,
                                double horizon, int nodes, double q,
                                pvl_trajectory** out);

pvl_status pvl_trajectory_load(const char* dir, pvl_trajectory** out);
pvl_status pvl_trajectory_save(const pvl_trajectory* traj, const char* dir);
void pvl_trajectory_release(pvl_trajectory* traj);

/* Max over interior nodes of ||projected residual||_2 relative to the
 * momentum norm; form: "proof" or "literal". */
pvl_status pvl_trajectory_residual(const pvl_trajectory* traj, const char* form,
                                   double* out);

/* Deterministic criticality report (standard 5-field battery) as JSON. */
pvl_status pvl_verify_criticality(const pvl_trajectory* traj, double delta,
                                  char** report_json);

/* Stochastic criticality report (common random numbers when use_crn != 0). */
pvl_status pvl_verify_stochastic(const pvl_trajectory* traj, int samples, double em_dt,
                                 uint64_t master_seed, int use_crn, char** report_json);

/* ---- field dumps -------------------------------------------------------- */

/* Convert every node dump of a serialized trajectory directory into CSV
 * files under out_dir. */
pvl_status pvl_dump_fields(const char* trajectory_dir, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* PVL_H */
