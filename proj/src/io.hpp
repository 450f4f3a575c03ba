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
#ifndef PVL_IO_HPP
#define PVL_IO_HPP

#include <string>

#include "stochastic.hpp"
#include "variation.hpp"

namespace pvl {

// Binary field dump: magic "PVL1", u8 dim, u8 n_components,
// u32 little-endian n, then each component row-major as little-endian f64.

void write_field_dump(const std::string& path, const VectorField& u);
void write_field_dump(const std::string& path, const ScalarField& f);

struct FieldDump {
  Grid grid;
  std::vector<ScalarField> components;
};
FieldDump read_field_dump(const std::string& path);

/// CSV export: header row, then one row per grid point with the point
/// coordinates followed by the component values.
void write_field_csv(const std::string& path, const VectorField& u);

// Trajectory serialization: a directory holding `trajectory.manifest`
// (flat key = value text) plus one field dump per node.

struct TrajectoryMeta {
  PdeForm form = PdeForm::proof_form;
  std::string family = "unspecified";
  std::string params;
};

void save_trajectory(const std::string& dir, const Trajectory& traj,
                     const TrajectoryMeta& meta = {});
Trajectory load_trajectory(const std::string& dir, TrajectoryMeta* meta_out = nullptr);

/// Deterministic JSON for the criticality report; the optional stochastic
/// report is embedded under "stochastic".
std::string report_to_json(const VariationReport& rep,
                           const StochasticReport* stoch = nullptr,
                           const std::string& scenario_name = {},
                           const std::string& claim = {});

/// Stand-alone JSON for a stochastic report.
std::string stochastic_report_to_json(const StochasticReport& rep);

/// Per-node CSV series: t, energy integrand ||u||^q / q, raw and projected
/// residual L2 norms (interior nodes).
void write_series_csv(const std::string& path, const Trajectory& traj,
                      const ResidualScan& scan);

/// Ensemble summary CSV: sample, energy, det extrema.
void write_ensemble_csv(const std::string& path, const FlowEnsemble& ens,
                        const McEstimate& energy);

void ensure_directory(const std::string& dir);

}  // namespace pvl

#endif
