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
#ifndef PVL_STOCHASTIC_HPP
#define PVL_STOCHASTIC_HPP

#include <memory>

#include "variation.hpp"

namespace pvl {

/// Noise of the incompressible diffusion flow. Only the constant identity
/// sigma is implemented: one shared N-dimensional Brownian path per sample
/// drives every particle, so sigma sigma* = id and the flow map stays a
/// volume-preserving diffeomorphism for divergence-free drift.
struct NoiseModel {
  enum class Kind { constant_identity };
  Kind kind = Kind::constant_identity;
  int dim = 2;
};

struct EnsembleConfig {
  int samples = 64;
  double dt = 1e-3;           // Euler-Maruyama step; must divide the node spacing
  int particles_per_axis = 32;
  int snapshot_stride = 4;    // trajectory nodes between stored snapshots
  std::uint64_t master_seed = 1;
};

/// Monte Carlo ensemble of flow paths: particle positions at snapshot
/// nodes, per-sample det-Jacobian extrema over every step, and the node
/// evaluators of the driving trajectory. Per-sample Brownian streams are
/// derived from the master seed by counter, so the ensemble is bitwise
/// reproducible independent of worker count.
class FlowEnsemble {
 public:
  std::shared_ptr<const Trajectory> traj;
  EnsembleConfig cfg;
  std::vector<int> snapshot_nodes;                 // trajectory node indices
  std::vector<double> initial_points;              // P * dim lattice coordinates
  // positions[s][snap][p*dim + d], wrapped to [0, 2pi)
  std::vector<std::vector<std::vector<double>>> positions;
  std::vector<double> det_min;                     // per sample
  std::vector<double> det_max;
  std::vector<std::shared_ptr<const SpectralEvaluator>> node_eval;  // per trajectory node

  int particle_count() const { return static_cast<int>(initial_points.size()) / dim(); }
  int dim() const { return traj->grid().dim; }
  int snapshots() const { return static_cast<int>(snapshot_nodes.size()); }
  double snapshot_dt() const { return traj->dt() * cfg.snapshot_stride; }
};

/// Simulate dg = u_t(g) dt + dW (shared path per sample) by Euler-Maruyama
/// with the drift spectrally interpolated at the particles and linear
/// blending between trajectory nodes; Jacobians advance by the exponential
/// (volume-exact) update of d(grad g) = grad u(g) grad g dt.
FlowEnsemble simulate_flow(std::shared_ptr<const Trajectory> traj, const NoiseModel& noise,
                           const EnsembleConfig& cfg);

/// simulate_flow with a seed branch tag; branch 0 is the base ensemble,
/// nonzero branches give decorrelated streams (independent-seed estimators).
FlowEnsemble simulate_flow_tagged(std::shared_ptr<const Trajectory> traj,
                                  const NoiseModel& noise, const EnsembleConfig& cfg,
                                  int branch);

/// Drift at the stored particles of one sample/snapshot: u_t evaluated by
/// spectral interpolation at the positions (the drift by definition).
std::vector<double> drift_field(const FlowEnsemble& ens, int sample, int snapshot);

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::vector<double> per_sample;
};

/// (1/q) E[ int_0^T int ||Dg_t(x)||^q dx dt ]: equal-weight particle mean,
/// Simpson over snapshots, sample mean +- stderr.
McEstimate mc_energy(const FlowEnsemble& ens, double q);

/// Same estimator for the perturbed flow e_t(eps v) o g_t; the drift of the
/// composition is the composed drift in `pre` mode evaluated at the
/// particles (no inversion needed: the particles sample the torus uniformly).
McEstimate mc_energy_perturbed(const FlowEnsemble& ens, const TestVectorField& v,
                               double eps, double q);

struct StochasticFieldResult {
  std::string profile;
  std::string envelope;
  double derivative = 0.0;
  double stderr_ = 0.0;
};

struct StochasticReport {
  double q = 2.0;
  double delta = 1e-3;
  bool common_random_numbers = true;
  std::uint64_t master_seed = 1;
  int samples = 0;
  double energy_mc = 0.0;
  double energy_mc_stderr = 0.0;
  double theta_crit = 0.0;
  double det_defect_max = 0.0;     // max over samples of max |det - 1|
  std::vector<StochasticFieldResult> fields;
  Verdict verdict = Verdict::inconclusive;
};

struct StochasticOptions {
  double delta = 1e-3;
  double theta_crit_rel = 1e-4;
  bool common_random_numbers = true;  // same paths at +-delta; off = independent seeds
};

/// Central-difference derivative of the perturbed Monte Carlo energy for
/// every battery field. With common random numbers the +-delta estimates
/// share each sample's Brownian path, so the noise cancels in the
/// difference. Verdict: critical iff every |derivative| <= theta_crit with
/// 3 stderr <= theta_crit; non-critical iff some field clears both bars;
/// otherwise inconclusive (error bars too wide).
StochasticReport stochastic_criticality(std::shared_ptr<const Trajectory> traj,
                                        const NoiseModel& noise,
                                        const std::vector<TestVectorField>& battery,
                                        const EnsembleConfig& cfg,
                                        const StochasticOptions& opts = {});

/// Same, reusing an already simulated base ensemble (the independent-seed
/// mode still re-simulates its two decorrelated branches).
StochasticReport stochastic_criticality(const FlowEnsemble& base, const NoiseModel& noise,
                                        const std::vector<TestVectorField>& battery,
                                        const StochasticOptions& opts = {});

}  // namespace pvl

#endif
