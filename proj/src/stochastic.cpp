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
#include "stochastic.hpp"

#include <cmath>

#include "parallel.hpp"
#include "reduce.hpp"
#include "rng.hpp"
#include "smallmat.hpp"

namespace pvl {

namespace {

// Seed tags: sample index in the low bits, an optional branch tag above,
// so independent-seed runs never collide with the base ensemble.
std::uint64_t sample_tag(int sample, int branch) {
  return static_cast<std::uint64_t>(sample) * 4ULL + static_cast<std::uint64_t>(branch);
}

}  // namespace

FlowEnsemble simulate_flow(std::shared_ptr<const Trajectory> traj, const NoiseModel& noise,
                           const EnsembleConfig& cfg) {
  return simulate_flow_tagged(std::move(traj), noise, cfg, 0);
}

FlowEnsemble simulate_flow_tagged(std::shared_ptr<const Trajectory> traj,
                                  const NoiseModel& noise, const EnsembleConfig& cfg,
                                  int branch) {
  if (!traj) throw InvalidArgument("simulate_flow: null trajectory");
  traj->validate();
  const Grid& g = traj->grid();
  if (noise.kind != NoiseModel::Kind::constant_identity)
    throw InvalidArgument("simulate_flow: only constant identity noise is implemented");
  if (noise.dim != g.dim) throw InvalidArgument("simulate_flow: noise dimension mismatch");
  if (cfg.samples < 1 || cfg.particles_per_axis < 2)
    throw InvalidArgument("simulate_flow: bad ensemble size");
  if (!(cfg.dt > 0.0) || cfg.dt > traj->dt() * (1.0 + 1e-12))
    throw InvalidArgument("simulate_flow: dt must be positive and at most the trajectory step");
  const int K = traj->K();
  if (cfg.snapshot_stride < 1 || K % cfg.snapshot_stride != 0)
    throw InvalidArgument("simulate_flow: snapshot stride must divide K");

  const int dim = g.dim;
  const int substeps = static_cast<int>(std::llround(traj->dt() / cfg.dt));
  if (substeps < 1 || std::fabs(substeps * cfg.dt - traj->dt()) > 1e-9 * traj->dt())
    throw InvalidArgument("simulate_flow: dt must divide the trajectory step");
  const double dt = traj->dt() / substeps;

  FlowEnsemble ens;
  ens.traj = traj;
  ens.cfg = cfg;
  for (int k = 0; k <= K; k += cfg.snapshot_stride) ens.snapshot_nodes.push_back(k);

  // particle lattice
  const int ppa = cfg.particles_per_axis;
  int pcount = 1;
  for (int d = 0; d < dim; ++d) pcount *= ppa;
  ens.initial_points.resize(static_cast<std::size_t>(pcount) * dim);
  {
    const double hp = kTwoPi / ppa;
    for (int p = 0; p < pcount; ++p) {
      int rest = p;
      for (int d = dim - 1; d >= 0; --d) {
        ens.initial_points[static_cast<std::size_t>(p) * dim + d] = hp * (rest % ppa);
        rest /= ppa;
      }
    }
  }

  // node drift evaluators, shared across samples
  ens.node_eval.reserve(K + 1);
  for (int k = 0; k <= K; ++k)
    ens.node_eval.push_back(std::make_shared<SpectralEvaluator>(traj->nodes[k]));

  // drift step bound
  {
    double umax = 0.0;
    for (const auto& u : traj->nodes) umax = std::max(umax, max_abs(u));
    if (umax * dt / g.spacing() > 0.5)
      throw NumericError("simulate_flow: drift step violates the CFL-type bound");
  }

  ens.positions.assign(cfg.samples, {});
  ens.det_min.assign(cfg.samples, 1.0);
  ens.det_max.assign(cfg.samples, 1.0);

  parallel_for(0, static_cast<std::size_t>(cfg.samples), [&](std::size_t s) {
    RngStream rng(cfg.master_seed, sample_tag(static_cast<int>(s), branch));
    std::vector<double> pos = ens.initial_points;
    std::vector<double> jac(static_cast<std::size_t>(pcount) * dim * dim);
    for (int p = 0; p < pcount; ++p) mat_identity(dim, &jac[static_cast<std::size_t>(p) * dim * dim]);
    double dmin = 1.0, dmax = 1.0;

    auto& snaps = ens.positions[s];
    snaps.reserve(ens.snapshot_nodes.size());
    std::vector<double> wrapped(pos.size());
    auto store_snapshot = [&]() {
      for (std::size_t i = 0; i < pos.size(); ++i) wrapped[i] = wrap_angle(pos[i]);
      snaps.push_back(wrapped);
    };
    store_snapshot();

    const double sqdt = std::sqrt(dt);
    double dw[3], val0[3], val1[3], jac0[9], jac1[9], a[9], em[9];
    for (int k = 0; k < K; ++k) {
      const SpectralEvaluator& e0 = *ens.node_eval[k];
      const SpectralEvaluator& e1 = *ens.node_eval[k + 1];
      for (int sub = 0; sub < substeps; ++sub) {
        const double theta = static_cast<double>(sub) / substeps;  // blend at the step's left edge
        rng.gaussians(dw, dim);
        for (int d = 0; d < dim; ++d) dw[d] *= sqdt;  // one shared path per sample
        for (int p = 0; p < pcount; ++p) {
          double* x = &pos[static_cast<std::size_t>(p) * dim];
          e0.value_and_jacobian(x, val0, jac0);
          e1.value_and_jacobian(x, val1, jac1);
          for (int d = 0; d < dim; ++d)
            val0[d] = (1.0 - theta) * val0[d] + theta * val1[d];
          for (int d = 0; d < dim * dim; ++d)
            a[d] = ((1.0 - theta) * jac0[d] + theta * jac1[d]) * dt;
          // Ito step with additive noise, then the volume-exact Jacobian update
          for (int d = 0; d < dim; ++d) x[d] += val0[d] * dt + dw[d];
          double* J = &jac[static_cast<std::size_t>(p) * dim * dim];
          mat_exp(dim, a, em);
          mat_mul(dim, em, J, J);
          const double det = mat_det(dim, J);
          dmin = std::min(dmin, det);
          dmax = std::max(dmax, det);
          if (!std::isfinite(x[0]) || !std::isfinite(det))
            throw NumericError("simulate_flow: non-finite particle state");
        }
      }
      if ((k + 1) % cfg.snapshot_stride == 0) store_snapshot();
    }
    ens.det_min[s] = dmin;
    ens.det_max[s] = dmax;
  });

  return ens;
}

std::vector<double> drift_field(const FlowEnsemble& ens, int sample, int snapshot) {
  if (sample < 0 || sample >= ens.cfg.samples) throw InvalidArgument("drift_field: bad sample");
  if (snapshot < 0 || snapshot >= ens.snapshots())
    throw InvalidArgument("drift_field: bad snapshot");
  const int dim = ens.dim();
  const int node = ens.snapshot_nodes[snapshot];
  const SpectralEvaluator& e = *ens.node_eval[node];
  const auto& pos = ens.positions[sample][snapshot];
  std::vector<double> out(pos.size());
  double val[3];
  const int pcount = ens.particle_count();
  for (int p = 0; p < pcount; ++p) {
    e.value(&pos[static_cast<std::size_t>(p) * dim], val);
    for (int d = 0; d < dim; ++d) out[static_cast<std::size_t>(p) * dim + d] = val[d];
  }
  return out;
}

namespace {

// Per-sample Simpson of mean_p ||field(t, pos)||^q over the snapshots.
// `field_at` fills val[dim] given (snapshot index, particle coords).
template <class FieldAt>
std::vector<double> per_sample_energy(const FlowEnsemble& ens, double q, FieldAt&& field_at) {
  const int dim = ens.dim();
  const int pcount = ens.particle_count();
  const int S = ens.cfg.samples;
  std::vector<double> result(S, 0.0);
  parallel_for(0, static_cast<std::size_t>(S), [&](std::size_t s) {
    std::vector<double> series(ens.snapshots());
    std::vector<double> normq(pcount);
    double val[3];
    for (int snap = 0; snap < ens.snapshots(); ++snap) {
      const auto& pos = ens.positions[s][snap];
      for (int p = 0; p < pcount; ++p) {
        field_at(snap, &pos[static_cast<std::size_t>(p) * dim], val);
        double nrm2 = 0.0;
        for (int d = 0; d < dim; ++d) nrm2 += val[d] * val[d];
        normq[p] = (q == 2.0) ? nrm2 : std::pow(std::sqrt(nrm2), q);
      }
      series[snap] = mean(normq);
    }
    result[s] = simpson(series, ens.snapshot_dt()) / q;
  });
  return result;
}

McEstimate finish(std::vector<double> per_sample) {
  McEstimate est;
  MeanStderr ms = mean_and_stderr(per_sample);
  est.value = ms.mean;
  est.stderr_ = ms.stderr_;
  est.per_sample = std::move(per_sample);
  return est;
}

}  // namespace

McEstimate mc_energy(const FlowEnsemble& ens, double q) {
  if (!(q > 1.0)) throw InvalidArgument("mc_energy requires q > 1");
  if (ens.cfg.samples == 0 || ens.positions.empty())
    throw InvalidArgument("mc_energy: empty ensemble");
  return finish(per_sample_energy(ens, q, [&](int snap, const double* x, double* val) {
    ens.node_eval[ens.snapshot_nodes[snap]]->value(x, val);
  }));
}

McEstimate mc_energy_perturbed(const FlowEnsemble& ens, const TestVectorField& v,
                               double eps, double q) {
  if (!(q > 1.0)) throw InvalidArgument("mc_energy_perturbed requires q > 1");
  const Trajectory& traj = *ens.traj;
  require_same_grid(traj.grid(), v.profile.grid, "mc_energy_perturbed");

  // F~ fields at the snapshot nodes; evaluation at the particles needs no
  // inversion because the transported lattice still samples dx uniformly.
  std::vector<TorusMap> maps = integrate_flow(v, eps, traj.T, traj.K());
  std::vector<std::shared_ptr<const SpectralEvaluator>> feval(ens.snapshots());
  parallel_for(0, static_cast<std::size_t>(ens.snapshots()), [&](std::size_t snap) {
    const int node = ens.snapshot_nodes[snap];
    VectorField ft = composed_drift(traj.nodes[node], maps[node], v, eps, DriftMode::pre);
    feval[snap] = std::make_shared<SpectralEvaluator>(ft);
  });

  return finish(per_sample_energy(ens, q, [&](int snap, const double* x, double* val) {
    feval[snap]->value(x, val);
  }));
}

StochasticReport stochastic_criticality(std::shared_ptr<const Trajectory> traj,
                                        const NoiseModel& noise,
                                        const std::vector<TestVectorField>& battery,
                                        const EnsembleConfig& cfg,
                                        const StochasticOptions& opts) {
  FlowEnsemble base = simulate_flow_tagged(std::move(traj), noise, cfg, 0);
  return stochastic_criticality(base, noise, battery, opts);
}

StochasticReport stochastic_criticality(const FlowEnsemble& base, const NoiseModel& noise,
                                        const std::vector<TestVectorField>& battery,
                                        const StochasticOptions& opts) {
  if (battery.size() < 5)
    throw InvalidArgument("stochastic_criticality needs a battery of at least 5 test fields");
  const std::shared_ptr<const Trajectory>& traj = base.traj;
  const EnsembleConfig& cfg = base.cfg;
  const double q = traj->q;
  const double delta = opts.delta;

  StochasticReport rep;
  rep.q = q;
  rep.delta = delta;
  rep.common_random_numbers = opts.common_random_numbers;
  rep.master_seed = cfg.master_seed;
  rep.samples = cfg.samples;

  McEstimate e0 = mc_energy(base, q);
  rep.energy_mc = e0.value;
  rep.energy_mc_stderr = e0.stderr_;
  rep.theta_crit = opts.theta_crit_rel * std::max(1.0, e0.value);
  for (int s = 0; s < cfg.samples; ++s) {
    rep.det_defect_max = std::max(rep.det_defect_max, std::fabs(base.det_min[s] - 1.0));
    rep.det_defect_max = std::max(rep.det_defect_max, std::fabs(base.det_max[s] - 1.0));
  }

  // Independent-seed mode re-simulates the two branches with distinct
  // streams; with common random numbers both energies ride the same paths.
  std::unique_ptr<FlowEnsemble> plus_ens, minus_ens;
  if (!opts.common_random_numbers) {
    plus_ens = std::make_unique<FlowEnsemble>(simulate_flow_tagged(traj, noise, cfg, 1));
    minus_ens = std::make_unique<FlowEnsemble>(simulate_flow_tagged(traj, noise, cfg, 2));
  }

  bool all_small = true, some_large = false, bars_ok = true;
  for (const auto& v : battery) {
    const FlowEnsemble& ep = opts.common_random_numbers ? base : *plus_ens;
    const FlowEnsemble& em = opts.common_random_numbers ? base : *minus_ens;
    McEstimate up = mc_energy_perturbed(ep, v, +delta, q);
    McEstimate dn = mc_energy_perturbed(em, v, -delta, q);
    std::vector<double> diff(up.per_sample.size());
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = (up.per_sample[i] - dn.per_sample[i]) / (2.0 * delta);
    MeanStderr ms = mean_and_stderr(diff);

    StochasticFieldResult fr;
    fr.profile = v.name;
    fr.envelope = v.envelope.name;
    fr.derivative = ms.mean;
    fr.stderr_ = ms.stderr_;
    rep.fields.push_back(fr);

    const double bar = 3.0 * ms.stderr_;
    if (bar > rep.theta_crit) bars_ok = false;
    if (std::fabs(ms.mean) > rep.theta_crit) {
      all_small = false;
      if (std::fabs(ms.mean) > std::max(rep.theta_crit, bar)) some_large = true;
    }
  }

  if (some_large)
    rep.verdict = Verdict::non_critical;
  else if (all_small && bars_ok)
    rep.verdict = Verdict::critical;
  else
    rep.verdict = Verdict::inconclusive;
  return rep;
}

}  // namespace pvl
