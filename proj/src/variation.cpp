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
#include "variation.hpp"

#include <cmath>

#include "digest.hpp"
#include "parallel.hpp"
#include "reduce.hpp"

namespace pvl {

double energy(const Trajectory& traj, const TestVectorField& v, double eps, double q) {
  if (!(q > 1.0)) throw InvalidArgument("energy requires q > 1");
  require_same_grid(traj.grid(), v.profile.grid, "energy");
  const int K = traj.K();
  std::vector<TorusMap> maps = integrate_flow(v, eps, traj.T, K);
  std::vector<double> integrand(K + 1, 0.0);
  parallel_for(0, static_cast<std::size_t>(K + 1), [&](std::size_t k) {
    VectorField f = composed_drift(traj.nodes[k], maps[k], v, eps, DriftMode::post);
    integrand[k] = lq_integral(f, q);
  });
  return simpson(integrand, traj.dt()) / q;
}

FdDerivative derivative_fd(const Trajectory& traj, const TestVectorField& v,
                           double q, double delta) {
  if (!(delta >= 1e-4 && delta <= 1e-2))
    throw InvalidArgument("derivative_fd: delta must lie in [1e-4, 1e-2]");
  double e[4];
  const double steps[4] = {delta, -delta, 0.5 * delta, -0.5 * delta};
  for (int i = 0; i < 4; ++i) {
    e[i] = energy(traj, v, steps[i], q);
    if (!std::isfinite(e[i])) throw NumericError("derivative_fd: non-finite energy");
  }
  FdDerivative d;
  d.plain = (e[0] - e[1]) / (2.0 * delta);
  const double half = (e[2] - e[3]) / delta;
  d.value = (4.0 * half - d.plain) / 3.0;
  d.truncation = std::fabs(half - d.plain) / 3.0;
  return d;
}

double derivative_analytic(const Trajectory& traj, const TestVectorField& v, double q) {
  if (!(q >= 2.0)) throw InvalidArgument("derivative_analytic requires q >= 2");
  require_same_grid(traj.grid(), v.profile.grid, "derivative_analytic");
  const int K = traj.K();
  const Grid& g = traj.grid();
  const VectorField& w = v.profile;
  const VectorField lap_w = laplacian(w);

  std::vector<double> integrand(K + 1, 0.0);
  parallel_for(0, static_cast<std::size_t>(K + 1), [&](std::size_t k) {
    const double t = traj.time(static_cast<int>(k));
    const double s = v.envelope.s(t);
    const double sd = v.envelope.ds(t);
    const VectorField& u = traj.nodes[k];
    // v' + [u,v] + 1/2 Lap v with v = s w: the bracket is linear in v
    VectorField dir = lie_bracket(u, w);
    VectorField term(g);
    axpy(sd, w, term);
    axpy(s, dir, term);
    axpy(0.5 * s, lap_w, term);

    const std::size_t np = g.points();
    std::vector<double> prod(np);
    const int dim = g.dim;
    for (std::size_t i = 0; i < np; ++i) {
      double nrm2 = 0.0, dot = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double uc = u.comp[d].v[i];
        nrm2 += uc * uc;
        dot += term.comp[d].v[i] * uc;
      }
      prod[i] = norm_weight(std::sqrt(nrm2), q) * dot;
    }
    integrand[k] = mean(prod);
  });
  return simpson(integrand, traj.dt());
}

double derivative_el(const Trajectory& traj, const TestVectorField& v, double q,
                     PdeForm form, bool projected) {
  if (!(q >= 2.0)) throw InvalidArgument("derivative_el requires q >= 2");
  if (q != traj.q) throw InvalidArgument("derivative_el: q differs from the trajectory");
  require_same_grid(traj.grid(), v.profile.grid, "derivative_el");
  const int K = traj.K();
  std::vector<VectorField> mnodes = momentum_nodes(traj);

  // The endpoint integrand vanishes exactly (v_0 = v_T = 0); nodes 1 and
  // K-1 use the shifted 4th-order stencil.
  std::vector<double> integrand(K + 1, 0.0);
  parallel_for(1, static_cast<std::size_t>(K), [&](std::size_t k) {
    VectorField r = raw_residual_at(traj, mnodes, static_cast<int>(k), form);
    if (projected) r = leray(r);
    const double s = v.envelope.s(traj.time(static_cast<int>(k)));
    integrand[k] = s * inner(r, v.profile);
  });
  return simpson(integrand, traj.dt());
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::critical: return "critical";
    case Verdict::non_critical: return "non-critical";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

VariationReport criticality_report(const Trajectory& traj,
                                   const std::vector<TestVectorField>& battery,
                                   const CriticalityOptions& opts) {
  if (battery.size() < 5)
    throw InvalidArgument("criticality_report needs a battery of at least 5 test fields");
  traj.validate();

  VariationReport rep;
  rep.q = traj.q;
  rep.T = traj.T;
  rep.K = traj.K();
  rep.grid_n = traj.grid().n;
  rep.grid_dim = traj.grid().dim;
  rep.form = opts.form;
  rep.delta = opts.delta;
  rep.inputs_digest = trajectory_digest(traj);

  rep.energy_at_zero = energy(traj, battery.front(), 0.0, traj.q);
  rep.energy_scale = std::max(1.0, rep.energy_at_zero);
  rep.theta_crit = opts.theta_crit_rel * rep.energy_scale;
  rep.theta_res = opts.theta_res_rel;

  ResidualScan scan = residual_scan(traj, opts.form);
  rep.residual_norm_rel = scan.max_projected_rel;

  for (const auto& v : battery) {
    FieldDerivatives fd;
    fd.profile = v.name;
    fd.envelope = v.envelope.name;
    FdDerivative d = derivative_fd(traj, v, traj.q, opts.delta);
    fd.fd = d.value;
    fd.fd_plain = d.plain;
    fd.fd_truncation = d.truncation;
    fd.analytic = derivative_analytic(traj, v, traj.q);
    fd.el = derivative_el(traj, v, traj.q, opts.form);
    rep.fields.push_back(fd);
    rep.max_abs_fd = std::max(rep.max_abs_fd, std::fabs(d.value));
  }

  rep.derivative_small = rep.max_abs_fd <= rep.theta_crit;
  rep.residual_small = rep.residual_norm_rel <= rep.theta_res;
  rep.verdict = (rep.derivative_small && rep.residual_small) ? Verdict::critical
                                                             : Verdict::non_critical;
  return rep;
}

VectorField battery_profile(const Grid& grid, const std::string& name) {
  if (grid.dim != 2)
    throw InvalidArgument("battery profiles are built from 2-D stream functions");
  // w = (d psi / dy, -d psi / dx) is divergence-free by construction.
  auto from_stream = [&](auto&& psi) {
    ScalarField p = ScalarField::sample(grid, psi);
    Spectrum s = forward(p);
    VectorField w(grid);
    w.comp[0] = inverse(derivative(s, 1));
    w.comp[1] = -1.0 * inverse(derivative(s, 0));
    return w;
  };
  if (name == "taylor_green")
    return from_stream([](const double* x) { return std::sin(x[0]) * std::sin(x[1]); });
  if (name == "shear2")
    return from_stream([](const double* x) { return 0.5 * std::cos(2.0 * x[0]); });
  if (name == "cosy")
    return from_stream([](const double* x) { return std::sin(x[1]); });
  if (name == "mixed")
    return from_stream([](const double* x) {
      return 0.5 * std::sin(2.0 * x[0] + x[1]) + 0.5 * std::cos(x[0] - 2.0 * x[1]);
    });
  if (name == "diag3")
    return from_stream([](const double* x) { return std::sin(3.0 * x[0]) * std::sin(2.0 * x[1]) / 3.0; });
  throw InvalidArgument(strprintf("unknown battery profile '%s'", name.c_str()));
}

std::vector<TestVectorField> standard_battery(const Grid& grid, double T) {
  const char* names[5] = {"taylor_green", "shear2", "cosy", "mixed", "diag3"};
  std::vector<TestVectorField> battery;
  battery.reserve(5);
  for (int i = 0; i < 5; ++i) {
    TimeEnvelope env = (i % 2 == 0) ? TimeEnvelope::basic(T) : TimeEnvelope::tilted(T);
    battery.emplace_back(battery_profile(grid, names[i]), env, names[i]);
  }
  return battery;
}

}  // namespace pvl
