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
#ifndef PVL_VARIATION_HPP
#define PVL_VARIATION_HPP

#include <string>
#include <vector>

#include "dynamics.hpp"
#include "flow_map.hpp"

namespace pvl {

/// The flow energy of a trajectory under the perturbation eps*v:
///
///   E_q(u, eps v) = (1/q) int_0^T int || [(d/dt + L(u_t)) e_t](e_t^{-1}(x)) ||^q dx dt,
///
/// evaluated with composed_drift in `post` mode at every trajectory node,
/// grid means in space and composite Simpson in time. At eps = 0 the
/// integrand collapses to u_t exactly.
double energy(const Trajectory& traj, const TestVectorField& v, double eps, double q);

struct FdDerivative {
  double value = 0.0;       // Richardson-extrapolated central difference
  double plain = 0.0;       // central difference at step delta
  double truncation = 0.0;  // |D(delta/2) - D(delta)| / 3
};

/// Gateaux derivative d/deps E_q(u, eps v) at eps = 0 by central
/// differences at steps delta and delta/2 with Richardson extrapolation.
FdDerivative derivative_fd(const Trajectory& traj, const TestVectorField& v,
                           double q, double delta);

/// First-variation integrand route:
///   int_0^T int ||u||^{q-2} < v' + [u,v] + 1/2 Lap v , u > dx dt.
double derivative_analytic(const Trajectory& traj, const TestVectorField& v, double q);

/// Residual pairing route:
///   int_0^T int < (d/dt + u.grad - 1/2 Lap) m , v > dx dt,
/// equal to -dE/deps. `projected` selects the Leray-projected residual
/// (identical pairing for divergence-free v).
double derivative_el(const Trajectory& traj, const TestVectorField& v, double q,
                     PdeForm form, bool projected = false);

enum class Verdict { critical, non_critical, inconclusive };
const char* to_string(Verdict v);

struct FieldDerivatives {
  std::string profile;
  std::string envelope;
  double fd = 0.0;
  double fd_plain = 0.0;
  double fd_truncation = 0.0;
  double analytic = 0.0;
  double el = 0.0;                 // pairing value; -el estimates dE/deps
  double stoch_mean = 0.0;         // stochastic runs only
  double stoch_stderr = 0.0;
  bool has_stochastic = false;
};

/// Everything the verdict rests on, recomputable from the stored inputs.
struct VariationReport {
  double q = 2.0;
  double T = 1.0;
  int K = 0;
  int grid_n = 0;
  int grid_dim = 2;
  PdeForm form = PdeForm::proof_form;
  double delta = 1e-3;
  double energy_at_zero = 0.0;
  double energy_scale = 1.0;       // max(1, E_q(u, 0))
  double theta_crit = 0.0;         // 1e-4 * energy_scale by default
  double theta_res = 0.0;          // 1e-5 (relative residual threshold)
  double residual_norm_rel = 0.0;  // max_k ||P r_k||_2 / max_k ||m_k||_2
  double max_abs_fd = 0.0;
  std::vector<FieldDerivatives> fields;
  bool derivative_small = false;
  bool residual_small = false;
  Verdict verdict = Verdict::inconclusive;
  std::string inputs_digest;
  std::string sign_convention =
      "derivative_el stores the residual pairing; -derivative_el estimates dE/deps";
};

struct CriticalityOptions {
  double delta = 1e-3;
  double theta_crit_rel = 1e-4;  // times energy scale
  double theta_res_rel = 1e-5;   // times momentum L2 norm
  PdeForm form = PdeForm::proof_form;
};

/// Run all three derivative routes for every battery field, scan the
/// projected residual, and render the verdict: critical iff
/// max_i |derivative_fd_i| <= theta_crit and the relative projected
/// residual is below theta_res. Requires at least 5 battery fields.
VariationReport criticality_report(const Trajectory& traj,
                                   const std::vector<TestVectorField>& battery,
                                   const CriticalityOptions& opts = {});

/// The standard 5-field battery: low-mode (k <= 3) divergence-free
/// profiles built from stream functions, alternating the two admissible
/// time envelopes. Two-dimensional grids only.
std::vector<TestVectorField> standard_battery(const Grid& grid, double T);

/// Named battery profiles (see standard_battery). Valid names:
/// taylor_green, shear2, cosy, mixed, diag3.
VectorField battery_profile(const Grid& grid, const std::string& name);

}  // namespace pvl

#endif
