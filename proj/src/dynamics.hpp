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
#ifndef PVL_DYNAMICS_HPP
#define PVL_DYNAMICS_HPP

#include <array>
#include <string>
#include <vector>

#include "spectral.hpp"

namespace pvl {

/// Which field the time derivative acts on in the equation residual.
/// proof_form differentiates the momentum m = ||u||^{q-2} u, the form the
/// first variation produces and the one certified throughout; literal_form
/// differentiates u itself. They coincide at q = 2.
enum class PdeForm { proof_form, literal_form };

const char* to_string(PdeForm f);
PdeForm pde_form_from_string(const std::string& s);

/// Divergence-free trajectory on a uniform time grid 0 = t_0 < ... < t_K = T.
struct Trajectory {
  double T = 1.0;
  double q = 2.0;
  std::vector<VectorField> nodes;  // K+1 fields

  int K() const { return static_cast<int>(nodes.size()) - 1; }
  double dt() const { return T / K(); }
  double time(int k) const { return T * k / K(); }
  const Grid& grid() const { return nodes.front().grid; }

  /// K >= 8, q >= 2, finite and divergence-free at every node.
  void validate() const;
};

// ---- momentum transform --------------------------------------------------

/// m = ||u||^{q-2} u, computed pointwise (exact inverse pair with
/// velocity_from_momentum at every grid point).
VectorField momentum(const VectorField& u, double q);

/// u = ||m||^{(2-q)/(q-1)} m, with u = 0 where m = 0.
VectorField velocity_from_momentum(const VectorField& m, double q);

// ---- Euler-Lagrange residual ----------------------------------------------

struct ElResidual {
  VectorField raw;        // dt-term + u.grad(m) - 1/2 Lap m
  VectorField projected;  // Leray projection of raw (the gradient ambiguity removed)
};

/// Residual at an interior node (4th-order central stencils need
/// 2 <= k <= K-2).
ElResidual el_residual(const Trajectory& traj, int k, PdeForm form);

/// Momentum fields at every node; shared by residual evaluations.
std::vector<VectorField> momentum_nodes(const Trajectory& traj);

/// Raw residual at node k for 1 <= k <= K-1; nodes next to the boundary
/// fall back to the shifted 5-point stencil (still 4th order). Used by the
/// residual pairing in the variation module, where the integrand carries
/// an envelope vanishing at the endpoints.
VectorField raw_residual_at(const Trajectory& traj, const std::vector<VectorField>& mnodes,
                            int k, PdeForm form);

/// L2 norms of the projected/raw residual over all interior nodes, and the
/// relative size max_k ||P r_k||_2 / max_k ||m_k||_2.
struct ResidualScan {
  std::vector<int> node;
  std::vector<double> raw_l2;
  std::vector<double> projected_l2;
  double momentum_l2 = 0.0;      // max over interior nodes of ||m_k||_2
  double max_projected_rel = 0.0;
};
ResidualScan residual_scan(const Trajectory& traj, PdeForm form);

// ---- q = 2 solver ----------------------------------------------------------

/// Pseudo-spectral IMEX solver for the q = 2 equation (viscosity 1/2):
/// Crank-Nicolson on the diffusion, Adams-Bashforth-2 on the projected,
/// dealiased advection. Returns the trajectory sampled on K uniform nodes.
/// Throws on CFL violation (max|u| dt / h > 0.5) or blow-up.
Trajectory solve_ns(const VectorField& u0, double T, double dt, int output_nodes);

// ---- exact solution families ----------------------------------------------

enum class ExactFamily { constant, taylor_green, shear };

ExactFamily family_from_string(const std::string& s);
const char* to_string(ExactFamily f);

struct FamilyParams {
  std::vector<double> c = {1.0, 0.0, 0.0};  // constant family velocity
  double amplitude = 1.0;                   // taylor_green scale
  double base = 1.0;                        // shear: m = base + wave e^{-t/2} sin y
  double wave = 0.5;
};

/// Closed-form solutions used as ground truth: constant (any q >= 2),
/// decaying Taylor-Green vortex (q = 2), and the shear flow whose momentum
/// solves the heat equation (any q >= 2, requires base > |wave|).
Trajectory exact_family(ExactFamily family, const FamilyParams& params, double q,
                        const Grid& grid, double T, int K);

/// The time-frozen Taylor-Green profile: a deliberate non-solution used to
/// exercise the converse direction of the criticality equivalence.
Trajectory frozen_taylor_green(const FamilyParams& params, const Grid& grid, double T, int K);

// ---- time differentiation helpers ------------------------------------------

/// 4th-order 5-point differentiation weights at stencil position `pos`
/// (0..4) for spacing dt.
std::array<double, 5> stencil5_weights(int pos, double dt);

}  // namespace pvl

#endif
