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
#ifndef PVL_FLOW_MAP_HPP
#define PVL_FLOW_MAP_HPP

#include <memory>
#include <string>
#include <vector>

#include "interp.hpp"

namespace pvl {

/// Smooth time envelope s(t) on [0,T], a polynomial in t, with s' in
/// closed form. Admissible envelopes vanish at both endpoints.
struct TimeEnvelope {
  double T = 1.0;
  std::vector<double> coeff;  // s(t) = sum coeff[j] t^j
  std::string name;

  double s(double t) const;
  double ds(double t) const;
  double max_abs_ds() const;  // coarse bound used for step-size checks

  /// t^2 (T-t)^2
  static TimeEnvelope basic(double T);
  /// t^2 (T-t)^2 (1 + t/T)
  static TimeEnvelope tilted(double T);
};

/// Separable test perturbation v_t(x) = s(t) w(x) with div w = 0 and
/// s(0) = s(T) = 0, the admissible directions of the criticality
/// definition. The constructor rejects profiles with divergence and
/// envelopes that do not vanish at the endpoints.
struct TestVectorField {
  VectorField profile;  // w
  TimeEnvelope envelope;
  std::string name;
  std::shared_ptr<const SpectralEvaluator> profile_eval;  // built once

  TestVectorField(VectorField w, TimeEnvelope env, std::string name_ = {});

  VectorField at(double t) const;        // v_t = s(t) w
  VectorField rate_at(double t) const;   // v'_t = s'(t) w
};

/// Volume-preserving perturbation map e(y) = y + displacement(y) mod 2pi.
struct TorusMap {
  VectorField displacement;
  double time = 0.0;

  static TorusMap identity(const Grid& g, double t);
};

/// Integrate de/dt = eps * s'(t) w(e), e_0 = id, with RK4 on the uniform
/// node grid t_k = k T/K; returns maps at all K+1 nodes. The right-hand
/// side is evaluated by spectral interpolation of w at the mapped points.
std::vector<TorusMap> integrate_flow(const TestVectorField& v, double eps,
                                     double T, int nodes, int substeps = 1);

/// Inverse map by fixed-point iteration y <- x - d(y); requires the
/// displacement sup norm below pi/2 and stops when the sup increment
/// drops below 1e-10 (at most 100 sweeps).
TorusMap invert_map(const TorusMap& m);

struct MapDerivatives {
  std::vector<ScalarField> jacobian;  // dim*dim fields, [i*dim+j] = d e^i / d y_j
  VectorField laplacian;              // componentwise Laplacian of the map
};
MapDerivatives map_derivatives(const TorusMap& m);

/// max |det grad(e) - 1| over the grid.
double max_volume_defect(const TorusMap& m);

enum class DriftMode { pre, post };

/// The composed drift F~(t,y) = [d/dt e + (u . grad) e + 1/2 Lap e](y)
/// of the perturbed flow. Mode `pre` returns F~ on the grid in y; mode
/// `post` composes with the inverse map and returns
/// F(t,x) = F~(t, e^{-1}(x)), the integrand of the energy functional.
/// At eps = 0 both modes return u exactly.
VectorField composed_drift(const VectorField& u, const TorusMap& map,
                           const TestVectorField& v, double eps, DriftMode mode);

}  // namespace pvl

#endif
