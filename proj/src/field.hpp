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
#ifndef PVL_FIELD_HPP
#define PVL_FIELD_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "grid.hpp"

namespace pvl {

/// Real scalar field sampled on a periodic grid. Values are row-major,
/// last axis fastest.
struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(g), v(g.points(), 0.0) {}

  static ScalarField constant(const Grid& g, double c) {
    ScalarField f(g);
    for (auto& x : f.v) x = c;
    return f;
  }

  /// Sample f(x) on the grid; f takes a pointer to dim coordinates.
  template <class F>
  static ScalarField sample(const Grid& g, F&& f) {
    ScalarField out(g);
    double x[3] = {0, 0, 0};
    const std::size_t np = g.points();
    for (std::size_t i = 0; i < np; ++i) {
      g.point(i, x);
      out.v[i] = f(x);
    }
    return out;
  }

  std::size_t size() const { return v.size(); }
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
};

/// N-component vector field: one ScalarField per component.
struct VectorField {
  Grid grid;
  std::vector<ScalarField> comp;

  VectorField() = default;
  explicit VectorField(const Grid& g) : grid(g), comp(g.dim, ScalarField(g)) {}

  static VectorField constant(const Grid& g, std::span<const double> c);

  /// Sample f(x, out) on the grid; out receives dim components.
  template <class F>
  static VectorField sample(const Grid& g, F&& f) {
    VectorField out(g);
    double x[3] = {0, 0, 0};
    double u[3] = {0, 0, 0};
    const std::size_t np = g.points();
    for (std::size_t i = 0; i < np; ++i) {
      g.point(i, x);
      f(x, u);
      for (int d = 0; d < g.dim; ++d) out.comp[d].v[i] = u[d];
    }
    return out;
  }

  int dim() const { return grid.dim; }
  std::size_t size() const { return grid.points(); }
};

// ---- elementwise helpers ------------------------------------------------

void require_same_grid(const Grid& a, const Grid& b, const char* what);
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& u);
void require_finite(const ScalarField& f, const char* what);
void require_finite(const VectorField& u, const char* what);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double a, const ScalarField& f);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double a, const VectorField& u);

/// y += a*x
void axpy(double a, const ScalarField& x, ScalarField& y);
void axpy(double a, const VectorField& x, VectorField& y);

double max_abs(const ScalarField& f);
double max_abs(const VectorField& u);

// ---- measure-normalized integrals ---------------------------------------
// All integrals use the normalized Lebesgue measure: a plain grid mean,
// so that integral(1) == 1 exactly.

double integral(const ScalarField& f);
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& u, const VectorField& v);

/// Pointwise Euclidean norm ||u(x)||.
ScalarField pointwise_norm(const VectorField& u);

/// Integral of ||u(x)||^q, q > 1.
double lq_integral(const VectorField& u, double q);

/// sqrt of the mean of ||u||^2 (L2 norm under the normalized measure).
double l2_norm(const VectorField& u);
double l2_norm(const ScalarField& f);

/// Pointwise weight ||u||^(q-2) with the continuous extension 0 at u=0 for
/// q > 2 and the constant 1 for q = 2.
double norm_weight(double norm, double q);

}  // namespace pvl

#endif
