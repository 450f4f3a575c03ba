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
#include "field.hpp"

#include <cmath>

#include "reduce.hpp"

namespace pvl {

VectorField VectorField::constant(const Grid& g, std::span<const double> c) {
  if (static_cast<int>(c.size()) != g.dim)
    throw InvalidArgument("constant vector needs one value per component");
  VectorField u(g);
  for (int d = 0; d < g.dim; ++d)
    for (auto& x : u.comp[d].v) x = c[d];
  return u;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) throw InvalidArgument(strprintf("%s: grid mismatch", what));
}

bool all_finite(const ScalarField& f) {
  for (double x : f.v)
    if (!std::isfinite(x)) return false;
  return true;
}

bool all_finite(const VectorField& u) {
  for (const auto& c : u.comp)
    if (!all_finite(c)) return false;
  return true;
}

void require_finite(const ScalarField& f, const char* what) {
  if (!all_finite(f)) throw NumericError(strprintf("%s: non-finite field values", what));
}

void require_finite(const VectorField& u, const char* what) {
  if (!all_finite(u)) throw NumericError(strprintf("%s: non-finite field values", what));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "field sum");
  ScalarField out(a.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = a.v[i] + b.v[i];
  return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "field difference");
  ScalarField out(a.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = a.v[i] - b.v[i];
  return out;
}

ScalarField operator*(double a, const ScalarField& f) {
  ScalarField out = f;
  for (auto& x : out.v) x *= a;
  return out;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid, "field sum");
  VectorField out(a.grid);
  for (int d = 0; d < a.dim(); ++d) out.comp[d] = a.comp[d] + b.comp[d];
  return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid, b.grid, "field difference");
  VectorField out(a.grid);
  for (int d = 0; d < a.dim(); ++d) out.comp[d] = a.comp[d] - b.comp[d];
  return out;
}

VectorField operator*(double a, const VectorField& u) {
  VectorField out = u;
  for (auto& c : out.comp)
    for (auto& x : c.v) x *= a;
  return out;
}

void axpy(double a, const ScalarField& x, ScalarField& y) {
  require_same_grid(x.grid, y.grid, "axpy");
  for (std::size_t i = 0; i < y.size(); ++i) y.v[i] += a * x.v[i];
}

void axpy(double a, const VectorField& x, VectorField& y) {
  require_same_grid(x.grid, y.grid, "axpy");
  for (int d = 0; d < y.dim(); ++d) axpy(a, x.comp[d], y.comp[d]);
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::fabs(x));
  return m;
}

double max_abs(const VectorField& u) {
  double m = 0.0;
  for (const auto& c : u.comp) m = std::max(m, max_abs(c));
  return m;
}

double integral(const ScalarField& f) { return mean(f.v); }

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "inner");
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a.v[i] * b.v[i];
  return mean(prod);
}

double inner(const VectorField& u, const VectorField& v) {
  require_same_grid(u.grid, v.grid, "inner");
  std::vector<double> prod(u.size(), 0.0);
  for (int d = 0; d < u.dim(); ++d)
    for (std::size_t i = 0; i < u.size(); ++i) prod[i] += u.comp[d].v[i] * v.comp[d].v[i];
  return mean(prod);
}

ScalarField pointwise_norm(const VectorField& u) {
  ScalarField out(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double s = 0.0;
    for (int d = 0; d < u.dim(); ++d) {
      const double x = u.comp[d].v[i];
      s += x * x;
    }
    out.v[i] = std::sqrt(s);
  }
  return out;
}

double lq_integral(const VectorField& u, double q) {
  if (!(q > 1.0)) throw InvalidArgument("lq_integral requires q > 1");
  ScalarField nrm = pointwise_norm(u);
  std::vector<double> p(nrm.size());
  if (q == 2.0) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = nrm.v[i] * nrm.v[i];
  } else {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::pow(nrm.v[i], q);
  }
  return mean(p);
}

double l2_norm(const VectorField& u) { return std::sqrt(lq_integral(u, 2.0)); }

double l2_norm(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double norm_weight(double norm, double q) {
  if (q == 2.0) return 1.0;
  if (norm == 0.0) return 0.0;
  return std::pow(norm, q - 2.0);
}

}  // namespace pvl
