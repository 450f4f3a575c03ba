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
#include "flow_map.hpp"

#include <cmath>

#include "smallmat.hpp"

namespace pvl {

double TimeEnvelope::s(double t) const {
  double acc = 0.0;
  for (std::size_t j = coeff.size(); j-- > 0;) acc = acc * t + coeff[j];
  return acc;
}

double TimeEnvelope::ds(double t) const {
  double acc = 0.0;
  for (std::size_t j = coeff.size(); j-- > 1;) acc = acc * t + coeff[j] * static_cast<double>(j);
  return acc;
}

double TimeEnvelope::max_abs_ds() const {
  double m = 0.0;
  for (int i = 0; i <= 256; ++i) m = std::max(m, std::fabs(ds(T * i / 256.0)));
  return m;
}

TimeEnvelope TimeEnvelope::basic(double T) {
  // t^2 (T-t)^2 = T^2 t^2 - 2T t^3 + t^4
  TimeEnvelope e;
  e.T = T;
  e.coeff = {0.0, 0.0, T * T, -2.0 * T, 1.0};
  e.name = "basic";
  return e;
}

TimeEnvelope TimeEnvelope::tilted(double T) {
  // t^2 (T-t)^2 (1 + t/T) = T^2 t^2 - T t^3 - t^4 + t^5/T
  TimeEnvelope e;
  e.T = T;
  e.coeff = {0.0, 0.0, T * T, -T, -1.0, 1.0 / T};
  e.name = "tilted";
  return e;
}

TestVectorField::TestVectorField(VectorField w, TimeEnvelope env, std::string name_)
    : profile(std::move(w)), envelope(std::move(env)), name(std::move(name_)) {
  require_finite(profile, "test field profile");
  const double scale = std::max(1.0, max_abs(profile));
  if (max_divergence(profile) > 1e-10 * scale)
    throw InvalidArgument("test field profile must be divergence-free");
  const double send = std::max(std::fabs(envelope.s(0.0)), std::fabs(envelope.s(envelope.T)));
  if (send > 1e-12 * std::max(1.0, std::fabs(envelope.s(envelope.T / 2))))
    throw InvalidArgument("test field envelope must vanish at t=0 and t=T");
  profile_eval = std::make_shared<SpectralEvaluator>(profile);
}

VectorField TestVectorField::at(double t) const { return envelope.s(t) * profile; }

VectorField TestVectorField::rate_at(double t) const { return envelope.ds(t) * profile; }

TorusMap TorusMap::identity(const Grid& g, double t) {
  TorusMap m;
  m.displacement = VectorField(g);
  m.time = t;
  return m;
}

namespace {

// rhs(t, d)[p] = eps * s'(t) * w(y_p + d(y_p))
void flow_rhs(const TestVectorField& v, double eps, double t,
              const VectorField& d, VectorField& out) {
  const Grid& g = d.grid;
  const int dim = g.dim;
  const double a = eps * v.envelope.ds(t);
  const std::size_t np = g.points();
  double y[3], p[3], val[3];
  for (std::size_t i = 0; i < np; ++i) {
    g.point(i, y);
    for (int c = 0; c < dim; ++c) p[c] = y[c] + d.comp[c].v[i];
    v.profile_eval->value(p, val);
    for (int c = 0; c < dim; ++c) out.comp[c].v[i] = a * val[c];
  }
}

}  // namespace

std::vector<TorusMap> integrate_flow(const TestVectorField& v, double eps,
                                     double T, int nodes, int substeps) {
  if (nodes < 1 || substeps < 1) throw InvalidArgument("integrate_flow: bad time grid");
  if (std::fabs(eps) > 1.0) throw InvalidArgument("integrate_flow: |eps| must be <= 1");
  if (std::fabs(T - v.envelope.T) > 1e-12 * std::max(1.0, T))
    throw InvalidArgument("integrate_flow: envelope horizon differs from T");
  const Grid& g = v.profile.grid;
  const double dt = T / nodes / substeps;

  // Lipschitz-style step bound: the RHS varies on the scale of grad(w).
  {
    double gw = 0.0;
    for (int i = 0; i < g.dim; ++i) {
      Spectrum si = forward(v.profile.comp[i]);
      for (int j = 0; j < g.dim; ++j) gw = std::max(gw, max_abs(inverse(derivative(si, j))));
    }
    const double rate = std::fabs(eps) * v.envelope.max_abs_ds() * std::max(1.0, gw);
    if (dt * rate > 0.7)
      throw NumericError("integrate_flow: time step exceeds the stability bound");
  }

  std::vector<TorusMap> maps;
  maps.reserve(nodes + 1);
  VectorField d(g);
  maps.push_back(TorusMap{d, 0.0});

  if (eps == 0.0) {  // flow of the zero field: identity at all times
    for (int k = 1; k <= nodes; ++k) maps.push_back(TorusMap{d, T * k / nodes});
    return maps;
  }

  VectorField k1(g), k2(g), k3(g), k4(g), stage(g);
  for (int k = 0; k < nodes; ++k) {
    for (int s = 0; s < substeps; ++s) {
      const double t = T * k / nodes + dt * s;
      flow_rhs(v, eps, t, d, k1);
      stage = d;
      axpy(0.5 * dt, k1, stage);
      flow_rhs(v, eps, t + 0.5 * dt, stage, k2);
      stage = d;
      axpy(0.5 * dt, k2, stage);
      flow_rhs(v, eps, t + 0.5 * dt, stage, k3);
      stage = d;
      axpy(dt, k3, stage);
      flow_rhs(v, eps, t + dt, stage, k4);
      axpy(dt / 6.0, k1, d);
      axpy(dt / 3.0, k2, d);
      axpy(dt / 3.0, k3, d);
      axpy(dt / 6.0, k4, d);
    }
    require_finite(d, "integrate_flow");
    maps.push_back(TorusMap{d, T * (k + 1) / nodes});
  }
  return maps;
}

TorusMap invert_map(const TorusMap& m) {
  const Grid& g = m.displacement.grid;
  const int dim = g.dim;
  const std::size_t np = g.points();
  if (max_abs(m.displacement) >= M_PI / 2)
    throw NumericError("invert_map: displacement outside the small-deformation regime");

  SpectralEvaluator deval(m.displacement);
  // y = x - d(y), started at y = x.
  std::vector<double> y(np * dim);
  double x[3], val[3];
  for (std::size_t i = 0; i < np; ++i) {
    g.point(i, x);
    for (int c = 0; c < dim; ++c) y[i * dim + c] = x[c];
  }
  const double tol = 1e-10;
  bool converged = false;
  for (int iter = 0; iter < 100 && !converged; ++iter) {
    double worst = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
      g.point(i, x);
      deval.value(&y[i * dim], val);
      for (int c = 0; c < dim; ++c) {
        const double ynew = x[c] - val[c];
        worst = std::max(worst, std::fabs(ynew - y[i * dim + c]));
        y[i * dim + c] = ynew;
      }
    }
    if (!std::isfinite(worst)) throw NumericError("invert_map: iteration diverged");
    converged = worst < tol;
  }
  if (!converged) throw NumericError("invert_map: no convergence after 100 iterations");

  TorusMap inv;
  inv.time = m.time;
  inv.displacement = VectorField(g);
  for (std::size_t i = 0; i < np; ++i) {
    g.point(i, x);
    for (int c = 0; c < dim; ++c) inv.displacement.comp[c].v[i] = y[i * dim + c] - x[c];
  }
  return inv;
}

MapDerivatives map_derivatives(const TorusMap& m) {
  const Grid& g = m.displacement.grid;
  const int dim = g.dim;
  MapDerivatives out;
  out.jacobian.resize(dim * dim, ScalarField(g));
  for (int i = 0; i < dim; ++i) {
    Spectrum si = forward(m.displacement.comp[i]);
    for (int j = 0; j < dim; ++j) {
      out.jacobian[i * dim + j] = inverse(derivative(si, j));
      if (i == j)
        for (auto& x : out.jacobian[i * dim + j].v) x += 1.0;
    }
  }
  out.laplacian = laplacian(m.displacement);
  return out;
}

double max_volume_defect(const TorusMap& m) {
  const Grid& g = m.displacement.grid;
  const int dim = g.dim;
  MapDerivatives md = map_derivatives(m);
  double worst = 0.0;
  double jac[9];
  const std::size_t np = g.points();
  for (std::size_t p = 0; p < np; ++p) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) jac[i * dim + j] = md.jacobian[i * dim + j].v[p];
    worst = std::max(worst, std::fabs(mat_det(dim, jac) - 1.0));
  }
  return worst;
}

VectorField composed_drift(const VectorField& u, const TorusMap& map,
                           const TestVectorField& v, double eps, DriftMode mode) {
  require_same_grid(u.grid, map.displacement.grid, "composed_drift");
  require_same_grid(u.grid, v.profile.grid, "composed_drift");
  const Grid& g = u.grid;
  const int dim = g.dim;
  const std::size_t np = g.points();
  const double t = map.time;

  if (eps == 0.0) return u;  // (d/dt + L(u))(id) = u

  MapDerivatives md = map_derivatives(map);
  VectorField ft(g);  // F~ on the grid in y
  const double a = eps * v.envelope.ds(t);
  double y[3], p[3], val[3], jac[9], uv[3], ju[3];
  for (std::size_t i = 0; i < np; ++i) {
    g.point(i, y);
    for (int c = 0; c < dim; ++c) p[c] = y[c] + map.displacement.comp[c].v[i];
    v.profile_eval->value(p, val);
    for (int r = 0; r < dim; ++r) {
      uv[r] = u.comp[r].v[i];
      for (int c = 0; c < dim; ++c) jac[r * dim + c] = md.jacobian[r * dim + c].v[i];
    }
    mat_vec(dim, jac, uv, ju);
    for (int c = 0; c < dim; ++c)
      ft.comp[c].v[i] = a * val[c] + ju[c] + 0.5 * md.laplacian.comp[c].v[i];
  }
  if (mode == DriftMode::pre) return ft;

  TorusMap inv = invert_map(map);
  SpectralEvaluator feval(ft);
  VectorField out(g);
  double x[3];
  for (std::size_t i = 0; i < np; ++i) {
    g.point(i, x);
    for (int c = 0; c < dim; ++c) p[c] = x[c] + inv.displacement.comp[c].v[i];
    feval.value(p, val);
    for (int c = 0; c < dim; ++c) out.comp[c].v[i] = val[c];
  }
  return out;
}

}  // namespace pvl
