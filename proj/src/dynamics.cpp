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
#include "dynamics.hpp"

#include <cmath>

namespace pvl {

const char* to_string(PdeForm f) {
  return f == PdeForm::proof_form ? "proof" : "literal";
}

PdeForm pde_form_from_string(const std::string& s) {
  if (s == "proof") return PdeForm::proof_form;
  if (s == "literal") return PdeForm::literal_form;
  throw InvalidArgument(strprintf("unknown pde form '%s'", s.c_str()));
}

void Trajectory::validate() const {
  if (nodes.size() < 9) throw InvalidArgument("trajectory needs K >= 8 intervals");
  if (!(q >= 2.0)) throw InvalidArgument("trajectory requires q >= 2");
  if (!(T > 0.0)) throw InvalidArgument("trajectory requires T > 0");
  const Grid& g = grid();
  for (const auto& u : nodes) {
    require_same_grid(u.grid, g, "trajectory");
    require_finite(u, "trajectory");
    const double scale = std::max(1.0, max_abs(u));
    if (max_divergence(u) > 1e-10 * scale)
      throw InvalidArgument("trajectory nodes must be divergence-free");
  }
}

VectorField momentum(const VectorField& u, double q) {
  if (!(q >= 2.0)) throw InvalidArgument("momentum requires q >= 2");
  if (q == 2.0) return u;
  VectorField m(u.grid);
  const std::size_t np = u.size();
  const int dim = u.dim();
  for (std::size_t i = 0; i < np; ++i) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += u.comp[d].v[i] * u.comp[d].v[i];
    const double w = norm_weight(std::sqrt(s), q);
    for (int d = 0; d < dim; ++d) m.comp[d].v[i] = w * u.comp[d].v[i];
  }
  return m;
}

VectorField velocity_from_momentum(const VectorField& m, double q) {
  if (!(q >= 2.0)) throw InvalidArgument("velocity_from_momentum requires q >= 2");
  if (q == 2.0) return m;
  VectorField u(m.grid);
  const std::size_t np = m.size();
  const int dim = m.dim();
  const double expo = (2.0 - q) / (q - 1.0);
  for (std::size_t i = 0; i < np; ++i) {
    double s = 0.0;
    for (int d = 0; d < dim; ++d) s += m.comp[d].v[i] * m.comp[d].v[i];
    const double r = std::sqrt(s);
    const double w = (r == 0.0) ? 0.0 : std::pow(r, expo);
    for (int d = 0; d < dim; ++d) u.comp[d].v[i] = w * m.comp[d].v[i];
  }
  return u;
}

std::array<double, 5> stencil5_weights(int pos, double dt) {
  // 4th-order 5-point first-derivative weights (divided by 12 dt).
  static const double tab[5][5] = {
      {-25.0, 48.0, -36.0, 16.0, -3.0},
      {-3.0, -10.0, 18.0, -6.0, 1.0},
      {1.0, -8.0, 0.0, 8.0, -1.0},
      {-1.0, 6.0, -18.0, 10.0, 3.0},
      {3.0, -16.0, 36.0, -48.0, 25.0},
  };
  if (pos < 0 || pos > 4) throw InvalidArgument("stencil5_weights: bad position");
  std::array<double, 5> w;
  for (int i = 0; i < 5; ++i) w[i] = tab[pos][i] / (12.0 * dt);
  return w;
}

namespace {

// d/dt of the node sequence f at node k using the 5-point stencil shifted
// to stay inside the grid (4th order everywhere).
VectorField time_derivative(const std::vector<VectorField>& f, int k, double dt) {
  const int K = static_cast<int>(f.size()) - 1;
  int base = k - 2;
  if (base < 0) base = 0;
  if (base > K - 4) base = K - 4;
  const auto w = stencil5_weights(k - base, dt);
  VectorField out(f[k].grid);
  for (int j = 0; j < 5; ++j) axpy(w[j], f[base + j], out);
  return out;
}

}  // namespace

VectorField raw_residual_at(const Trajectory& traj, const std::vector<VectorField>& mnodes,
                            int k, PdeForm form) {
  if (k < 1 || k > traj.K() - 1) throw InvalidArgument("raw_residual_at: boundary node");
  const double dt = traj.dt();
  VectorField ddt = (form == PdeForm::proof_form)
                        ? time_derivative(mnodes, k, dt)
                        : time_derivative(traj.nodes, k, dt);
  VectorField adv = advect(traj.nodes[k], mnodes[k]);
  VectorField lap = laplacian(mnodes[k]);
  axpy(1.0, adv, ddt);
  axpy(-0.5, lap, ddt);
  return ddt;
}

std::vector<VectorField> momentum_nodes(const Trajectory& traj) {
  std::vector<VectorField> m;
  m.reserve(traj.nodes.size());
  for (const auto& u : traj.nodes) m.push_back(momentum(u, traj.q));
  return m;
}

ElResidual el_residual(const Trajectory& traj, int k, PdeForm form) {
  if (!(traj.q >= 2.0)) throw InvalidArgument("el_residual requires q >= 2");
  const int K = traj.K();
  if (k < 2 || k > K - 2)
    throw InvalidArgument(strprintf("el_residual: node %d is not interior (need 2..%d)", k, K - 2));
  // only the five stencil nodes are needed
  Trajectory window;
  window.T = traj.dt() * 4;
  window.q = traj.q;
  for (int j = k - 2; j <= k + 2; ++j) window.nodes.push_back(traj.nodes[j]);
  std::vector<VectorField> mnodes = momentum_nodes(window);
  ElResidual r;
  r.raw = raw_residual_at(window, mnodes, 2, form);
  r.projected = leray(r.raw);
  return r;
}

ResidualScan residual_scan(const Trajectory& traj, PdeForm form) {
  const int K = traj.K();
  if (K < 4) throw InvalidArgument("residual_scan: trajectory too short");
  std::vector<VectorField> mnodes = momentum_nodes(traj);
  ResidualScan scan;
  for (int k = 2; k <= K - 2; ++k) {
    VectorField raw = raw_residual_at(traj, mnodes, k, form);
    VectorField proj = leray(raw);
    scan.node.push_back(k);
    scan.raw_l2.push_back(l2_norm(raw));
    scan.projected_l2.push_back(l2_norm(proj));
    scan.momentum_l2 = std::max(scan.momentum_l2, l2_norm(mnodes[k]));
  }
  double worst = 0.0;
  for (double r : scan.projected_l2) worst = std::max(worst, r);
  scan.max_projected_rel = worst / std::max(scan.momentum_l2, 1e-300);
  return scan;
}

Trajectory solve_ns(const VectorField& u0, double T, double dt, int output_nodes) {
  require_finite(u0, "solve_ns initial data");
  if (!(T > 0.0) || !(dt > 0.0) || output_nodes < 8)
    throw InvalidArgument("solve_ns: bad time parameters");
  const Grid& g = u0.grid;
  const int dim = g.dim;
  const double node_dt = T / output_nodes;
  const int per_node = static_cast<int>(std::llround(node_dt / dt));
  if (per_node < 1 || std::fabs(per_node * dt - node_dt) > 1e-9 * node_dt)
    throw InvalidArgument("solve_ns: dt must divide T/output_nodes");

  const double nu = 0.5;
  const double scale0 = std::max(1.0, max_abs(u0));
  if (max_divergence(u0) > 1e-10 * scale0)
    throw InvalidArgument("solve_ns: initial field must be divergence-free");

  // spectral state, dealias-truncated
  std::vector<Spectrum> uh;
  for (int d = 0; d < dim; ++d) {
    Spectrum s = forward(u0.comp[d]);
    dealias_inplace(s);
    uh.push_back(std::move(s));
  }

  auto to_physical = [&](const std::vector<Spectrum>& sh) {
    VectorField u(g);
    for (int d = 0; d < dim; ++d) u.comp[d] = inverse(sh[d]);
    return u;
  };

  // N = -P[(u.grad)u], dealiased, zero mode pinned to zero
  auto nonlinear = [&](const std::vector<Spectrum>& sh) {
    VectorField u = to_physical(sh);
    VectorField adv = advect(u, u);
    LerayResult lr = leray_project(adv);
    std::vector<Spectrum> nh;
    for (int d = 0; d < dim; ++d) {
      Spectrum s = forward(lr.projected.comp[d]);
      dealias_inplace(s);
      for (auto& z : s.c) z = -z;
      s.c[0] = 0.0;
      nh.push_back(std::move(s));
    }
    return nh;
  };

  Trajectory traj;
  traj.T = T;
  traj.q = 2.0;
  traj.nodes.reserve(output_nodes + 1);
  traj.nodes.push_back(to_physical(uh));

  std::vector<Spectrum> nprev = nonlinear(uh);
  bool first_step = true;
  const double h = g.spacing();

  for (int node = 0; node < output_nodes; ++node) {
    for (int s = 0; s < per_node; ++s) {
      VectorField u = to_physical(uh);
      require_finite(u, "solve_ns state");
      const double cfl = max_abs(u) * dt / h;
      if (cfl > 0.5)
        throw NumericError(strprintf("solve_ns: CFL violation (%.3f > 0.5)", cfl));

      std::vector<Spectrum> ncur = nonlinear(uh);
      for (int d = 0; d < dim; ++d) {
        for_each_mode(g, [&](std::size_t idx, const int* k) {
          double k2 = 0.0;
          for (int dd = 0; dd < dim; ++dd) k2 += static_cast<double>(k[dd]) * k[dd];
          const double a = 0.5 * nu * k2 * dt;
          const std::complex<double> adv_term =
              first_step ? ncur[d].c[idx]
                         : 1.5 * ncur[d].c[idx] - 0.5 * nprev[d].c[idx];
          uh[d].c[idx] = (uh[d].c[idx] * (1.0 - a) + dt * adv_term) / (1.0 + a);
        });
      }
      nprev = std::move(ncur);
      first_step = false;
    }
    traj.nodes.push_back(to_physical(uh));
  }
  return traj;
}

ExactFamily family_from_string(const std::string& s) {
  if (s == "constant") return ExactFamily::constant;
  if (s == "taylor_green") return ExactFamily::taylor_green;
  if (s == "shear") return ExactFamily::shear;
  throw InvalidArgument(strprintf("unknown exact family '%s'", s.c_str()));
}

const char* to_string(ExactFamily f) {
  switch (f) {
    case ExactFamily::constant: return "constant";
    case ExactFamily::taylor_green: return "taylor_green";
    case ExactFamily::shear: return "shear";
  }
  return "?";
}

namespace {

VectorField taylor_green_field(const Grid& g, double amplitude, double t) {
  if (g.dim != 2) throw InvalidArgument("taylor_green family is two-dimensional");
  const double decay = amplitude * std::exp(-t);
  return VectorField::sample(g, [&](const double* x, double* u) {
    u[0] = decay * std::sin(x[0]) * std::cos(x[1]);
    u[1] = -decay * std::cos(x[0]) * std::sin(x[1]);
  });
}

VectorField shear_field(const Grid& g, double a, double b, double q, double t) {
  if (g.dim != 2) throw InvalidArgument("shear family is two-dimensional");
  const double expo = 1.0 / (q - 1.0);
  const double decay = b * std::exp(-0.5 * t);
  return VectorField::sample(g, [&](const double* x, double* u) {
    const double m = a + decay * std::sin(x[1]);
    u[0] = std::pow(m, expo);
    u[1] = 0.0;
  });
}

}  // namespace

Trajectory exact_family(ExactFamily family, const FamilyParams& params, double q,
                        const Grid& grid, double T, int K) {
  if (!(q >= 2.0)) throw InvalidArgument("exact_family requires q >= 2");
  if (K < 8) throw InvalidArgument("exact_family requires K >= 8");
  Trajectory traj;
  traj.T = T;
  traj.q = q;
  traj.nodes.reserve(K + 1);
  switch (family) {
    case ExactFamily::constant: {
      std::vector<double> c(params.c.begin(), params.c.begin() + grid.dim);
      VectorField u = VectorField::constant(grid, c);
      for (int k = 0; k <= K; ++k) traj.nodes.push_back(u);
      break;
    }
    case ExactFamily::taylor_green: {
      if (q != 2.0)
        throw InvalidArgument("taylor_green solves the q = 2 equation only");
      for (int k = 0; k <= K; ++k)
        traj.nodes.push_back(taylor_green_field(grid, params.amplitude, T * k / K));
      break;
    }
    case ExactFamily::shear: {
      if (!(params.base > std::fabs(params.wave)))
        throw InvalidArgument("shear family requires base > |wave| so the momentum stays positive");
      for (int k = 0; k <= K; ++k)
        traj.nodes.push_back(shear_field(grid, params.base, params.wave, q, T * k / K));
      break;
    }
  }
  return traj;
}

Trajectory frozen_taylor_green(const FamilyParams& params, const Grid& grid, double T, int K) {
  if (K < 8) throw InvalidArgument("frozen_taylor_green requires K >= 8");
  Trajectory traj;
  traj.T = T;
  traj.q = 2.0;
  VectorField u = taylor_green_field(grid, params.amplitude, 0.0);
  traj.nodes.assign(K + 1, u);
  return traj;
}

}  // namespace pvl
