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
#include "spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace pvl {

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// Plans are cached per (dim, n). Creation is serialized; execution goes
// through the new-array interface, which is thread-safe on distinct
// buffers. FFTW_UNALIGNED lets the plans run on plain std::vector storage.
std::map<std::pair<int, int>, PlanPair> g_plans;
std::mutex g_plan_mutex;

const PlanPair& plans_for(const Grid& g) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(g.dim, g.n);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;

  std::vector<int> dims(g.dim, g.n);
  const std::size_t nreal = g.points();
  const std::size_t ncplx = spectrum_size(g);
  std::vector<double> rbuf(nreal);
  std::vector<std::complex<double>> cbuf(ncplx);
  PlanPair p;
  p.fwd = fftw_plan_dft_r2c(g.dim, dims.data(), rbuf.data(),
                            reinterpret_cast<fftw_complex*>(cbuf.data()),
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.bwd = fftw_plan_dft_c2r(g.dim, dims.data(),
                            reinterpret_cast<fftw_complex*>(cbuf.data()), rbuf.data(),
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.fwd || !p.bwd) throw NumericError("fftw plan creation failed");
  return g_plans.emplace(key, p).first->second;
}

}  // namespace

Spectrum::Spectrum(const Grid& g) : grid(g), c(spectrum_size(g), {0.0, 0.0}) {}

std::size_t spectrum_size(const Grid& g) {
  std::size_t s = static_cast<std::size_t>(g.n / 2 + 1);
  for (int d = 0; d < g.dim - 1; ++d) s *= static_cast<std::size_t>(g.n);
  return s;
}

Spectrum forward(const ScalarField& f) {
  require_finite(f, "spectral transform");
  const PlanPair& p = plans_for(f.grid);
  std::vector<double> scratch = f.v;  // r2c may clobber its input
  Spectrum out(f.grid);
  fftw_execute_dft_r2c(p.fwd, scratch.data(),
                       reinterpret_cast<fftw_complex*>(out.c.data()));
  const double scale = 1.0 / static_cast<double>(f.grid.points());
  for (auto& z : out.c) z *= scale;
  return out;
}

ScalarField inverse(const Spectrum& s) {
  const PlanPair& p = plans_for(s.grid);
  std::vector<std::complex<double>> scratch = s.c;  // c2r clobbers its input
  ScalarField out(s.grid);
  fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(scratch.data()),
                       out.v.data());
  return out;
}

Spectrum derivative(const Spectrum& s, int axis) {
  if (axis < 0 || axis >= s.grid.dim) throw InvalidArgument("derivative: bad axis");
  const int nyq = s.grid.n / 2;
  Spectrum out = s;
  for_each_mode(s.grid, [&](std::size_t idx, const int* k) {
    if (k[axis] == nyq || k[axis] == -nyq) {
      out.c[idx] = 0.0;
    } else {
      out.c[idx] *= std::complex<double>(0.0, static_cast<double>(k[axis]));
    }
  });
  return out;
}

ScalarField derivative(const ScalarField& f, int axis) {
  return inverse(derivative(forward(f), axis));
}

VectorField gradient(const ScalarField& f) {
  Spectrum s = forward(f);
  VectorField out(f.grid);
  for (int d = 0; d < f.grid.dim; ++d) out.comp[d] = inverse(derivative(s, d));
  return out;
}

ScalarField divergence(const VectorField& u) {
  Spectrum acc(u.grid);
  for (int d = 0; d < u.dim(); ++d) {
    Spectrum dd = derivative(forward(u.comp[d]), d);
    for (std::size_t i = 0; i < acc.c.size(); ++i) acc.c[i] += dd.c[i];
  }
  return inverse(acc);
}

namespace {
void laplacian_inplace(Spectrum& s) {
  for_each_mode(s.grid, [&](std::size_t idx, const int* k) {
    double k2 = 0.0;
    for (int d = 0; d < s.grid.dim; ++d) k2 += static_cast<double>(k[d]) * k[d];
    s.c[idx] *= -k2;
  });
}
}  // namespace

ScalarField laplacian(const ScalarField& f) {
  Spectrum s = forward(f);
  laplacian_inplace(s);
  return inverse(s);
}

VectorField laplacian(const VectorField& u) {
  VectorField out(u.grid);
  for (int d = 0; d < u.dim(); ++d) out.comp[d] = laplacian(u.comp[d]);
  return out;
}

void dealias_inplace(Spectrum& s) {
  const int kcut = s.grid.n / 3;
  for_each_mode(s.grid, [&](std::size_t idx, const int* k) {
    for (int d = 0; d < s.grid.dim; ++d) {
      if (k[d] > kcut || k[d] < -kcut) {
        s.c[idx] = 0.0;
        return;
      }
    }
  });
}

ScalarField dealias(const ScalarField& f) {
  Spectrum s = forward(f);
  dealias_inplace(s);
  return inverse(s);
}

VectorField dealias(const VectorField& u) {
  VectorField out(u.grid);
  for (int d = 0; d < u.dim(); ++d) out.comp[d] = dealias(u.comp[d]);
  return out;
}

VectorField advect(const VectorField& u, const VectorField& w) {
  require_same_grid(u.grid, w.grid, "advect");
  const int dim = u.dim();

  VectorField ud(u.grid);
  for (int d = 0; d < dim; ++d) {
    Spectrum s = forward(u.comp[d]);
    dealias_inplace(s);
    ud.comp[d] = inverse(s);
  }

  VectorField out(u.grid);
  for (int i = 0; i < dim; ++i) {
    Spectrum wi = forward(w.comp[i]);
    dealias_inplace(wi);
    std::vector<double> acc(u.size(), 0.0);
    for (int j = 0; j < dim; ++j) {
      ScalarField dwij = inverse(derivative(wi, j));
      for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += ud.comp[j].v[p] * dwij.v[p];
    }
    ScalarField prod(u.grid);
    prod.v = std::move(acc);
    Spectrum ps = forward(prod);
    dealias_inplace(ps);
    out.comp[i] = inverse(ps);
  }
  return out;
}

VectorField lie_bracket(const VectorField& u, const VectorField& v) {
  require_same_grid(u.grid, v.grid, "lie_bracket");
  return advect(u, v) - advect(v, u);
}

LerayResult leray_project(const VectorField& u) {
  const int dim = u.dim();
  const int nyq = u.grid.n / 2;
  std::vector<Spectrum> su;
  su.reserve(dim);
  for (int d = 0; d < dim; ++d) su.push_back(forward(u.comp[d]));

  Spectrum pot(u.grid);
  for_each_mode(u.grid, [&](std::size_t idx, const int* k) {
    double k2 = 0.0;
    bool zero_mode = true, has_nyquist = false;
    for (int d = 0; d < dim; ++d) {
      k2 += static_cast<double>(k[d]) * k[d];
      if (k[d] != 0) zero_mode = false;
      if (k[d] == nyq || k[d] == -nyq) has_nyquist = true;
    }
    if (zero_mode) return;  // mean preserved, no potential
    if (has_nyquist) {
      for (int d = 0; d < dim; ++d) su[d].c[idx] = 0.0;
      return;
    }
    std::complex<double> kdotu(0.0, 0.0);
    for (int d = 0; d < dim; ++d) kdotu += static_cast<double>(k[d]) * su[d].c[idx];
    for (int d = 0; d < dim; ++d) su[d].c[idx] -= static_cast<double>(k[d]) * kdotu / k2;
    pot.c[idx] = std::complex<double>(0.0, -1.0) * kdotu / k2;
  });

  LerayResult r;
  r.projected = VectorField(u.grid);
  for (int d = 0; d < dim; ++d) r.projected.comp[d] = inverse(su[d]);
  r.potential = inverse(pot);
  return r;
}

VectorField leray(const VectorField& u) { return leray_project(u).projected; }

double max_divergence(const VectorField& u) { return max_abs(divergence(u)); }

}  // namespace pvl
