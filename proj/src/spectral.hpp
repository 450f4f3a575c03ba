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
#ifndef PVL_SPECTRAL_HPP
#define PVL_SPECTRAL_HPP

#include <complex>
#include <utility>
#include <vector>

#include "field.hpp"

namespace pvl {

/// Half-complex (r2c layout) spectrum of a real field, normalized so that
/// c[0] is the grid mean. The last axis stores n/2+1 entries.
struct Spectrum {
  Grid grid;
  std::vector<std::complex<double>> c;

  Spectrum() = default;
  explicit Spectrum(const Grid& g);
};

std::size_t spectrum_size(const Grid& g);

/// Iterate every stored mode; fn(flat_index, k) with k[d] the signed
/// integer wavenumber of axis d (the last axis is always >= 0).
template <class F>
void for_each_mode(const Grid& g, F&& fn) {
  const int n = g.n;
  const int half = n / 2 + 1;
  int k[3] = {0, 0, 0};
  std::size_t idx = 0;
  if (g.dim == 2) {
    for (int j0 = 0; j0 < n; ++j0) {
      k[0] = (j0 <= n / 2) ? j0 : j0 - n;
      for (int j1 = 0; j1 < half; ++j1, ++idx) {
        k[1] = j1;
        fn(idx, k);
      }
    }
  } else {
    for (int j0 = 0; j0 < n; ++j0) {
      k[0] = (j0 <= n / 2) ? j0 : j0 - n;
      for (int j1 = 0; j1 < n; ++j1) {
        k[1] = (j1 <= n / 2) ? j1 : j1 - n;
        for (int j2 = 0; j2 < half; ++j2, ++idx) {
          k[2] = j2;
          fn(idx, k);
        }
      }
    }
  }
}

// ---- transforms ----------------------------------------------------------

/// Forward transform; validates finiteness. Round trip with inverse() is
/// the identity to ~1e-15 relative.
Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

// ---- spectral calculus ---------------------------------------------------

/// d/dx_axis by multiplication with i*k; the Nyquist mode is zeroed.
Spectrum derivative(const Spectrum& s, int axis);
ScalarField derivative(const ScalarField& f, int axis);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& u);

/// Zero all modes with |k_d| > n/3 on any axis (2/3 dealiasing rule).
void dealias_inplace(Spectrum& s);
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& u);

/// (u . grad) w with 2/3-rule dealiasing of the factors and the product.
VectorField advect(const VectorField& u, const VectorField& w);

/// Lie bracket [u,v] = grad_u v - grad_v u.
VectorField lie_bracket(const VectorField& u, const VectorField& v);

/// Leray-Helmholtz decomposition u = proj + grad(potential) with
/// div proj = 0 spectrally. The zero mode stays in proj. Nyquist modes are
/// dropped (the projector is ill-defined there).
struct LerayResult {
  VectorField projected;
  ScalarField potential;
};
LerayResult leray_project(const VectorField& u);

/// Convenience: just the divergence-free part.
VectorField leray(const VectorField& u);

/// max |div u| over the grid, divergence taken spectrally.
double max_divergence(const VectorField& u);

}  // namespace pvl

#endif
