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
#ifndef PVL_TESTS_SUPPORT_HPP
#define PVL_TESTS_SUPPORT_HPP

#include <cmath>

#include "rng.hpp"
#include "spectral.hpp"

namespace pvl_test {

using namespace pvl;

/// Random band-limited scalar field: real trigonometric polynomial with
/// modes |k_d| <= kmax, coefficients ~ N(0,1) scaled by `amp`, plus a
/// constant `offset`.
inline ScalarField random_scalar(const Grid& g, int kmax, double amp, double offset,
                                 RngStream& rng) {
  Spectrum s{g};
  const int n = g.n;
  for_each_mode(g, [&](std::size_t idx, const int* k) {
    bool keep = true, zero = true;
    for (int d = 0; d < g.dim; ++d) {
      if (std::abs(k[d]) > kmax) keep = false;
      if (k[d] != 0) zero = false;
      if (std::abs(k[d]) == n / 2) keep = false;
    }
    if (!keep || zero) return;
    double a, b;
    rng.gaussian_pair(a, b);
    s.c[idx] = std::complex<double>(a, b) * (amp / (2.0 * kmax + 1.0));
  });
  // enforce conjugate symmetry by round-tripping through physical space
  s.c[0] = offset;
  ScalarField f = inverse(s);
  return f;
}

/// Random smooth divergence-free field: a solenoidal fluctuation scaled to
/// sup norm `amp` plus a constant offset (itself divergence-free). With
/// ||offset|| > amp the field norm stays bounded away from zero, which the
/// non-polynomial momentum weights need for spectral accuracy.
inline VectorField random_divfree(const Grid& g, int kmax, double amp,
                                  const double* offset, RngStream& rng) {
  VectorField u(g);
  for (int d = 0; d < g.dim; ++d) u.comp[d] = random_scalar(g, kmax, 1.0, 0.0, rng);
  VectorField sol = leray(u);
  const double sup = max_abs(pointwise_norm(sol));
  const double scale = sup > 0.0 ? amp / sup : 0.0;
  for (int d = 0; d < g.dim; ++d)
    for (auto& x : sol.comp[d].v) x = scale * x + offset[d];
  return sol;
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
  return max_abs(a - b);
}

}  // namespace pvl_test

#endif
