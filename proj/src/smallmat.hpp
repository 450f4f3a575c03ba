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
#ifndef PVL_SMALLMAT_HPP
#define PVL_SMALLMAT_HPP

#include <cmath>
#include <cstring>

namespace pvl {

// Tiny dense kernels for dim-by-dim (dim = 2 or 3) matrices stored
// row-major in fixed double[9] buffers.

inline void mat_identity(int dim, double* m) {
  for (int i = 0; i < dim * dim; ++i) m[i] = 0.0;
  for (int i = 0; i < dim; ++i) m[i * dim + i] = 1.0;
}

inline void mat_mul(int dim, const double* a, const double* b, double* out) {
  double tmp[9];
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += a[i * dim + k] * b[k * dim + j];
      tmp[i * dim + j] = s;
    }
  std::memcpy(out, tmp, sizeof(double) * dim * dim);
}

inline void mat_vec(int dim, const double* a, const double* x, double* out) {
  double tmp[3];
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += a[i * dim + k] * x[k];
    tmp[i] = s;
  }
  for (int i = 0; i < dim; ++i) out[i] = tmp[i];
}

inline double mat_det(int dim, const double* m) {
  if (dim == 2) return m[0] * m[3] - m[1] * m[2];
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

/// exp(A) by scaled Taylor series; A is small (||A|| = O(dt)) in all pvl
/// uses, where a short series already converges to machine precision.
inline void mat_exp(int dim, const double* a, double* out) {
  double norm = 0.0;
  for (int i = 0; i < dim * dim; ++i) norm = std::max(norm, std::fabs(a[i]));
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  double as[9];
  for (int i = 0; i < dim * dim; ++i) as[i] = a[i] * scale;

  double term[9], acc[9];
  mat_identity(dim, acc);
  mat_identity(dim, term);
  for (int k = 1; k <= 12; ++k) {
    mat_mul(dim, term, as, term);
    for (int i = 0; i < dim * dim; ++i) term[i] /= static_cast<double>(k);
    for (int i = 0; i < dim * dim; ++i) acc[i] += term[i];
  }
  for (int s = 0; s < squarings; ++s) mat_mul(dim, acc, acc, acc);
  std::memcpy(out, acc, sizeof(double) * dim * dim);
}

}  // namespace pvl

#endif
