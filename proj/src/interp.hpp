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
#ifndef PVL_INTERP_HPP
#define PVL_INTERP_HPP

#include <complex>
#include <vector>

#include "spectral.hpp"

namespace pvl {

/// Trigonometric (periodic spectral) interpolation at arbitrary points.
///
/// The evaluator keeps the modes of the field whose magnitude exceeds
/// rel_cutoff times the largest magnitude across components; for
/// band-limited fields this drops only FFT noise, so evaluation agrees
/// with exact spectral interpolation to ~1e-12 relative. Evaluation at a
/// grid point reproduces the nodal value to the same accuracy.
///
/// Immutable after construction; safe for concurrent reads.
class SpectralEvaluator {
 public:
  explicit SpectralEvaluator(const ScalarField& f, double rel_cutoff = 1e-13);
  explicit SpectralEvaluator(const VectorField& u, double rel_cutoff = 1e-13);

  int dim() const { return dim_; }
  int components() const { return ncomp_; }
  std::size_t mode_count() const { return nmodes_; }

  /// out[c] = f_c(x); x has dim coordinates (any real values, periodic).
  void value(const double* x, double* out) const;

  /// Additionally jac[c*dim + d] = d f_c / d x_d.
  void value_and_jacobian(const double* x, double* out, double* jac) const;

 private:
  void build(const std::vector<Spectrum>& spectra, double rel_cutoff);
  void phase_tables(const double* x, std::complex<double>* tabs) const;

  int dim_ = 2;
  int ncomp_ = 1;
  std::size_t nmodes_ = 0;
  int kmax_[3] = {0, 0, 0};
  std::vector<int> k_;                         // nmodes * dim
  std::vector<std::complex<double>> coef_;     // nmodes * ncomp, conjugate weight folded in
};

}  // namespace pvl

#endif
