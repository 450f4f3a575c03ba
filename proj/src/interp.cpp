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
#include "interp.hpp"

#include <algorithm>
#include <cmath>

namespace pvl {

namespace {
constexpr int kMaxTable = 3 * 64;  // per-axis phase table bound (kmax <= n/2)
}

SpectralEvaluator::SpectralEvaluator(const ScalarField& f, double rel_cutoff) {
  dim_ = f.grid.dim;
  ncomp_ = 1;
  std::vector<Spectrum> spectra;
  spectra.push_back(forward(f));
  build(spectra, rel_cutoff);
}

SpectralEvaluator::SpectralEvaluator(const VectorField& u, double rel_cutoff) {
  dim_ = u.grid.dim;
  ncomp_ = u.dim();
  std::vector<Spectrum> spectra;
  spectra.reserve(ncomp_);
  for (int c = 0; c < ncomp_; ++c) spectra.push_back(forward(u.comp[c]));
  build(spectra, rel_cutoff);
}

void SpectralEvaluator::build(const std::vector<Spectrum>& spectra, double rel_cutoff) {
  const Grid& g = spectra.front().grid;
  const int n = g.n;
  double peak = 0.0;
  for (const auto& s : spectra)
    for (const auto& z : s.c) peak = std::max(peak, std::abs(z));
  const double cutoff = peak * rel_cutoff;

  for_each_mode(g, [&](std::size_t idx, const int* k) {
    double mag = 0.0;
    for (const auto& s : spectra) mag = std::max(mag, std::abs(s.c[idx]));
    if (mag <= cutoff || mag == 0.0) return;
    // Stored entries with 0 < k_last < n/2 stand for a conjugate pair.
    const int klast = k[dim_ - 1];
    const double weight = (klast == 0 || klast == n / 2) ? 1.0 : 2.0;
    for (int d = 0; d < dim_; ++d) {
      k_.push_back(k[d]);
      kmax_[d] = std::max(kmax_[d], std::abs(k[d]));
    }
    for (int c = 0; c < ncomp_; ++c) coef_.push_back(weight * spectra[c].c[idx]);
  });
  nmodes_ = k_.size() / static_cast<std::size_t>(dim_);
  for (int d = 0; d < dim_; ++d)
    if (kmax_[d] >= kMaxTable) throw InvalidArgument("spectral evaluator: resolution too large");
}

void SpectralEvaluator::phase_tables(const double* x, std::complex<double>* tabs) const {
  // tabs is dim_ blocks of (kmax+1) entries: e^{i k x_d}, k = 0..kmax_d.
  std::complex<double>* t = tabs;
  for (int d = 0; d < dim_; ++d) {
    const std::complex<double> w(std::cos(x[d]), std::sin(x[d]));
    t[0] = 1.0;
    for (int k = 1; k <= kmax_[d]; ++k) t[k] = t[k - 1] * w;
    t += kmax_[d] + 1;
  }
}

void SpectralEvaluator::value(const double* x, double* out) const {
  std::complex<double> tabs[3 * (kMaxTable + 1)];
  phase_tables(x, tabs);
  const std::complex<double>* tab[3];
  {
    std::complex<double>* t = tabs;
    for (int d = 0; d < dim_; ++d) {
      tab[d] = t;
      t += kmax_[d] + 1;
    }
  }
  for (int c = 0; c < ncomp_; ++c) out[c] = 0.0;
  const int* kp = k_.data();
  const std::complex<double>* cp = coef_.data();
  for (std::size_t m = 0; m < nmodes_; ++m) {
    std::complex<double> phase(1.0, 0.0);
    for (int d = 0; d < dim_; ++d) {
      const int k = kp[d];
      phase *= (k >= 0) ? tab[d][k] : std::conj(tab[d][-k]);
    }
    for (int c = 0; c < ncomp_; ++c) {
      const std::complex<double> z = cp[c] * phase;
      out[c] += z.real();
    }
    kp += dim_;
    cp += ncomp_;
  }
}

void SpectralEvaluator::value_and_jacobian(const double* x, double* out, double* jac) const {
  std::complex<double> tabs[3 * (kMaxTable + 1)];
  phase_tables(x, tabs);
  const std::complex<double>* tab[3];
  {
    std::complex<double>* t = tabs;
    for (int d = 0; d < dim_; ++d) {
      tab[d] = t;
      t += kmax_[d] + 1;
    }
  }
  for (int c = 0; c < ncomp_; ++c) {
    out[c] = 0.0;
    for (int d = 0; d < dim_; ++d) jac[c * dim_ + d] = 0.0;
  }
  const int* kp = k_.data();
  const std::complex<double>* cp = coef_.data();
  for (std::size_t m = 0; m < nmodes_; ++m) {
    std::complex<double> phase(1.0, 0.0);
    for (int d = 0; d < dim_; ++d) {
      const int k = kp[d];
      phase *= (k >= 0) ? tab[d][k] : std::conj(tab[d][-k]);
    }
    for (int c = 0; c < ncomp_; ++c) {
      const std::complex<double> z = cp[c] * phase;
      out[c] += z.real();
      // d/dx_d adds a factor i k_d: Re(i k z) = -k Im(z).
      for (int d = 0; d < dim_; ++d) jac[c * dim_ + d] -= static_cast<double>(kp[d]) * z.imag();
    }
    kp += dim_;
    cp += ncomp_;
  }
}

}  // namespace pvl
