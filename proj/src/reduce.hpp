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
#ifndef PVL_REDUCE_HPP
#define PVL_REDUCE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"

namespace pvl {

// Fixed-order pairwise summation: accurate and bitwise reproducible
// independent of thread count (all reductions in pvl run sequentially).
inline double pairwise_sum(const double* p, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(p, half) + pairwise_sum(p + half, n - half);
}

inline double pairwise_sum(std::span<const double> v) {
  return pairwise_sum(v.data(), v.size());
}

inline double mean(std::span<const double> v) {
  if (v.empty()) throw InvalidArgument("mean of empty range");
  return pairwise_sum(v) / static_cast<double>(v.size());
}

/// Composite Simpson rule on a uniform grid of `f.size()-1` intervals.
/// Odd interval counts are closed with a 3/8 tail.
inline double simpson(std::span<const double> f, double dt) {
  const std::size_t m = f.size() >= 1 ? f.size() - 1 : 0;
  if (m < 2) throw InvalidArgument("simpson needs at least 2 intervals");
  std::vector<double> terms;
  terms.reserve(f.size());
  std::size_t even_part = (m % 2 == 0) ? m : m - 3;
  if (m % 2 != 0 && m < 3) throw InvalidArgument("simpson: bad interval count");
  for (std::size_t i = 0; i + 2 <= even_part; i += 2) {
    terms.push_back(dt / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]));
  }
  if (m % 2 != 0) {
    const std::size_t i = even_part;
    terms.push_back(3.0 * dt / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]));
  }
  return pairwise_sum(terms);
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample standard error, ddof = 1
};

inline MeanStderr mean_and_stderr(std::span<const double> v) {
  MeanStderr r;
  if (v.empty()) throw InvalidArgument("mean_and_stderr of empty range");
  // identical samples have exactly zero variance; the naive formula would
  // report ulp-level noise from the rounded mean
  bool all_equal = true;
  for (double x : v)
    if (x != v.front()) {
      all_equal = false;
      break;
    }
  if (all_equal) {
    r.mean = v.front();
    return r;
  }
  r.mean = mean(v);
  if (v.size() < 2) return r;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - r.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(v.size() - 1);
  r.stderr_ = std::sqrt(var / static_cast<double>(v.size()));
  return r;
}

}  // namespace pvl

#endif
