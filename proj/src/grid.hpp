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
#ifndef PVL_GRID_HPP
#define PVL_GRID_HPP

#include <cmath>
#include <cstddef>

#include "errors.hpp"

namespace pvl {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Wrap an angle into [0, 2pi).
inline double wrap_angle(double x) {
  double y = x - kTwoPi * std::floor(x / kTwoPi);
  if (y >= kTwoPi) y -= kTwoPi;  // guards the floor rounding edge
  return y;
}

/// Uniform periodic grid on the N-torus [0,2pi)^N, same resolution on
/// every axis. Storage convention is row-major with the last axis fastest.
struct Grid {
  int dim = 2;  // 2 or 3
  int n = 64;   // points per axis, power of two, >= 8

  Grid() = default;
  Grid(int dim_, int n_) : dim(dim_), n(n_) { validate(); }

  void validate() const {
    if (dim != 2 && dim != 3)
      throw InvalidArgument(strprintf("grid dimension must be 2 or 3, got %d", dim));
    if (n < 8 || (n & (n - 1)) != 0)
      throw InvalidArgument(strprintf("grid resolution must be a power of two >= 8, got %d", n));
  }

  double spacing() const { return kTwoPi / n; }

  std::size_t points() const {
    std::size_t p = 1;
    for (int d = 0; d < dim; ++d) p *= static_cast<std::size_t>(n);
    return p;
  }

  /// Coordinates of the linear index; x must hold at least dim doubles.
  void point(std::size_t idx, double* x) const {
    const double h = spacing();
    for (int d = dim - 1; d >= 0; --d) {
      x[d] = h * static_cast<double>(idx % static_cast<std::size_t>(n));
      idx /= static_cast<std::size_t>(n);
    }
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim == b.dim && a.n == b.n;
  }
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }
};

}  // namespace pvl

#endif
