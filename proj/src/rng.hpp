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
#ifndef PVL_RNG_HPP
#define PVL_RNG_HPP

#include <cmath>
#include <cstdint>

namespace pvl {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mix a master seed with a stream tag; used to derive independent
/// per-sample streams by counter so results never depend on execution
/// order or thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
  (void)splitmix64(s);
  (void)splitmix64(s);
  return s;
}

/// Deterministic stream of uniforms / gaussians (splitmix64 + Box-Muller).
/// Gaussians are always drawn in pairs so the stream layout is fixed.
class RngStream {
 public:
  RngStream(std::uint64_t master, std::uint64_t tag) : state_(derive_seed(master, tag)) {}

  double uniform() {  // in (0,1)
    const std::uint64_t r = splitmix64(state_);
    return (static_cast<double>(r >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  void gaussian_pair(double& a, double& b) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    a = r * std::cos(2.0 * M_PI * u2);
    b = r * std::sin(2.0 * M_PI * u2);
  }

  /// Fill `out` with `count` standard gaussians (consumes ceil(count/2) pairs).
  void gaussians(double* out, int count) {
    int i = 0;
    while (i + 1 < count) {
      gaussian_pair(out[i], out[i + 1]);
      i += 2;
    }
    if (i < count) {
      double spare;
      gaussian_pair(out[i], spare);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace pvl

#endif
