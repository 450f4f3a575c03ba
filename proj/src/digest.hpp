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
#ifndef PVL_DIGEST_HPP
#define PVL_DIGEST_HPP

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>

#include "dynamics.hpp"

namespace pvl {

struct Fnv1a {
  std::uint64_t h = 14695981039346656037ULL;
  void update(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  }
  void update(double x) { update(&x, sizeof(x)); }
  std::string hex() const {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

inline std::string trajectory_digest(const Trajectory& traj) {
  Fnv1a d;
  d.update(traj.T);
  d.update(traj.q);
  const std::int64_t meta[3] = {traj.grid().dim, traj.grid().n, traj.K()};
  d.update(meta, sizeof(meta));
  for (const auto& u : traj.nodes)
    for (const auto& c : u.comp) d.update(c.v.data(), c.v.size() * sizeof(double));
  return d.hex();
}

}  // namespace pvl

#endif
