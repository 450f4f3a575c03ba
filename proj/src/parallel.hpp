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
#ifndef PVL_PARALLEL_HPP
#define PVL_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace pvl {

/// Worker cap: PVL_THREADS env var, overridable at runtime; 0 restores the
/// environment/hardware default.
int max_threads();
void set_max_threads(int n);

/// Run fn(i) for i in [begin, end) on up to max_threads() workers with a
/// static block partition. Bodies must write only to their own slots;
/// every reduction in pvl happens sequentially afterwards, so results are
/// bitwise independent of the worker count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

}  // namespace pvl

#endif
