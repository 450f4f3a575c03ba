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
#ifndef PVL_ERRORS_HPP
#define PVL_ERRORS_HPP

#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace pvl {

/// Base class for all pvl errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad parameters, grid mismatches, out-of-range q, malformed batteries.
struct InvalidArgument : Error {
  using Error::Error;
};

/// Runtime numerical failure: non-finite data, CFL violation, blow-up,
/// fixed-point non-convergence, displacement outside the certified regime.
struct NumericError : Error {
  using Error::Error;
};

/// Scenario configuration problems, with source location when known.
struct ConfigError : Error {
  int line = 0;
  std::string key;
  ConfigError(std::string msg, int line_ = 0, std::string key_ = {})
      : Error(std::move(msg)), line(line_), key(std::move(key_)) {}
};

/// Filesystem / serialization failures.
struct IoError : Error {
  using Error::Error;
};

inline std::string strprintf(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  char buf[1024];
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return std::string(buf);
}

}  // namespace pvl

#endif
