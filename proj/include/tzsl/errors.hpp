// Copyright 2026 The tzsl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TZSL_ERRORS_HPP
#define TZSL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tzsl {

// Shape mismatches between matrices (also used for dimension chaining).
struct shape_error : std::invalid_argument {
  explicit shape_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Bad inputs: broken files, violated dataset invariants, out-of-range config.
struct validation_error : std::runtime_error {
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN/Inf where a finite value is required.
struct numeric_error : std::runtime_error {
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failures (unwritable directory, short write).
struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tzsl

#endif  // TZSL_ERRORS_HPP
