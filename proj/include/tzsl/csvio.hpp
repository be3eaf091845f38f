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

#ifndef TZSL_CSVIO_HPP
#define TZSL_CSVIO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tzsl/matrix.hpp"

namespace tzsl {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Strict parsers; `where` is "file:line" context for error messages.
double parse_double(std::string_view s, const std::string& where);
long parse_long(std::string_view s, const std::string& where);

std::vector<std::string> split_csv(const std::string& line);

// Matrix text form: one row per line, comma-separated, round-trip floats.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in, const std::string& name);

void write_matrix_file(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_file(const std::filesystem::path& path);

// Whole-file helpers used by save/load and the determinism tests.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace tzsl

#endif  // TZSL_CSVIO_HPP
