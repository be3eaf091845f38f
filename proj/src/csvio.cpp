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

#include "tzsl/csvio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tzsl {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, const std::string& where) {
  double v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw validation_error(where + ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

long parse_long(std::string_view s, const std::string& where) {
  long v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw validation_error(where + ": not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in, const std::string& name) {
  std::vector<double> values;
  std::string line;
  int rows = 0, cols = -1, lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() && in.eof()) break;
    const auto fields = split_csv(line);
    if (cols == -1) {
      cols = static_cast<int>(fields.size());
    } else if (static_cast<int>(fields.size()) != cols) {
      throw validation_error(name + ":" + std::to_string(lineno) +
                             ": expected " + std::to_string(cols) + " columns, got " +
                             std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      values.push_back(parse_double(f, name + ":" + std::to_string(lineno)));
    }
    ++rows;
  }
  if (rows == 0) throw validation_error(name + ": empty matrix");
  return Matrix(rows, cols, std::move(values));
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& m) {
  std::ostringstream out;
  write_matrix(out, m);
  write_text_file(path, out.str());
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  return read_matrix(in, path.filename().string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw io_error("short write: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tzsl
