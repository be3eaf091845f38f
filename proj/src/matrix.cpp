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

#include "tzsl/matrix.hpp"

#include <cmath>
#include <string>

namespace tzsl {
namespace {

// Below this many flops/elements the OpenMP fork-join overhead dominates.
constexpr long long kParallelCutoff = 1 << 15;

std::string shape_str(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw shape_error(std::string(op) + ": shape mismatch " + shape_str(a) +
                      " vs " + shape_str(b));
  }
}

}  // namespace

Matrix::Matrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      values_(static_cast<std::size_t>(rows) * cols, 0.0) {}

Matrix::Matrix(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(rows) * cols) {
    throw shape_error("Matrix: " + std::to_string(values_.size()) +
                      " values for shape " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::filled(int rows, int cols, double value) {
  Matrix m(rows, cols);
  for (auto& v : m.values_) v = value;
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw shape_error("matmul: inner dimensions differ, " + shape_str(a) +
                      " * " + shape_str(b));
  }
  Matrix out(a.rows(), b.cols());
  const int n = a.rows(), inner = a.cols(), m = b.cols();
  const long long work = 2LL * n * inner * m;
#pragma omp parallel for schedule(static) if (work > kParallelCutoff)
  for (int i = 0; i < n; ++i) {
    const double* arow = a.row(i);
    double* orow = out.row(i);
    for (int k = 0; k < inner; ++k) {
      const double aik = arow[k];
      const double* brow = b.row(k);
      for (int j = 0; j < m; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& x) {
  Matrix out(x.cols(), x.rows());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) out(j, i) = x(i, j);
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix out(a.rows(), a.cols());
  const long long n = static_cast<long long>(a.size());
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
#pragma omp parallel for schedule(static) if (n > kParallelCutoff)
  for (long long i = 0; i < n; ++i) po[i] = pa[i] * pb[i];
  return out;
}

Matrix relu(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  const long long n = static_cast<long long>(x.size());
  const double* px = x.data();
  double* po = out.data();
#pragma omp parallel for schedule(static) if (n > kParallelCutoff)
  for (long long i = 0; i < n; ++i) po[i] = px[i] > 0.0 ? px[i] : 0.0;
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "sub");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

Matrix scale(const Matrix& x, double s) {
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out.data()[i] = x.data()[i] * s;
  return out;
}

void add_scaled(Matrix& acc, const Matrix& x, double s) {
  require_same_shape(acc, x, "add_scaled");
  for (std::size_t i = 0; i < x.size(); ++i) acc.data()[i] += s * x.data()[i];
}

Matrix col_sums(const Matrix& x) {
  Matrix out(1, x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) out(0, j) += x(i, j);
  return out;
}

double max_abs(const Matrix& x) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::fabs(x.data()[i]);
    if (a > m) m = a;
  }
  return m;
}

Matrix row_l2_normalize(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  const int rows = x.rows(), cols = x.cols();
#pragma omp parallel for schedule(static) \
    if (static_cast<long long>(rows) * cols > kParallelCutoff)
  for (int i = 0; i < rows; ++i) {
    const double* xr = x.row(i);
    double* orow = out.row(i);
    double sq = 0.0;
    for (int j = 0; j < cols; ++j) sq += xr[j] * xr[j];
    if (sq > 0.0) {
      const double inv = 1.0 / std::sqrt(sq);
      for (int j = 0; j < cols; ++j) orow[j] = xr[j] * inv;
    } else {
      // Zero rows pass through unchanged so degenerate inputs don't abort.
      for (int j = 0; j < cols; ++j) orow[j] = xr[j];
    }
  }
  return out;
}

void check_finite(const Matrix& x, const char* where) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x.data()[i])) {
      throw numeric_error(std::string(where) + ": non-finite entry at index " +
                          std::to_string(i));
    }
  }
}

void check_finite(double v, const char* where) {
  if (!std::isfinite(v)) {
    throw numeric_error(std::string(where) + ": non-finite value");
  }
}

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw shape_error("serial::matmul: inner dimensions differ");
  }
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix relu(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) > 0.0 ? x(i, j) : 0.0;
  return out;
}

Matrix row_l2_normalize(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    double sq = 0.0;
    for (int j = 0; j < x.cols(); ++j) sq += x(i, j) * x(i, j);
    const double norm = std::sqrt(sq);
    for (int j = 0; j < x.cols(); ++j)
      out(i, j) = norm > 0.0 ? x(i, j) / norm : x(i, j);
  }
  return out;
}

}  // namespace serial
}  // namespace tzsl
