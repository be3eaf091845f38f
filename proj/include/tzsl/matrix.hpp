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

#ifndef TZSL_MATRIX_HPP
#define TZSL_MATRIX_HPP

#include <cstddef>
#include <vector>

#include "tzsl/errors.hpp"

namespace tzsl {

/// Dense row-major matrix of 64-bit floats. The single carrier type for
/// features, weights, attributes and embeddings.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled
  Matrix(int rows, int cols, std::vector<double> values);

  static Matrix identity(int n);
  static Matrix filled(int rows, int cols, double value);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(int r, int c) {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  double* row(int r) { return values_.data() + static_cast<std::size_t>(r) * cols_; }
  const double* row(int r) const {
    return values_.data() + static_cast<std::size_t>(r) * cols_;
  }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  // Exact (bitwise-value) equality; used by determinism and round-trip tests.
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

// All kernels below are pure functions; results are bit-identical for any
// OpenMP thread count because each output element is written by exactly one
// thread with a fixed accumulation order.

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& x);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix relu(const Matrix& x);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& x, double s);
Matrix row_l2_normalize(const Matrix& x);

// acc += s * x
void add_scaled(Matrix& acc, const Matrix& x, double s);

// 1 x cols vector of column sums (bias gradients).
Matrix col_sums(const Matrix& x);

double max_abs(const Matrix& x);

// Throws numeric_error naming `where` if any entry is NaN or Inf.
void check_finite(const Matrix& x, const char* where);
void check_finite(double v, const char* where);

// Serial reference kernels. Plain triple/elementwise loops kept independent
// of the OpenMP implementations above; used by tests and the benchmark only.
namespace serial {
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix relu(const Matrix& x);
Matrix row_l2_normalize(const Matrix& x);
}  // namespace serial

}  // namespace tzsl

#endif  // TZSL_MATRIX_HPP
