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

#ifndef TZSL_GRADCHECK_HPP
#define TZSL_GRADCHECK_HPP

#include <algorithm>
#include <cmath>
#include <functional>

#include "tzsl/matrix.hpp"

namespace tzsl {

using ScalarFn = std::function<double(const Matrix&)>;

/// Central-difference gradient estimate of a scalar-valued function,
/// (f(x + h e_ij) - f(x - h e_ij)) / 2h per entry. This is the independent
/// oracle every hand-derived gradient in the repository is checked against.
inline Matrix finite_difference_gradient(const ScalarFn& f, Matrix x, double step) {
  if (!(step > 0.0)) {
    throw validation_error("finite_difference_gradient: step must be > 0");
  }
  Matrix grad(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      const double orig = x(i, j);
      x(i, j) = orig + step;
      const double fp = f(x);
      x(i, j) = orig - step;
      const double fm = f(x);
      x(i, j) = orig;
      if (!std::isfinite(fp) || !std::isfinite(fm)) {
        throw numeric_error("finite_difference_gradient: non-finite f evaluation");
      }
      grad(i, j) = (fp - fm) / (2.0 * step);
    }
  }
  return grad;
}

/// max|a - b| scaled by the larger gradient magnitude. The 1e-5 floor keeps
/// identically-zero gradients from amplifying central-difference rounding
/// noise (~|f|*eps/step ~ 1e-11) into a spurious relative error; genuine
/// gradients in this codebase are orders of magnitude above it.
inline double gradient_relative_error(const Matrix& analytic, const Matrix& fd) {
  if (!analytic.same_shape(fd)) {
    throw shape_error("gradient_relative_error: shape mismatch");
  }
  double num = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    num = std::max(num, std::fabs(analytic.data()[i] - fd.data()[i]));
  }
  const double den = std::max({max_abs(analytic), max_abs(fd), 1e-5});
  return num / den;
}

}  // namespace tzsl

#endif  // TZSL_GRADCHECK_HPP
