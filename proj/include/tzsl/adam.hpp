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

#ifndef TZSL_ADAM_HPP
#define TZSL_ADAM_HPP

#include <cmath>
#include <vector>

#include "tzsl/matrix.hpp"

namespace tzsl {

/// Adam with bias correction. Constant learning rate; moments are kept per
/// parameter tensor in caller-defined order.
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long long step = 0;
  std::vector<Matrix> m;
  std::vector<Matrix> v;

  void reset_moments(const std::vector<Matrix*>& params) {
    m.clear();
    v.clear();
    for (const Matrix* p : params) {
      m.emplace_back(p->rows(), p->cols());
      v.emplace_back(p->rows(), p->cols());
    }
  }

  /// One optimizer step over all tensors. grads[i] may be null to skip a
  /// tensor (its moments still exist but are untouched).
  void apply(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads) {
    if (m.size() != params.size()) reset_moments(params);
    ++step;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (std::size_t t = 0; t < params.size(); ++t) {
      if (grads[t] == nullptr) continue;
      Matrix& p = *params[t];
      const Matrix& g = *grads[t];
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double gi = g.data()[i];
        double& mi = m[t].data()[i];
        double& vi = v[t].data()[i];
        mi = beta1 * mi + (1.0 - beta1) * gi;
        vi = beta2 * vi + (1.0 - beta2) * gi * gi;
        const double mhat = mi / c1;
        const double vhat = vi / c2;
        p.data()[i] -= lr * mhat / (std::sqrt(vhat) + eps);
      }
    }
  }
};

}  // namespace tzsl

#endif  // TZSL_ADAM_HPP
