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

#ifndef TZSL_ALIGN_HPP
#define TZSL_ALIGN_HPP

#include <vector>

#include "tzsl/adam.hpp"
#include "tzsl/agae.hpp"
#include "tzsl/matrix.hpp"

namespace tzsl {

/// Mean visual embedding per seen class, re-normalized onto the unit sphere
/// so centers are comparable with semantic rows.
struct CategoryCenters {
  Matrix centers;              // one row per entry of class_ids
  std::vector<int> class_ids;  // ascending seen class ids
  std::vector<int> counts;
};

CategoryCenters category_centers(const Matrix& v_seen, const std::vector<int>& labels,
                                 const std::vector<int>& seen_class_ids);

/// Mean over seen classes of ||center_i - s[class_i]||^2.
double seen_alignment_loss(const CategoryCenters& centers, const SemanticSpace& s);

/// Mean over unseen samples of (1 - max_j cosine(v_i, s_unseen_j)). Rows are
/// expected unit-norm, so the cosine is a plain dot product. Ties pick the
/// lowest row index.
double unseen_alignment_loss(const Matrix& v_unseen, const Matrix& s_unseen);

double semantic_total_loss(double l_ssa, double l_usa, double omega3);

struct AlignConfig {
  double omega3 = 1e-3;
  double lr = 1e-3;
  bool use_usa = true;
  EmbedKind embed = EmbedKind::Agae;
};

struct AlignEpochStats {
  double l_ssa = 0.0;
  double l_usa = 0.0;  // always reported; only applied when use_usa
  double total = 0.0;
};

/// One full-batch Adam step on the attribute-embedding weights. The visual
/// stage stays frozen: only AgaeParams tensors are touched.
AlignEpochStats train_semantic_epoch(AgaeParams& p, const Matrix& attrs,
                                     const CategoryCenters& centers, const Matrix& v_unseen,
                                     const std::vector<int>& unseen_class_ids,
                                     const AlignConfig& cfg, AdamState& opt);

// Loss + analytic gradients of one full-batch step; shared with the
// gradient-check suite.
struct AlignStepGrads {
  EmbedGrads grads;
  double l_ssa = 0.0;
  double l_usa = 0.0;
};
AlignStepGrads align_step_gradients(const AgaeParams& p, const Matrix& attrs,
                                    const CategoryCenters& centers, const Matrix& v_unseen,
                                    const std::vector<int>& unseen_class_ids,
                                    EmbedKind kind, bool use_usa, double omega3);

}  // namespace tzsl

#endif  // TZSL_ALIGN_HPP
