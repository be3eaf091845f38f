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

#include "tzsl/align.hpp"

#include <algorithm>
#include <string>

namespace tzsl {

CategoryCenters category_centers(const Matrix& v_seen, const std::vector<int>& labels,
                                 const std::vector<int>& seen_class_ids) {
  if (static_cast<int>(labels.size()) != v_seen.rows()) {
    throw shape_error("category_centers: label/row count mismatch");
  }
  CategoryCenters out;
  out.class_ids = seen_class_ids;
  std::sort(out.class_ids.begin(), out.class_ids.end());
  out.counts.assign(out.class_ids.size(), 0);
  Matrix sums(static_cast<int>(out.class_ids.size()), v_seen.cols());

  for (int r = 0; r < v_seen.rows(); ++r) {
    const auto it = std::lower_bound(out.class_ids.begin(), out.class_ids.end(), labels[r]);
    if (it == out.class_ids.end() || *it != labels[r]) {
      throw validation_error("category_centers: label " + std::to_string(labels[r]) +
                             " is not a seen class");
    }
    const int slot = static_cast<int>(it - out.class_ids.begin());
    out.counts[slot] += 1;
    for (int c = 0; c < v_seen.cols(); ++c) sums(slot, c) += v_seen(r, c);
  }
  for (std::size_t i = 0; i < out.counts.size(); ++i) {
    if (out.counts[i] == 0) {
      throw validation_error("category_centers: class " + std::to_string(out.class_ids[i]) +
                             " has no samples");
    }
    for (int c = 0; c < sums.cols(); ++c) {
      sums(static_cast<int>(i), c) /= out.counts[i];
    }
  }
  out.centers = row_l2_normalize(sums);
  return out;
}

double seen_alignment_loss(const CategoryCenters& centers, const SemanticSpace& s) {
  if (centers.centers.cols() != s.cols()) {
    throw shape_error("seen_alignment_loss: embedding width mismatch");
  }
  if (centers.class_ids.empty()) {
    throw validation_error("seen_alignment_loss: no seen classes");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < centers.class_ids.size(); ++i) {
    const int id = centers.class_ids[i];
    if (id < 0 || id >= s.rows()) {
      throw validation_error("seen_alignment_loss: class " + std::to_string(id) +
                             " has no semantic row (ordering mismatch)");
    }
    for (int c = 0; c < s.cols(); ++c) {
      const double d = centers.centers(static_cast<int>(i), c) - s(id, c);
      total += d * d;
    }
  }
  return total / static_cast<double>(centers.class_ids.size());
}

double unseen_alignment_loss(const Matrix& v_unseen, const Matrix& s_unseen) {
  if (v_unseen.rows() == 0 || s_unseen.rows() == 0) {
    throw validation_error("unseen_alignment_loss: empty unseen set");
  }
  if (v_unseen.cols() != s_unseen.cols()) {
    throw shape_error("unseen_alignment_loss: embedding width mismatch");
  }
  // Per-row terms land in a buffer and are summed serially, so the result
  // does not depend on the OpenMP thread count.
  std::vector<double> terms(v_unseen.rows());
#pragma omp parallel for schedule(static) if (v_unseen.rows() >= 512)
  for (int i = 0; i < v_unseen.rows(); ++i) {
    double best = -2.0;
    for (int j = 0; j < s_unseen.rows(); ++j) {
      double dot = 0.0;
      for (int c = 0; c < s_unseen.cols(); ++c) dot += v_unseen(i, c) * s_unseen(j, c);
      if (dot > best) best = dot;
    }
    terms[i] = 1.0 - best;
  }
  double total = 0.0;
  for (double t : terms) total += t;
  return total / v_unseen.rows();
}

double semantic_total_loss(double l_ssa, double l_usa, double omega3) {
  return l_ssa + omega3 * l_usa;
}

AlignStepGrads align_step_gradients(const AgaeParams& p, const Matrix& attrs,
                                    const CategoryCenters& centers, const Matrix& v_unseen,
                                    const std::vector<int>& unseen_class_ids,
                                    EmbedKind kind, bool use_usa, double omega3) {
  EmbedTrace trace;
  const SemanticSpace s = embed_forward_traced(p, attrs, kind, trace);

  AlignStepGrads out;
  Matrix d_s(s.rows(), s.cols());

  // Seen term: d/ds_i of mean ||center_i - s_i||^2.
  out.l_ssa = seen_alignment_loss(centers, s);
  const double ssa_coeff = 2.0 / static_cast<double>(centers.class_ids.size());
  for (std::size_t i = 0; i < centers.class_ids.size(); ++i) {
    const int id = centers.class_ids[i];
    for (int c = 0; c < s.cols(); ++c) {
      d_s(id, c) += ssa_coeff * (s(id, c) - centers.centers(static_cast<int>(i), c));
    }
  }

  // Unseen term: each sample pulls only its best-matching semantic row
  // (subgradient through the max; ties go to the lowest class index).
  if (!unseen_class_ids.empty() && v_unseen.rows() > 0) {
    std::vector<int> uids = unseen_class_ids;
    std::sort(uids.begin(), uids.end());
    const int n = v_unseen.rows();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = -2.0;
      int best_id = -1;
      for (int id : uids) {
        double dot = 0.0;
        for (int c = 0; c < s.cols(); ++c) dot += v_unseen(i, c) * s(id, c);
        if (dot > best) {
          best = dot;
          best_id = id;
        }
      }
      total += 1.0 - best;
      if (use_usa) {
        const double coeff = -omega3 / n;
        for (int c = 0; c < s.cols(); ++c) d_s(best_id, c) += coeff * v_unseen(i, c);
      }
    }
    out.l_usa = total / n;
  }

  out.grads = embed_backward(p, attrs, trace, d_s);
  return out;
}

AlignEpochStats train_semantic_epoch(AgaeParams& p, const Matrix& attrs,
                                     const CategoryCenters& centers, const Matrix& v_unseen,
                                     const std::vector<int>& unseen_class_ids,
                                     const AlignConfig& cfg, AdamState& opt) {
  const AlignStepGrads step = align_step_gradients(p, attrs, centers, v_unseen,
                                                   unseen_class_ids, cfg.embed, cfg.use_usa,
                                                   cfg.omega3);

  std::vector<Matrix*> params{&p.w_g, &p.w_f, &p.w_g2, &p.w_g3};
  const Matrix* d_wf = cfg.embed == EmbedKind::Agae ? &step.grads.d_wf : nullptr;
  std::vector<const Matrix*> grads{&step.grads.d_wg, d_wf, &step.grads.d_wg2,
                                   &step.grads.d_wg3};
  opt.lr = cfg.lr;
  opt.apply(params, grads);

  AlignEpochStats stats;
  stats.l_ssa = step.l_ssa;
  stats.l_usa = step.l_usa;
  stats.total = semantic_total_loss(step.l_ssa, cfg.use_usa ? step.l_usa : 0.0, cfg.omega3);
  check_finite(stats.total, "train_semantic_epoch");
  return stats;
}

}  // namespace tzsl
