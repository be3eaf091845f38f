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

#include "tzsl/eval.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

#include "tzsl/csvio.hpp"

namespace tzsl {

std::vector<int> nn_classify(const Matrix& v, const SemanticSpace& s,
                             const std::vector<int>& candidate_ids) {
  if (candidate_ids.empty()) throw validation_error("nn_classify: no candidate classes");
  if (v.cols() != s.cols()) throw shape_error("nn_classify: embedding width mismatch");
  std::vector<int> candidates = candidate_ids;
  std::sort(candidates.begin(), candidates.end());
  for (int id : candidates) {
    if (id < 0 || id >= s.rows()) {
      throw validation_error("nn_classify: candidate class " + std::to_string(id) +
                             " has no semantic row");
    }
  }
  std::vector<int> preds(v.rows());
  // Per-sample search is independent; strict > with ascending candidates
  // keeps ties on the lowest class id regardless of thread count.
#pragma omp parallel for schedule(static) if (v.rows() >= 256)
  for (int i = 0; i < v.rows(); ++i) {
    double best = 0.0;
    int best_id = -1;
    for (int id : candidates) {
      double dot = 0.0;
      for (int c = 0; c < v.cols(); ++c) dot += v(i, c) * s(id, c);
      if (best_id == -1 || dot > best) {
        best = dot;
        best_id = id;
      }
    }
    preds[i] = best_id;
  }
  return preds;
}

std::pair<std::map<int, double>, double> mca(const std::vector<int>& preds,
                                             const std::vector<int>& truth,
                                             const std::vector<int>& eval_classes) {
  if (preds.size() != truth.size()) {
    throw shape_error("mca: prediction/truth length mismatch");
  }
  std::map<int, long> total, hits;
  for (int id : eval_classes) total[id] = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto it = total.find(truth[i]);
    if (it == total.end()) continue;  // outside the evaluated classes
    it->second += 1;
    if (preds[i] == truth[i]) hits[truth[i]] += 1;
  }
  std::map<int, double> per_class;
  double sum = 0.0;
  for (int id : eval_classes) {
    if (total[id] == 0) {
      throw validation_error("mca: class " + std::to_string(id) + " has no samples");
    }
    per_class[id] = static_cast<double>(hits[id]) / total[id];
    sum += per_class[id];
  }
  return {per_class, sum / static_cast<double>(eval_classes.size())};
}

double harmonic_mean(double mca_u, double mca_s) {
  if (mca_u < 0.0 || mca_s < 0.0) {
    throw validation_error("harmonic_mean: accuracies must be >= 0");
  }
  if (mca_u == 0.0 && mca_s == 0.0) {
    std::cerr << "warning: harmonic_mean(0, 0) defined as 0\n";
    return 0.0;
  }
  if (mca_u == 0.0 || mca_s == 0.0) return 0.0;
  return 2.0 * mca_u * mca_s / (mca_u + mca_s);
}

namespace {

void require_heldout(const Dataset& ds) {
  if (!ds.has_heldout_labels()) {
    throw validation_error("evaluation needs unseen_labels.csv (held-out labels)");
  }
}

}  // namespace

EvalReport eval_conventional(const MeanTeacherState& state, const AgaeParams& params,
                             EmbedKind kind, const Dataset& ds) {
  require_heldout(ds);
  const SemanticSpace s = embed_forward(params, ds.attributes, kind);
  const Matrix v = embed_all(state, ds.unseen_features);
  const std::vector<int> preds = nn_classify(v, s, ds.unseen_class_ids);
  EvalReport report;
  report.setting = "czsl";
  std::tie(report.per_class_acc, report.mca) =
      mca(preds, ds.unseen_labels_heldout, ds.unseen_class_ids);
  return report;
}

EvalReport eval_generalized(const MeanTeacherState& state, const AgaeParams& params,
                            EmbedKind kind, const Dataset& ds) {
  require_heldout(ds);
  if (!ds.has_seen_test()) {
    throw validation_error("generalized evaluation needs seen_test.csv");
  }
  const SemanticSpace s = embed_forward(params, ds.attributes, kind);
  std::vector<int> all_ids;
  all_ids.reserve(ds.n_classes());
  for (int i = 0; i < ds.n_classes(); ++i) all_ids.push_back(i);

  EvalReport report;
  report.setting = "gzsl";

  const Matrix vu = embed_all(state, ds.unseen_features);
  const std::vector<int> preds_u = nn_classify(vu, s, all_ids);
  auto [acc_u, mca_u] = mca(preds_u, ds.unseen_labels_heldout, ds.unseen_class_ids);

  const Matrix vs = embed_all(state, ds.seen_test_features);
  const std::vector<int> preds_s = nn_classify(vs, s, all_ids);
  auto [acc_s, mca_s] = mca(preds_s, ds.seen_test_labels, ds.seen_class_ids);

  report.per_class_acc = acc_u;
  report.per_class_acc.insert(acc_s.begin(), acc_s.end());
  report.mca_u = mca_u;
  report.mca_s = mca_s;
  report.h = harmonic_mean(mca_u, mca_s);
  // Headline MCA in the generalized setting is the unweighted mean over all
  // evaluated classes.
  double sum = 0.0;
  for (const auto& [id, acc] : report.per_class_acc) sum += acc;
  report.mca = sum / static_cast<double>(report.per_class_acc.size());
  return report;
}

void export_embeddings(const MeanTeacherState& state, const AgaeParams& params,
                       EmbedKind kind, const Dataset& ds,
                       const std::filesystem::path& path) {
  require_heldout(ds);
  const SemanticSpace s = embed_forward(params, ds.attributes, kind);
  const Matrix v = embed_all(state, ds.unseen_features);
  std::ostringstream out;
  for (int i = 0; i < v.rows(); ++i) {
    out << "visual," << ds.unseen_labels_heldout[i];
    for (int c = 0; c < v.cols(); ++c) out << ',' << format_double(v(i, c));
    out << '\n';
  }
  for (int id : ds.unseen_class_ids) {
    out << "semantic," << id;
    for (int c = 0; c < s.cols(); ++c) out << ',' << format_double(s(id, c));
    out << '\n';
  }
  write_text_file(path, out.str());
}

void write_report(const EvalReport& report, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "setting," << report.setting << '\n';
  out << "mca," << format_double(report.mca) << '\n';
  if (report.mca_s) out << "mca_s," << format_double(*report.mca_s) << '\n';
  if (report.mca_u) out << "mca_u," << format_double(*report.mca_u) << '\n';
  if (report.h) out << "h," << format_double(*report.h) << '\n';
  for (const auto& [id, acc] : report.per_class_acc) {
    out << id << ',' << format_double(acc) << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace tzsl
