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

#ifndef TZSL_EVAL_HPP
#define TZSL_EVAL_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tzsl/agae.hpp"
#include "tzsl/dataset.hpp"
#include "tzsl/matrix.hpp"
#include "tzsl/visual.hpp"

namespace tzsl {

/// Per-class accuracies and their unweighted mean; the harmonic-mean fields
/// are present only in the generalized setting.
struct EvalReport {
  std::string setting;  // "czsl" or "gzsl"
  std::map<int, double> per_class_acc;
  double mca = 0.0;
  std::optional<double> mca_s;
  std::optional<double> mca_u;
  std::optional<double> h;
};

/// Per sample, the candidate class whose semantic row has maximum cosine
/// similarity; ties resolve to the lowest class id.
std::vector<int> nn_classify(const Matrix& v, const SemanticSpace& s,
                             const std::vector<int>& candidate_ids);

/// Per-class accuracy over eval_classes and their unweighted mean.
std::pair<std::map<int, double>, double> mca(const std::vector<int>& preds,
                                             const std::vector<int>& truth,
                                             const std::vector<int>& eval_classes);

/// H = 2 * mca_u * mca_s / (mca_u + mca_s); defined as 0 when either side is
/// 0 (warns when both are).
double harmonic_mean(double mca_u, double mca_s);

/// Conventional setting: unseen pool classified against unseen classes only.
EvalReport eval_conventional(const MeanTeacherState& state, const AgaeParams& params,
                             EmbedKind kind, const Dataset& ds);

/// Generalized setting: seen-test and unseen pools classified against all
/// classes; reports MCA_s, MCA_u and H.
EvalReport eval_generalized(const MeanTeacherState& state, const AgaeParams& params,
                            EmbedKind kind, const Dataset& ds);

/// CSV dump of unseen visual embeddings (tagged with held-out labels) and
/// unseen semantic rows (tagged with class ids) for external plotting.
void export_embeddings(const MeanTeacherState& state, const AgaeParams& params,
                       EmbedKind kind, const Dataset& ds,
                       const std::filesystem::path& path);

void write_report(const EvalReport& report, const std::filesystem::path& path);

}  // namespace tzsl

#endif  // TZSL_EVAL_HPP
