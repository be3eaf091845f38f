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

#ifndef TZSL_DATASET_HPP
#define TZSL_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tzsl/matrix.hpp"
#include "tzsl/rng.hpp"

namespace tzsl {

/// A zero-shot dataset over pre-extracted features.
///
/// On disk this is a directory of header-less CSV files:
///   classes.csv        class_id,name,split   (split in {seen,unseen};
///                      class_id equals the 0-based row index)
///   attributes.csv     one row of n_a floats per class
///   seen.csv           class_id,f1,...,fd    (labeled training pool)
///   unseen.csv         f1,...,fd             (unlabeled transductive pool)
///   unseen_labels.csv  one class_id per row, aligned with unseen.csv;
///                      optional, opened only by evaluation code
///   seen_test.csv      same schema as seen.csv; optional, used only in the
///                      generalized evaluation setting
struct Dataset {
  Matrix attributes;  // n_c x n_a
  std::vector<std::string> class_names;
  std::vector<int> seen_class_ids;
  std::vector<int> unseen_class_ids;

  Matrix seen_features;  // N_s x d_in
  std::vector<int> seen_labels;

  Matrix unseen_features;  // N x d_in
  std::vector<int> unseen_labels_heldout;  // empty when unavailable

  Matrix seen_test_features;  // optional, empty when absent
  std::vector<int> seen_test_labels;

  int n_classes() const { return attributes.rows(); }
  int n_attrs() const { return attributes.cols(); }
  int n_seen() const { return static_cast<int>(seen_class_ids.size()); }
  int n_unseen() const { return static_cast<int>(unseen_class_ids.size()); }
  int d_in() const { return seen_features.cols(); }
  bool has_heldout_labels() const { return !unseen_labels_heldout.empty(); }
  bool has_seen_test() const { return !seen_test_features.empty(); }

  // Checks split disjointness, label membership and row alignment.
  void validate() const;
};

/// Recipe for the synthetic generator: features of a class are a fixed
/// linear map of its true attribute signature plus Gaussian cluster noise,
/// so the attribute-to-visual alignment the pipeline assumes holds by
/// construction. The signatures written to the dataset can optionally carry
/// observation noise (attr_noise), mimicking imperfect attribute annotation
/// while features stay tied to the clean signatures.
struct SynthSpec {
  int n_seen = 6;
  int n_unseen = 3;
  int n_attrs = 8;
  int d_in = 16;
  int per_class = 20;       // rows per class in seen.csv / unseen.csv
  int per_class_test = 5;   // rows per seen class in seen_test.csv (0 = omit)
  double sigma = 0.1;       // cluster noise in feature space
  double attr_noise = 0.0;  // observation noise on the stored unseen signatures
  std::uint64_t mixing_seed = 0;  // seeds the attribute->feature map

  void validate() const;
};

/// `with_heldout` controls whether unseen_labels.csv is opened at all;
/// training passes false so held-out labels stay physically unread outside
/// evaluation.
Dataset load_dataset(const std::filesystem::path& dir, bool with_heldout = true);
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);
Dataset gen_synthetic(const SynthSpec& spec, Rng& rng);

}  // namespace tzsl

#endif  // TZSL_DATASET_HPP
