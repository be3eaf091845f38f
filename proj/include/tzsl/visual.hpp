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

#ifndef TZSL_VISUAL_HPP
#define TZSL_VISUAL_HPP

#include <vector>

#include "tzsl/adam.hpp"
#include "tzsl/matrix.hpp"
#include "tzsl/rng.hpp"

namespace tzsl {

/// Fully-connected network weights; weights[i] is dims[i] x dims[i+1] and
/// biases[i] is a 1 x dims[i+1] row. ReLU between layers, none after the last.
struct MlpParams {
  std::vector<Matrix> weights;
  std::vector<Matrix> biases;

  // Scaled-uniform init in +-sqrt(6/(fan_in+fan_out)); biases start at zero.
  static MlpParams glorot(const std::vector<int>& dims, Rng& rng);

  int in_dim() const { return weights.front().rows(); }
  int out_dim() const { return weights.back().cols(); }
  std::size_t layer_count() const { return weights.size(); }

  std::vector<Matrix*> tensors();  // w0, b0, w1, b1, ...
  std::vector<const Matrix*> tensors() const;

  friend bool operator==(const MlpParams& a, const MlpParams& b) = default;
};

/// Per-layer intermediates recorded during a forward pass.
struct MlpTrace {
  std::vector<Matrix> inputs;  // inputs[i] is what layer i consumed
  std::vector<Matrix> pre;     // pre[i] = inputs[i] * W_i + b_i
};

struct MlpGrads {
  std::vector<Matrix> d_weights;
  std::vector<Matrix> d_biases;

  static MlpGrads zeros_like(const MlpParams& p);
  std::vector<const Matrix*> tensors() const;  // dw0, db0, dw1, db1, ...
};

// Linear layers with ReLU between them; output is the last pre-activation.
Matrix mlp_forward(const MlpParams& p, const Matrix& x, MlpTrace* trace = nullptr);

// Gradient of a scalar loss through the MLP; d_out is dLoss/d(output).
// Accumulates into g and returns dLoss/d(input).
Matrix mlp_backward(const MlpParams& p, const MlpTrace& trace, const Matrix& d_out,
                    MlpGrads& g);

// Backward through v = row_l2_normalize(z). `pre` is z, `normalized` is v.
Matrix row_l2_normalize_backward(const Matrix& pre, const Matrix& normalized,
                                 const Matrix& d_normalized);

Matrix softmax_rows(const Matrix& logits);

/// Embedding net: MLP, ReLU, then row L2 normalization. Embeddings live on
/// the nonnegative part of the unit sphere, the same cone the semantic
/// embedding's final nonlinearity produces, so the two spaces can actually
/// meet during alignment.
Matrix student_forward(const MlpParams& p, const Matrix& x);

/// Classification net: MLP to one logit per seen class, softmax per row.
Matrix classifier_forward(const MlpParams& c, const Matrix& v);

/// Mean cross-entropy of the true class. `label_cols` index classifier
/// columns. Probabilities are clamped at 1e-12 before the log.
double seen_visual_loss(const Matrix& probs, const std::vector<int>& label_cols);

/// x plus elementwise Gaussian noise of the given sigma.
Matrix augment_features(const Matrix& x, double sigma, Rng& rng);

/// Mean over rows of the squared Euclidean distance between the two batches.
double consistency_loss(const Matrix& s_out, const Matrix& t_out);

/// Gaussian ramp-up for the unlabeled-loss weight:
/// w_max * exp(-5 (1-t)^2) with t = min(epoch / ramp_epochs, 1).
struct RampSchedule {
  double w_max = 1.0;
  int ramp_epochs = 30;
};
double ramp_weight(const RampSchedule& sch, int epoch);

double visual_total_loss(double l_svc, double l_uvc, double omega2);

/// Student/teacher pair plus the seen-class classifier head. The teacher
/// mirrors the student's shapes and is never trained by gradient; it tracks
/// the student by exponential moving average.
struct MeanTeacherState {
  MlpParams student;
  MlpParams teacher;
  MlpParams classifier;
  double omega1 = 0.95;
  AdamState opt;  // moments over student tensors then classifier tensors
  int epoch = 0;

  static MeanTeacherState init(int d_in, const std::vector<int>& hidden, int d_v,
                               int n_seen_classes, double omega1, double lr, Rng& rng);

  std::vector<Matrix*> trainable();  // student tensors then classifier tensors
};

/// teacher <- omega1 * teacher + (1 - omega1) * student, every entry.
void ema_update(MeanTeacherState& state);

struct VisualTrainConfig {
  int batch_seen = 64;
  int batch_unseen = 64;
  double aug_sigma = 0.05;
  int aug_per_sample = 1;
  RampSchedule ramp;
  bool uvc = true;  // unseen consistency constraint on/off
};

struct VisualEpochStats {
  double l_svc = 0.0;
  double l_uvc = 0.0;
  double omega2 = 0.0;
  double train_acc = 0.0;
};

/// One pass over the seen pool in mixed batches (one labeled seen batch plus
/// one unlabeled unseen batch per step). Applies Adam to student+classifier
/// and an EMA update to the teacher after every step.
VisualEpochStats train_visual_epoch(MeanTeacherState& state, const Matrix& seen_x,
                                    const std::vector<int>& seen_label_cols,
                                    const Matrix& unseen_x, const VisualTrainConfig& cfg,
                                    Rng& rng);

/// Final embeddings come from the student network only.
Matrix embed_all(const MeanTeacherState& state, const Matrix& x);

// Shared by the trainer and the gradient-check suite: losses of one mixed
// step and their analytic gradients. t_targets holds one teacher output
// batch per augmentation draw.
struct VisualStepGrads {
  MlpGrads student;
  MlpGrads classifier;
  double l_svc = 0.0;
  double l_uvc = 0.0;
  long correct = 0;  // argmax hits on the seen batch
};
VisualStepGrads visual_step_gradients(const MlpParams& student, const MlpParams& classifier,
                                      const Matrix& seen_x, const std::vector<int>& label_cols,
                                      const Matrix& unseen_x,
                                      const std::vector<Matrix>& t_targets, double omega2);

}  // namespace tzsl

#endif  // TZSL_VISUAL_HPP
