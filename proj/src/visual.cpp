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

#include "tzsl/visual.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tzsl {
namespace {

constexpr double kProbFloor = 1e-12;

Matrix gather_rows(const Matrix& x, const std::vector<int>& idx) {
  Matrix out(static_cast<int>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double* src = x.row(idx[i]);
    std::copy(src, src + x.cols(), out.row(static_cast<int>(i)));
  }
  return out;
}

}  // namespace

MlpParams MlpParams::glorot(const std::vector<int>& dims, Rng& rng) {
  if (dims.size() < 2) throw validation_error("MlpParams: need at least one layer");
  MlpParams p;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const double bound = std::sqrt(6.0 / (dims[i] + dims[i + 1]));
    p.weights.push_back(rng.uniform_matrix(dims[i], dims[i + 1], -bound, bound));
    p.biases.emplace_back(1, dims[i + 1]);
  }
  return p;
}

std::vector<Matrix*> MlpParams::tensors() {
  std::vector<Matrix*> t;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    t.push_back(&weights[i]);
    t.push_back(&biases[i]);
  }
  return t;
}

std::vector<const Matrix*> MlpParams::tensors() const {
  std::vector<const Matrix*> t;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    t.push_back(&weights[i]);
    t.push_back(&biases[i]);
  }
  return t;
}

MlpGrads MlpGrads::zeros_like(const MlpParams& p) {
  MlpGrads g;
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    g.d_weights.emplace_back(p.weights[i].rows(), p.weights[i].cols());
    g.d_biases.emplace_back(1, p.biases[i].cols());
  }
  return g;
}

std::vector<const Matrix*> MlpGrads::tensors() const {
  std::vector<const Matrix*> t;
  for (std::size_t i = 0; i < d_weights.size(); ++i) {
    t.push_back(&d_weights[i]);
    t.push_back(&d_biases[i]);
  }
  return t;
}

Matrix mlp_forward(const MlpParams& p, const Matrix& x, MlpTrace* trace) {
  if (x.cols() != p.in_dim()) {
    throw shape_error("mlp_forward: input has " + std::to_string(x.cols()) +
                      " columns, net expects " + std::to_string(p.in_dim()));
  }
  Matrix h = x;
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    if (trace) trace->inputs.push_back(h);
    Matrix pre = matmul(h, p.weights[i]);
    for (int r = 0; r < pre.rows(); ++r) {
      for (int c = 0; c < pre.cols(); ++c) pre(r, c) += p.biases[i](0, c);
    }
    if (trace) trace->pre.push_back(pre);
    h = (i + 1 < p.weights.size()) ? relu(pre) : std::move(pre);
  }
  return h;
}

Matrix mlp_backward(const MlpParams& p, const MlpTrace& trace, const Matrix& d_out,
                    MlpGrads& g) {
  Matrix d = d_out;
  for (int i = static_cast<int>(p.weights.size()) - 1; i >= 0; --i) {
    if (i + 1 < static_cast<int>(p.weights.size())) {
      // d arrived at relu(pre[i]); gate it by the active entries.
      const Matrix& pre = trace.pre[i];
      for (int r = 0; r < d.rows(); ++r) {
        for (int c = 0; c < d.cols(); ++c) {
          if (pre(r, c) <= 0.0) d(r, c) = 0.0;
        }
      }
    }
    add_scaled(g.d_weights[i], matmul(transpose(trace.inputs[i]), d), 1.0);
    add_scaled(g.d_biases[i], col_sums(d), 1.0);
    if (i > 0) d = matmul(d, transpose(p.weights[i]));
  }
  return matmul(d, transpose(p.weights[0]));
}

Matrix row_l2_normalize_backward(const Matrix& pre, const Matrix& normalized,
                                 const Matrix& d_normalized) {
  Matrix d(pre.rows(), pre.cols());
  for (int r = 0; r < pre.rows(); ++r) {
    double sq = 0.0;
    for (int c = 0; c < pre.cols(); ++c) sq += pre(r, c) * pre(r, c);
    if (sq == 0.0) {
      // Forward passed the zero row through unchanged.
      for (int c = 0; c < pre.cols(); ++c) d(r, c) = d_normalized(r, c);
      continue;
    }
    const double inv_norm = 1.0 / std::sqrt(sq);
    double dot = 0.0;
    for (int c = 0; c < pre.cols(); ++c) dot += d_normalized(r, c) * normalized(r, c);
    for (int c = 0; c < pre.cols(); ++c) {
      d(r, c) = (d_normalized(r, c) - dot * normalized(r, c)) * inv_norm;
    }
  }
  return d;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (int r = 0; r < logits.rows(); ++r) {
    double mx = logits(r, 0);
    for (int c = 1; c < logits.cols(); ++c) mx = std::max(mx, logits(r, c));
    double sum = 0.0;
    for (int c = 0; c < logits.cols(); ++c) {
      out(r, c) = std::exp(logits(r, c) - mx);
      sum += out(r, c);
    }
    for (int c = 0; c < logits.cols(); ++c) out(r, c) /= sum;
  }
  return out;
}

Matrix student_forward(const MlpParams& p, const Matrix& x) {
  return row_l2_normalize(relu(mlp_forward(p, x)));
}

Matrix classifier_forward(const MlpParams& c, const Matrix& v) {
  return softmax_rows(mlp_forward(c, v));
}

double seen_visual_loss(const Matrix& probs, const std::vector<int>& label_cols) {
  if (static_cast<int>(label_cols.size()) != probs.rows()) {
    throw shape_error("seen_visual_loss: " + std::to_string(label_cols.size()) +
                      " labels for " + std::to_string(probs.rows()) + " rows");
  }
  double loss = 0.0;
  for (int r = 0; r < probs.rows(); ++r) {
    const int col = label_cols[r];
    if (col < 0 || col >= probs.cols()) {
      throw validation_error("seen_visual_loss: label column " + std::to_string(col) +
                             " out of range");
    }
    const double p = probs(r, col);
    check_finite(p, "seen_visual_loss");
    loss -= std::log(std::max(p, kProbFloor));
  }
  return loss / probs.rows();
}

Matrix augment_features(const Matrix& x, double sigma, Rng& rng) {
  if (sigma < 0.0) throw validation_error("augment_features: sigma must be >= 0");
  Matrix out = x;
  if (sigma == 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += rng.gaussian(0.0, sigma);
  return out;
}

double consistency_loss(const Matrix& s_out, const Matrix& t_out) {
  if (!s_out.same_shape(t_out)) {
    throw shape_error("consistency_loss: shape mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < s_out.size(); ++i) {
    const double d = s_out.data()[i] - t_out.data()[i];
    total += d * d;
  }
  return total / s_out.rows();
}

double ramp_weight(const RampSchedule& sch, int epoch) {
  if (epoch < 0) throw validation_error("ramp_weight: epoch must be >= 0");
  const double t = std::min(1.0, static_cast<double>(epoch) / sch.ramp_epochs);
  return sch.w_max * std::exp(-5.0 * (1.0 - t) * (1.0 - t));
}

double visual_total_loss(double l_svc, double l_uvc, double omega2) {
  return l_svc + omega2 * l_uvc;
}

MeanTeacherState MeanTeacherState::init(int d_in, const std::vector<int>& hidden, int d_v,
                                        int n_seen_classes, double omega1, double lr,
                                        Rng& rng) {
  if (omega1 < 0.0 || omega1 > 1.0) {
    throw validation_error("MeanTeacherState: omega1 must lie in [0,1]");
  }
  MeanTeacherState st;
  std::vector<int> dims{d_in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(d_v);
  st.student = MlpParams::glorot(dims, rng);
  st.teacher = st.student;  // teacher starts as a copy and then trails by EMA
  st.classifier = MlpParams::glorot({d_v, n_seen_classes}, rng);
  st.omega1 = omega1;
  st.opt.lr = lr;
  st.opt.reset_moments(st.trainable());
  return st;
}

std::vector<Matrix*> MeanTeacherState::trainable() {
  std::vector<Matrix*> t = student.tensors();
  const auto c = classifier.tensors();
  t.insert(t.end(), c.begin(), c.end());
  return t;
}

void ema_update(MeanTeacherState& state) {
  const double w = state.omega1;
  const auto src = state.student.tensors();
  const auto dst = state.teacher.tensors();
  for (std::size_t t = 0; t < src.size(); ++t) {
    for (std::size_t i = 0; i < src[t]->size(); ++i) {
      dst[t]->data()[i] = w * dst[t]->data()[i] + (1.0 - w) * src[t]->data()[i];
    }
  }
}

VisualStepGrads visual_step_gradients(const MlpParams& student, const MlpParams& classifier,
                                      const Matrix& seen_x, const std::vector<int>& label_cols,
                                      const Matrix& unseen_x,
                                      const std::vector<Matrix>& t_targets, double omega2) {
  VisualStepGrads out;
  out.student = MlpGrads::zeros_like(student);
  out.classifier = MlpGrads::zeros_like(classifier);

  // Backward through v = row_l2_normalize(relu(z)): undo the normalization,
  // then gate by the clipped entries of z.
  const auto embed_backward_to_z = [](const Matrix& z, const Matrix& a, const Matrix& v,
                                      const Matrix& d_v) {
    Matrix d_a = row_l2_normalize_backward(a, v, d_v);
    for (std::size_t i = 0; i < d_a.size(); ++i) {
      if (z.data()[i] <= 0.0) d_a.data()[i] = 0.0;
    }
    return d_a;
  };

  // Seen branch: cross-entropy through classifier(student(x)).
  if (seen_x.rows() > 0) {
    MlpTrace trace_s;
    const Matrix z = mlp_forward(student, seen_x, &trace_s);
    const Matrix a = relu(z);
    const Matrix v = row_l2_normalize(a);
    MlpTrace trace_c;
    const Matrix logits = mlp_forward(classifier, v, &trace_c);
    const Matrix probs = softmax_rows(logits);
    out.l_svc = seen_visual_loss(probs, label_cols);

    const int batch = probs.rows();
    for (int r = 0; r < batch; ++r) {
      int best = 0;
      for (int c = 1; c < probs.cols(); ++c) {
        if (probs(r, c) > probs(r, best)) best = c;
      }
      if (best == label_cols[r]) ++out.correct;
    }

    Matrix d_logits = scale(probs, 1.0 / batch);
    for (int r = 0; r < batch; ++r) d_logits(r, label_cols[r]) -= 1.0 / batch;
    const Matrix d_v = mlp_backward(classifier, trace_c, d_logits, out.classifier);
    const Matrix d_z = embed_backward_to_z(z, a, v, d_v);
    mlp_backward(student, trace_s, d_z, out.student);
  }

  // Unseen branch: consistency between the student on clean inputs and the
  // teacher on augmented inputs. No gradient flows to the teacher.
  if (omega2 != 0.0 && unseen_x.rows() > 0 && !t_targets.empty()) {
    MlpTrace trace_u;
    const Matrix zu = mlp_forward(student, unseen_x, &trace_u);
    const Matrix au = relu(zu);
    const Matrix su = row_l2_normalize(au);
    Matrix t_mean(su.rows(), su.cols());
    for (const Matrix& t : t_targets) {
      out.l_uvc += consistency_loss(su, t);
      add_scaled(t_mean, t, 1.0 / t_targets.size());
    }
    out.l_uvc /= static_cast<double>(t_targets.size());

    Matrix d_su = sub(su, t_mean);
    const double coeff = omega2 * 2.0 / su.rows();
    d_su = scale(d_su, coeff);
    const Matrix d_zu = embed_backward_to_z(zu, au, su, d_su);
    mlp_backward(student, trace_u, d_zu, out.student);
  }
  return out;
}

VisualEpochStats train_visual_epoch(MeanTeacherState& state, const Matrix& seen_x,
                                    const std::vector<int>& seen_label_cols,
                                    const Matrix& unseen_x, const VisualTrainConfig& cfg,
                                    Rng& rng) {
  const int n_seen = seen_x.rows();
  const int n_unseen = unseen_x.rows();
  if (n_seen == 0) throw validation_error("train_visual_epoch: no seen samples");

  const double omega2 = cfg.uvc ? ramp_weight(cfg.ramp, state.epoch) : 0.0;
  const bool use_unseen = omega2 != 0.0 && n_unseen > 0;

  std::vector<int> seen_order(n_seen);
  std::iota(seen_order.begin(), seen_order.end(), 0);
  rng.shuffle(seen_order);

  std::vector<int> unseen_ring(n_unseen);
  std::iota(unseen_ring.begin(), unseen_ring.end(), 0);
  int ring_pos = n_unseen;  // forces a shuffle before the first draw

  const int batch_seen = std::min(cfg.batch_seen, n_seen);
  const int batch_unseen = std::min(cfg.batch_unseen, std::max(n_unseen, 1));

  VisualEpochStats stats;
  stats.omega2 = omega2;
  long correct = 0;
  double svc_weighted = 0.0, uvc_weighted = 0.0;
  long uvc_rows = 0;

  for (int start = 0; start < n_seen; start += batch_seen) {
    const int b = std::min(batch_seen, n_seen - start);
    std::vector<int> idx(seen_order.begin() + start, seen_order.begin() + start + b);
    const Matrix bx = gather_rows(seen_x, idx);
    std::vector<int> by(b);
    for (int i = 0; i < b; ++i) by[i] = seen_label_cols[idx[i]];

    Matrix ux;
    std::vector<Matrix> t_targets;
    if (use_unseen) {
      std::vector<int> uidx(batch_unseen);
      for (int i = 0; i < batch_unseen; ++i) {
        if (ring_pos >= n_unseen) {
          rng.shuffle(unseen_ring);
          ring_pos = 0;
        }
        uidx[i] = unseen_ring[ring_pos++];
      }
      ux = gather_rows(unseen_x, uidx);
      for (int a = 0; a < std::max(1, cfg.aug_per_sample); ++a) {
        const Matrix aug = augment_features(ux, cfg.aug_sigma, rng);
        t_targets.push_back(student_forward(state.teacher, aug));
      }
    }

    const VisualStepGrads step =
        visual_step_gradients(state.student, state.classifier, bx, by, ux, t_targets, omega2);
    correct += step.correct;

    std::vector<Matrix*> params = state.trainable();
    std::vector<const Matrix*> grads = step.student.tensors();
    const auto cg = step.classifier.tensors();
    grads.insert(grads.end(), cg.begin(), cg.end());
    state.opt.apply(params, grads);
    ema_update(state);

    svc_weighted += step.l_svc * b;
    if (use_unseen) {
      uvc_weighted += step.l_uvc * batch_unseen;
      uvc_rows += batch_unseen;
    }
  }

  stats.l_svc = svc_weighted / n_seen;
  stats.l_uvc = uvc_rows > 0 ? uvc_weighted / uvc_rows : 0.0;
  stats.train_acc = static_cast<double>(correct) / n_seen;
  check_finite(stats.l_svc, "train_visual_epoch l_svc");
  check_finite(stats.l_uvc, "train_visual_epoch l_uvc");
  state.epoch += 1;
  return stats;
}

Matrix embed_all(const MeanTeacherState& state, const Matrix& x) {
  return student_forward(state.student, x);
}

}  // namespace tzsl
