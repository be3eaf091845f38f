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

#include "tzsl/gradsuite.hpp"

#include <cmath>
#include <functional>

#include "tzsl/align.hpp"
#include "tzsl/gradcheck.hpp"
#include "tzsl/visual.hpp"

namespace tzsl {
namespace {

constexpr double kKinkMargin = 1e-3;
// Wider than the kink margin: an FD weight step moves every semantic row,
// and the winning neighbor must not flip between the two evaluations.
constexpr double kTieMargin = 1e-2;
constexpr int kMaxResamples = 200;

// allow_exact_zero accepts entries sitting exactly at 0. That is only safe
// when a clipped multiplicative path pins them (the embed's gating product);
// in the plain MLP an exact zero means zero bias plus a dead input row, which
// sits ON the relu kink and jumps under a bias step.
bool entries_clear_of_kinks(const Matrix& m, bool allow_exact_zero) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double e = m.data()[i];
    if (allow_exact_zero && e == 0.0) continue;
    if (std::fabs(e) < kKinkMargin) return false;
  }
  return true;
}

// allow_exact_zero accepts rows sitting exactly at zero. That is only safe
// when an upstream clipped nonlinearity pins the whole row (the embed's last
// relu); it is NOT safe for the raw MLP output, where a zero row sits on the
// normalization discontinuity and a bias step jumps straight across it.
bool rows_have_norm(const Matrix& m, double floor, bool allow_exact_zero) {
  for (int r = 0; r < m.rows(); ++r) {
    double sq = 0.0;
    for (int c = 0; c < m.cols(); ++c) sq += m(r, c) * m(r, c);
    if (allow_exact_zero && sq == 0.0) continue;
    if (std::sqrt(sq) < floor) return false;
  }
  return true;
}

bool mlp_trace_clear(const MlpParams& p, const Matrix& x) {
  MlpTrace trace;
  const Matrix z = mlp_forward(p, x, &trace);
  for (const Matrix& pre : trace.pre) {
    if (!entries_clear_of_kinks(pre, /*allow_exact_zero=*/false)) return false;
  }
  // relu(z) rows feed the normalization; rows whose z entries all sit clearly
  // below zero are pinned at the zero vector and stay there.
  return rows_have_norm(relu(z), kKinkMargin, /*allow_exact_zero=*/true);
}

bool embed_trace_clear(const AgaeParams& p, const Matrix& attrs, EmbedKind kind,
                       EmbedTrace& trace) {
  embed_forward_traced(p, attrs, kind, trace);
  if (kind == EmbedKind::Agae &&
      !entries_clear_of_kinks(trace.f_pre, /*allow_exact_zero=*/false)) {
    return false;
  }
  if (!entries_clear_of_kinks(trace.g1_pre, /*allow_exact_zero=*/true)) return false;
  if (!entries_clear_of_kinks(trace.g2_pre, /*allow_exact_zero=*/true)) return false;
  if (!entries_clear_of_kinks(trace.g3_pre, /*allow_exact_zero=*/true)) return false;
  return rows_have_norm(trace.out_pre, kKinkMargin, /*allow_exact_zero=*/true);
}

// Smallest winner-vs-runner-up cosine gap over all queries.
double min_top2_gap(const Matrix& queries, const Matrix& s, const std::vector<int>& ids) {
  double min_gap = 1e9;
  for (int i = 0; i < queries.rows(); ++i) {
    double best = -2.0, second = -2.0;
    for (int id : ids) {
      double dot = 0.0;
      for (int c = 0; c < s.cols(); ++c) dot += queries(i, c) * s(id, c);
      if (dot > best) {
        second = best;
        best = dot;
      } else if (dot > second) {
        second = dot;
      }
    }
    if (ids.size() > 1) min_gap = std::min(min_gap, best - second);
  }
  return min_gap;
}

struct TensorCheck {
  const Matrix* analytic;
  Matrix* slot;  // where FD perturbs a working copy
};

double max_rel_err_over_tensors(const std::vector<const Matrix*>& analytic,
                                const std::vector<Matrix*>& slots,
                                const std::function<double()>& loss, bool corrupt) {
  double worst = 0.0;
  for (std::size_t t = 0; t < analytic.size(); ++t) {
    const Matrix original = *slots[t];
    const Matrix fd = finite_difference_gradient(
        [&](const Matrix& w) {
          *slots[t] = w;
          const double v = loss();
          return v;
        },
        original, kGradCheckStep);
    *slots[t] = original;
    Matrix a = *analytic[t];
    if (corrupt && t == 0) a(0, 0) += 1.0;
    worst = std::max(worst, gradient_relative_error(a, fd));
  }
  return worst;
}

// Random alignment fixture shared by the three semantic objectives.
struct AlignFixture {
  Matrix attrs;
  AgaeParams params;
  std::vector<int> seen_ids;
  std::vector<int> unseen_ids;
  CategoryCenters centers;
  Matrix v_unseen;
};

AlignFixture make_align_fixture(Rng& rng, bool centers_on_s) {
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    AlignFixture f;
    const int n_unseen = 1 + rng.below(2);
    const int n_c = n_unseen + 2 + rng.below(3);
    const int n_a = 2 + rng.below(4);
    const int h = 3 + rng.below(5);
    const int d_v = 2 + rng.below(4);
    f.attrs = rng.uniform_matrix(n_c, n_a, 0.1, 1.0);
    const Matrix m = normalize_adjacency(attribute_adjacency(f.attrs));
    f.params = AgaeParams::init(n_a, h, d_v, m, rng);
    for (int i = 0; i < n_c - n_unseen; ++i) f.seen_ids.push_back(i);
    for (int i = n_c - n_unseen; i < n_c; ++i) f.unseen_ids.push_back(i);

    EmbedTrace trace;
    if (!embed_trace_clear(f.params, f.attrs, EmbedKind::Agae, trace)) continue;

    f.centers.class_ids = f.seen_ids;
    f.centers.counts.assign(f.seen_ids.size(), 1);
    if (centers_on_s) {
      // Put centers exactly on the current semantic rows, which zeroes the
      // seen term's gradient and isolates the unseen term.
      f.centers.centers = Matrix(static_cast<int>(f.seen_ids.size()), d_v);
      for (std::size_t i = 0; i < f.seen_ids.size(); ++i) {
        for (int c = 0; c < d_v; ++c) {
          f.centers.centers(static_cast<int>(i), c) = trace.s(f.seen_ids[i], c);
        }
      }
    } else {
      f.centers.centers = row_l2_normalize(rng.gaussian_matrix(
          static_cast<int>(f.seen_ids.size()), d_v));
      if (!rows_have_norm(f.centers.centers, 0.5, false)) continue;
    }

    const int n_u_samples = 2 + rng.below(4);
    f.v_unseen = row_l2_normalize(rng.gaussian_matrix(n_u_samples, d_v));
    if (!rows_have_norm(f.v_unseen, 0.5, false)) continue;
    if (min_top2_gap(f.v_unseen, trace.s, f.unseen_ids) < kTieMargin) continue;
    return f;
  }
  throw numeric_error("gradient suite: could not sample a kink-free alignment fixture");
}

double check_semantic_objective(Rng& rng, bool centers_on_s, bool use_usa, double omega3,
                                bool corrupt) {
  AlignFixture f = make_align_fixture(rng, centers_on_s);
  const AlignStepGrads step = align_step_gradients(
      f.params, f.attrs, f.centers, f.v_unseen, f.unseen_ids, EmbedKind::Agae, use_usa, omega3);

  auto loss = [&]() {
    const SemanticSpace s = embed_forward(f.params, f.attrs, EmbedKind::Agae);
    double l = seen_alignment_loss(f.centers, s);
    if (use_usa) {
      Matrix s_u(static_cast<int>(f.unseen_ids.size()), s.cols());
      for (std::size_t i = 0; i < f.unseen_ids.size(); ++i) {
        for (int c = 0; c < s.cols(); ++c) s_u(static_cast<int>(i), c) = s(f.unseen_ids[i], c);
      }
      l += omega3 * unseen_alignment_loss(f.v_unseen, s_u);
    }
    return l;
  };

  const std::vector<const Matrix*> analytic{&step.grads.d_wg, &step.grads.d_wf,
                                            &step.grads.d_wg2, &step.grads.d_wg3};
  const std::vector<Matrix*> slots{&f.params.w_g, &f.params.w_f, &f.params.w_g2,
                                   &f.params.w_g3};
  return max_rel_err_over_tensors(analytic, slots, loss, corrupt);
}

double check_visual_objective(Rng& rng, bool seen_branch, bool corrupt) {
  const int d_in = 2 + rng.below(4);
  const int h = 3 + rng.below(5);
  const int d_v = 2 + rng.below(4);
  const int n_s = 2 + rng.below(3);
  const int batch = 2 + rng.below(4);

  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    Rng local(rng.next_u64());
    MlpParams student = MlpParams::glorot({d_in, h, d_v}, local);
    MlpParams classifier = MlpParams::glorot({d_v, n_s}, local);
    const Matrix x = local.gaussian_matrix(batch, d_in);
    if (!mlp_trace_clear(student, x)) continue;

    std::vector<int> labels;
    Matrix seen_x, unseen_x;
    std::vector<Matrix> targets;
    double omega2 = 0.0;
    if (seen_branch) {
      seen_x = x;
      for (int i = 0; i < batch; ++i) labels.push_back(local.below(n_s));
    } else {
      unseen_x = x;
      targets.push_back(row_l2_normalize(local.gaussian_matrix(batch, d_v)));
      if (!rows_have_norm(targets[0], 0.5, false)) continue;
      omega2 = 1.0;
    }

    const VisualStepGrads step = visual_step_gradients(student, classifier, seen_x, labels,
                                                       unseen_x, targets, omega2);

    auto loss = [&]() {
      double l = 0.0;
      if (seen_branch) {
        const Matrix probs = classifier_forward(classifier, student_forward(student, seen_x));
        l = seen_visual_loss(probs, labels);
      } else {
        l = consistency_loss(student_forward(student, unseen_x), targets[0]);
      }
      return l;
    };

    std::vector<const Matrix*> analytic = step.student.tensors();
    std::vector<Matrix*> slots = student.tensors();
    if (seen_branch) {
      const auto ca = step.classifier.tensors();
      analytic.insert(analytic.end(), ca.begin(), ca.end());
      const auto cs = classifier.tensors();
      slots.insert(slots.end(), cs.begin(), cs.end());
    }
    return max_rel_err_over_tensors(analytic, slots, loss, corrupt);
  }
  throw numeric_error("gradient suite: could not sample a kink-free visual fixture");
}

}  // namespace

std::vector<GradCheckResult> run_gradient_suite(std::uint64_t seed,
                                                int instances_per_objective,
                                                const std::string& corrupt_objective) {
  const struct {
    const char* name;
    std::function<double(Rng&, bool)> check;
  } objectives[] = {
      {"seen_cross_entropy",
       [](Rng& rng, bool corrupt) { return check_visual_objective(rng, true, corrupt); }},
      {"consistency",
       [](Rng& rng, bool corrupt) { return check_visual_objective(rng, false, corrupt); }},
      {"seen_alignment",
       [](Rng& rng, bool corrupt) {
         return check_semantic_objective(rng, false, false, 0.0, corrupt);
       }},
      {"unseen_alignment",
       [](Rng& rng, bool corrupt) {
         return check_semantic_objective(rng, true, true, 1.0, corrupt);
       }},
      {"semantic_total",
       [](Rng& rng, bool corrupt) {
         return check_semantic_objective(rng, false, true, 0.1, corrupt);
       }},
  };

  std::vector<GradCheckResult> results;
  std::uint64_t stream = seed;
  for (const auto& objective : objectives) {
    GradCheckResult r;
    r.objective = objective.name;
    r.instances = instances_per_objective;
    Rng rng(stream += 0x9e3779b97f4a7c15ull);
    const bool corrupt = corrupt_objective == objective.name;
    for (int i = 0; i < instances_per_objective; ++i) {
      r.max_rel_err = std::max(r.max_rel_err, objective.check(rng, corrupt));
    }
    results.push_back(std::move(r));
  }
  return results;
}

bool gradient_suite_passes(const std::vector<GradCheckResult>& results, double tol) {
  for (const auto& r : results) {
    if (!(r.max_rel_err < tol)) return false;
  }
  return true;
}

}  // namespace tzsl
