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

#ifndef TZSL_AGAE_HPP
#define TZSL_AGAE_HPP

#include <string>

#include "tzsl/matrix.hpp"
#include "tzsl/rng.hpp"

namespace tzsl {

/// Semantic space: one unit-norm row of width d_v per class, ordered like the
/// dataset's class ids.
using SemanticSpace = Matrix;

/// Which attribute-embedding model maps attributes into the semantic space.
/// Fce: three dense layers, no class mixing (ablation baseline).
/// Gae: three graph layers over the class-similarity graph (ablation baseline).
/// Agae: graph layer gated by a class-independent branch, then two more
///       graph layers.
enum class EmbedKind { Fce, Gae, Agae };

std::string to_string(EmbedKind kind);
EmbedKind embed_kind_from_string(const std::string& s);

/// Weights of the attribute embedding plus the cached normalized adjacency.
/// All three embed kinds draw from the same tensors: Fce/Gae use w_g, w_g2,
/// w_g3; Agae additionally uses the gating branch w_f.
struct AgaeParams {
  Matrix w_g;   // n_a x h
  Matrix w_f;   // n_a x h
  Matrix w_g2;  // h x h
  Matrix w_g3;  // h x d_v
  Matrix m;     // n_c x n_c, normalized adjacency

  static AgaeParams init(int n_attrs, int hidden, int d_v, Matrix m, Rng& rng);

  int hidden() const { return w_g.cols(); }
  int d_v() const { return w_g3.cols(); }

  friend bool operator==(const AgaeParams& a, const AgaeParams& b) = default;
};

/// Class-similarity adjacency: R[i][j] = max(0, cosine(attr_i, attr_j)) for
/// i != j, zero diagonal (self links come from normalize_adjacency). Entries
/// below tau are cut to zero. All-zero attribute rows produce a zero row and
/// column and a warning on stderr.
Matrix attribute_adjacency(const Matrix& attrs, double tau = 0.0);

/// M = D^-1/2 (R+I) D^-1/2 where D holds the row sums of R+I.
Matrix normalize_adjacency(const Matrix& r);

/// sigma(M * X * W), or M * X * W when apply_nonlinearity is false.
Matrix graph_layer(const Matrix& m, const Matrix& x, const Matrix& w,
                   bool apply_nonlinearity);

SemanticSpace agae_forward(const AgaeParams& p, const Matrix& attrs);
SemanticSpace gae_forward(const AgaeParams& p, const Matrix& attrs);
SemanticSpace fce_forward(const AgaeParams& p, const Matrix& attrs);
SemanticSpace embed_forward(const AgaeParams& p, const Matrix& attrs, EmbedKind kind);

// Forward with recorded intermediates, and the matching backward pass used by
// the alignment trainer and the gradient checks.
struct EmbedTrace {
  EmbedKind kind{};
  // Layer 1.
  Matrix xg;       // Agae: M*A*w_g (no sigma). Fce/Gae: pre-activation of layer 1.
  Matrix f_pre;    // Agae only: A*w_f
  Matrix xf;       // Agae only: relu(f_pre)
  Matrix g1_pre;   // Agae: xg .* xf ; Fce/Gae: == xg
  Matrix xg1;      // relu(g1_pre)
  // Layer 2.
  Matrix h2;       // graph input to layer 2 (M*xg1, or xg1 for Fce)
  Matrix g2_pre;   // h2*w_g2
  Matrix xg2;      // relu(g2_pre)
  // Layer 3.
  Matrix h3;       // M*xg2, or xg2 for Fce
  Matrix g3_pre;   // h3*w_g3
  Matrix out_pre;  // relu(g3_pre), before row normalization
  Matrix s;        // row_l2_normalize(out_pre)
};

struct EmbedGrads {
  Matrix d_wg;
  Matrix d_wf;  // zero for Fce/Gae
  Matrix d_wg2;
  Matrix d_wg3;

  static EmbedGrads zeros_like(const AgaeParams& p);
};

SemanticSpace embed_forward_traced(const AgaeParams& p, const Matrix& attrs, EmbedKind kind,
                                   EmbedTrace& trace);
EmbedGrads embed_backward(const AgaeParams& p, const Matrix& attrs, const EmbedTrace& trace,
                          const Matrix& d_s);

}  // namespace tzsl

#endif  // TZSL_AGAE_HPP
