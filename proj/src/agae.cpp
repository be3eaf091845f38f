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

#include "tzsl/agae.hpp"

#include <cmath>
#include <iostream>

#include "tzsl/visual.hpp"  // row_l2_normalize_backward

namespace tzsl {
namespace {

// Zeroes d where the matching pre-activation was clipped.
Matrix relu_gate(Matrix d, const Matrix& pre) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (pre.data()[i] <= 0.0) d.data()[i] = 0.0;
  }
  return d;
}

double glorot_bound(int fan_in, int fan_out) {
  return std::sqrt(6.0 / (fan_in + fan_out));
}

}  // namespace

std::string to_string(EmbedKind kind) {
  switch (kind) {
    case EmbedKind::Fce: return "fce";
    case EmbedKind::Gae: return "gae";
    case EmbedKind::Agae: return "agae";
  }
  throw validation_error("unknown embed kind");
}

EmbedKind embed_kind_from_string(const std::string& s) {
  if (s == "fce") return EmbedKind::Fce;
  if (s == "gae") return EmbedKind::Gae;
  if (s == "agae") return EmbedKind::Agae;
  throw validation_error("embed kind must be fce, gae or agae, got '" + s + "'");
}

AgaeParams AgaeParams::init(int n_attrs, int hidden, int d_v, Matrix m, Rng& rng) {
  if (m.rows() != m.cols()) throw shape_error("AgaeParams: adjacency must be square");
  // Every activation feeding these layers is nonnegative (attributes, the
  // normalized adjacency, relu outputs), so a nonnegative init keeps every
  // relu cell live at the start. A symmetric init leaves roughly half the
  // output cells clipped with no path to revive them once the live cells fit
  // their targets, and the alignment loss freezes well above zero.
  AgaeParams p;
  p.w_g = rng.uniform_matrix(n_attrs, hidden, 0.0, 2.0 * glorot_bound(n_attrs, hidden));
  p.w_f = rng.uniform_matrix(n_attrs, hidden, 0.0, 2.0 * glorot_bound(n_attrs, hidden));
  p.w_g2 = rng.uniform_matrix(hidden, hidden, 0.0, 2.0 * glorot_bound(hidden, hidden));
  p.w_g3 = rng.uniform_matrix(hidden, d_v, 0.0, 2.0 * glorot_bound(hidden, d_v));
  p.m = std::move(m);
  return p;
}

Matrix attribute_adjacency(const Matrix& attrs, double tau) {
  const int nc = attrs.rows();
  std::vector<double> norms(nc);
  bool warned = false;
  for (int i = 0; i < nc; ++i) {
    double sq = 0.0;
    for (int j = 0; j < attrs.cols(); ++j) sq += attrs(i, j) * attrs(i, j);
    norms[i] = std::sqrt(sq);
    if (norms[i] == 0.0 && !warned) {
      std::cerr << "warning: attribute row " << i
                << " is all zero; its adjacency row/column is set to 0\n";
      warned = true;
    }
  }
  Matrix r(nc, nc);
  for (int i = 0; i < nc; ++i) {
    for (int j = i + 1; j < nc; ++j) {
      double cosine = 0.0;
      if (norms[i] > 0.0 && norms[j] > 0.0) {
        double dot = 0.0;
        for (int k = 0; k < attrs.cols(); ++k) dot += attrs(i, k) * attrs(j, k);
        cosine = dot / (norms[i] * norms[j]);
      }
      double v = cosine > 0.0 ? cosine : 0.0;
      if (v < tau) v = 0.0;
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

Matrix normalize_adjacency(const Matrix& r) {
  if (r.rows() != r.cols()) throw shape_error("normalize_adjacency: matrix must be square");
  const int n = r.rows();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (r(i, j) < 0.0) {
        throw validation_error("normalize_adjacency: negative entry at (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (std::fabs(r(i, j) - r(j, i)) > 1e-9) {
        throw validation_error("normalize_adjacency: input is not symmetric");
      }
    }
  }
  // Row sums of R+I; the +1 on the diagonal keeps every sum positive.
  std::vector<double> inv_sqrt(n);
  for (int i = 0; i < n; ++i) {
    double sum = 1.0;
    for (int j = 0; j < n; ++j) sum += r(i, j);
    inv_sqrt[i] = 1.0 / std::sqrt(sum);
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double b = r(i, j) + (i == j ? 1.0 : 0.0);
      m(i, j) = inv_sqrt[i] * b * inv_sqrt[j];
    }
  }
  return m;
}

Matrix graph_layer(const Matrix& m, const Matrix& x, const Matrix& w,
                   bool apply_nonlinearity) {
  const Matrix out = matmul(matmul(m, x), w);
  return apply_nonlinearity ? relu(out) : out;
}

SemanticSpace embed_forward_traced(const AgaeParams& p, const Matrix& attrs, EmbedKind kind,
                                   EmbedTrace& trace) {
  trace.kind = kind;
  const bool graph = kind != EmbedKind::Fce;

  if (kind == EmbedKind::Agae) {
    trace.xg = matmul(matmul(p.m, attrs), p.w_g);  // no nonlinearity here
    trace.f_pre = matmul(attrs, p.w_f);
    trace.xf = relu(trace.f_pre);
    trace.g1_pre = hadamard(trace.xg, trace.xf);  // attentional gating
  } else {
    trace.xg = graph ? matmul(matmul(p.m, attrs), p.w_g) : matmul(attrs, p.w_g);
    trace.g1_pre = trace.xg;
  }
  trace.xg1 = relu(trace.g1_pre);

  trace.h2 = graph ? matmul(p.m, trace.xg1) : trace.xg1;
  trace.g2_pre = matmul(trace.h2, p.w_g2);
  trace.xg2 = relu(trace.g2_pre);

  trace.h3 = graph ? matmul(p.m, trace.xg2) : trace.xg2;
  trace.g3_pre = matmul(trace.h3, p.w_g3);
  trace.out_pre = relu(trace.g3_pre);

  trace.s = row_l2_normalize(trace.out_pre);
  return trace.s;
}

EmbedGrads EmbedGrads::zeros_like(const AgaeParams& p) {
  EmbedGrads g;
  g.d_wg = Matrix(p.w_g.rows(), p.w_g.cols());
  g.d_wf = Matrix(p.w_f.rows(), p.w_f.cols());
  g.d_wg2 = Matrix(p.w_g2.rows(), p.w_g2.cols());
  g.d_wg3 = Matrix(p.w_g3.rows(), p.w_g3.cols());
  return g;
}

EmbedGrads embed_backward(const AgaeParams& p, const Matrix& attrs, const EmbedTrace& trace,
                          const Matrix& d_s) {
  EmbedGrads g = EmbedGrads::zeros_like(p);
  const bool graph = trace.kind != EmbedKind::Fce;
  const Matrix mt = graph ? transpose(p.m) : Matrix();

  Matrix d = row_l2_normalize_backward(trace.out_pre, trace.s, d_s);
  d = relu_gate(std::move(d), trace.g3_pre);
  g.d_wg3 = matmul(transpose(trace.h3), d);
  Matrix d_h3 = matmul(d, transpose(p.w_g3));
  Matrix d_xg2 = graph ? matmul(mt, d_h3) : std::move(d_h3);

  d = relu_gate(std::move(d_xg2), trace.g2_pre);
  g.d_wg2 = matmul(transpose(trace.h2), d);
  Matrix d_h2 = matmul(d, transpose(p.w_g2));
  Matrix d_xg1 = graph ? matmul(mt, d_h2) : std::move(d_h2);

  Matrix d_g1 = relu_gate(std::move(d_xg1), trace.g1_pre);

  if (trace.kind == EmbedKind::Agae) {
    const Matrix d_xg = hadamard(d_g1, trace.xf);
    const Matrix d_xf = hadamard(d_g1, trace.xg);
    g.d_wg = matmul(transpose(attrs), matmul(mt, d_xg));
    const Matrix d_fpre = relu_gate(d_xf, trace.f_pre);
    g.d_wf = matmul(transpose(attrs), d_fpre);
  } else if (trace.kind == EmbedKind::Gae) {
    g.d_wg = matmul(transpose(attrs), matmul(mt, d_g1));
  } else {
    g.d_wg = matmul(transpose(attrs), d_g1);
  }
  return g;
}

SemanticSpace embed_forward(const AgaeParams& p, const Matrix& attrs, EmbedKind kind) {
  EmbedTrace trace;
  return embed_forward_traced(p, attrs, kind, trace);
}

SemanticSpace agae_forward(const AgaeParams& p, const Matrix& attrs) {
  return embed_forward(p, attrs, EmbedKind::Agae);
}

SemanticSpace gae_forward(const AgaeParams& p, const Matrix& attrs) {
  return embed_forward(p, attrs, EmbedKind::Gae);
}

SemanticSpace fce_forward(const AgaeParams& p, const Matrix& attrs) {
  return embed_forward(p, attrs, EmbedKind::Fce);
}

}  // namespace tzsl
