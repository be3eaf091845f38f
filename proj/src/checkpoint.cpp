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

#include "tzsl/checkpoint.hpp"

#include <map>
#include <sstream>

#include "tzsl/csvio.hpp"

namespace tzsl {
namespace {

namespace fs = std::filesystem;

struct CheckpointWriter {
  fs::path dir;
  std::ostringstream manifest;

  explicit CheckpointWriter(const fs::path& d) : dir(d) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create checkpoint directory " + dir.string());
    if (!fs::is_directory(dir)) throw io_error("not a directory: " + dir.string());
  }

  void add(const std::string& name, const std::string& role, const Matrix& m) {
    check_finite(m, name.c_str());
    manifest << name << ',' << m.rows() << ',' << m.cols() << ',' << role << '\n';
    write_matrix_file(dir / (name + ".csv"), m);
  }

  void add_scalar(const std::string& name, double v) {
    add(name, "meta", Matrix(1, 1, {v}));
  }

  void finish() { write_text_file(dir / "manifest.csv", manifest.str()); }
};

struct CheckpointReader {
  fs::path dir;
  std::map<std::string, Matrix> tensors;

  explicit CheckpointReader(const fs::path& d) : dir(d) {
    const fs::path manifest_path = dir / "manifest.csv";
    if (!fs::exists(manifest_path)) {
      throw validation_error("missing checkpoint manifest: " + manifest_path.string());
    }
    std::istringstream in(read_text_file(manifest_path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto fields = split_csv(line);
      const std::string where = "manifest.csv:" + std::to_string(lineno);
      if (fields.size() != 4) throw validation_error(where + ": expected name,rows,cols,role");
      Matrix m = read_matrix_file(dir / (fields[0] + ".csv"));
      if (m.rows() != parse_long(fields[1], where) || m.cols() != parse_long(fields[2], where)) {
        throw validation_error(where + ": shape of " + fields[0] +
                               ".csv does not match the manifest");
      }
      tensors.emplace(fields[0], std::move(m));
    }
  }

  const Matrix& get(const std::string& name) const {
    const auto it = tensors.find(name);
    if (it == tensors.end()) {
      throw validation_error("checkpoint " + dir.string() + " is missing tensor '" + name + "'");
    }
    return it->second;
  }

  bool has(const std::string& name) const { return tensors.count(name) > 0; }

  double scalar(const std::string& name) const {
    const Matrix& m = get(name);
    if (m.rows() != 1 || m.cols() != 1) {
      throw validation_error("checkpoint scalar '" + name + "' is not 1x1");
    }
    return m(0, 0);
  }
};

void add_mlp(CheckpointWriter& w, const std::string& prefix, const MlpParams& p) {
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    w.add(prefix + "_w" + std::to_string(i), prefix, p.weights[i]);
    w.add(prefix + "_b" + std::to_string(i), prefix, p.biases[i]);
  }
}

MlpParams read_mlp(const CheckpointReader& r, const std::string& prefix) {
  MlpParams p;
  for (std::size_t i = 0;; ++i) {
    const std::string wname = prefix + "_w" + std::to_string(i);
    if (!r.has(wname)) break;
    p.weights.push_back(r.get(wname));
    p.biases.push_back(r.get(prefix + "_b" + std::to_string(i)));
  }
  if (p.weights.empty()) {
    throw validation_error("checkpoint has no layers for '" + prefix + "'");
  }
  return p;
}

}  // namespace

void save_visual_checkpoint(const fs::path& dir, const MeanTeacherState& state) {
  CheckpointWriter w(dir);
  add_mlp(w, "student", state.student);
  add_mlp(w, "teacher", state.teacher);
  add_mlp(w, "classifier", state.classifier);
  for (std::size_t i = 0; i < state.opt.m.size(); ++i) {
    w.add("opt_m_" + std::to_string(i), "opt", state.opt.m[i]);
    w.add("opt_v_" + std::to_string(i), "opt", state.opt.v[i]);
  }
  w.add_scalar("omega1", state.omega1);
  w.add_scalar("epoch", static_cast<double>(state.epoch));
  w.add_scalar("opt_step", static_cast<double>(state.opt.step));
  w.add_scalar("opt_lr", state.opt.lr);
  w.add_scalar("opt_beta1", state.opt.beta1);
  w.add_scalar("opt_beta2", state.opt.beta2);
  w.add_scalar("opt_eps", state.opt.eps);
  w.finish();
}

MeanTeacherState load_visual_checkpoint(const fs::path& dir) {
  CheckpointReader r(dir);
  MeanTeacherState state;
  state.student = read_mlp(r, "student");
  state.teacher = read_mlp(r, "teacher");
  state.classifier = read_mlp(r, "classifier");
  state.omega1 = r.scalar("omega1");
  state.epoch = static_cast<int>(r.scalar("epoch"));
  state.opt.step = static_cast<long long>(r.scalar("opt_step"));
  state.opt.lr = r.scalar("opt_lr");
  state.opt.beta1 = r.scalar("opt_beta1");
  state.opt.beta2 = r.scalar("opt_beta2");
  state.opt.eps = r.scalar("opt_eps");
  for (std::size_t i = 0;; ++i) {
    if (!r.has("opt_m_" + std::to_string(i))) break;
    state.opt.m.push_back(r.get("opt_m_" + std::to_string(i)));
    state.opt.v.push_back(r.get("opt_v_" + std::to_string(i)));
  }
  if (state.teacher.weights.size() != state.student.weights.size()) {
    throw validation_error("checkpoint: teacher/student layer counts differ");
  }
  return state;
}

void save_semantic_checkpoint(const fs::path& dir, const AgaeParams& params, EmbedKind kind) {
  CheckpointWriter w(dir);
  w.add("w_g", "weight", params.w_g);
  w.add("w_f", "weight", params.w_f);
  w.add("w_g2", "weight", params.w_g2);
  w.add("w_g3", "weight", params.w_g3);
  w.add("adjacency", "graph", params.m);
  w.add_scalar("embed_kind", static_cast<double>(static_cast<int>(kind)));
  w.finish();
}

std::pair<AgaeParams, EmbedKind> load_semantic_checkpoint(const fs::path& dir) {
  CheckpointReader r(dir);
  AgaeParams p;
  p.w_g = r.get("w_g");
  p.w_f = r.get("w_f");
  p.w_g2 = r.get("w_g2");
  p.w_g3 = r.get("w_g3");
  p.m = r.get("adjacency");
  const int kind = static_cast<int>(r.scalar("embed_kind"));
  if (kind < 0 || kind > 2) throw validation_error("checkpoint: bad embed_kind");
  return {std::move(p), static_cast<EmbedKind>(kind)};
}

}  // namespace tzsl
