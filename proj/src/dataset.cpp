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

#include "tzsl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tzsl/csvio.hpp"

namespace tzsl {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("missing file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string ctx(const fs::path& path, std::size_t lineno) {
  return path.filename().string() + ":" + std::to_string(lineno + 1);
}

int parse_class_id(const std::string& field, const std::string& where, int n_classes) {
  const long id = parse_long(field, where);
  if (id < 0 || id >= n_classes) {
    throw validation_error(where + ": class id " + std::to_string(id) +
                           " outside [0, " + std::to_string(n_classes) + ")");
  }
  return static_cast<int>(id);
}

// Reads a labeled feature file (class_id,f1,...,fd).
void read_labeled_features(const fs::path& path, int n_classes, Matrix& features,
                           std::vector<int>& labels) {
  const auto lines = read_lines(path);
  std::vector<double> values;
  labels.clear();
  int d = -1;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    if (fields.size() < 2) {
      throw validation_error(ctx(path, i) + ": expected class_id plus features");
    }
    labels.push_back(parse_class_id(fields[0], ctx(path, i), n_classes));
    const int row_d = static_cast<int>(fields.size()) - 1;
    if (d == -1) d = row_d;
    if (row_d != d) {
      throw validation_error(ctx(path, i) + ": expected " + std::to_string(d) +
                             " features, got " + std::to_string(row_d));
    }
    for (std::size_t j = 1; j < fields.size(); ++j) {
      values.push_back(parse_double(fields[j], ctx(path, i)));
    }
  }
  if (labels.empty()) throw validation_error(path.string() + ": no rows");
  features = Matrix(static_cast<int>(labels.size()), d, std::move(values));
}

void append_labeled_features(std::ostringstream& out, const Matrix& features,
                             const std::vector<int>& labels) {
  for (int i = 0; i < features.rows(); ++i) {
    out << labels[i];
    for (int j = 0; j < features.cols(); ++j) out << ',' << format_double(features(i, j));
    out << '\n';
  }
}

}  // namespace

void Dataset::validate() const {
  const int nc = n_classes();
  if (nc < 1) throw validation_error("dataset: no classes");
  if (static_cast<int>(class_names.size()) != nc) {
    throw validation_error("dataset: class name count does not match attributes");
  }
  std::set<int> seen(seen_class_ids.begin(), seen_class_ids.end());
  std::set<int> unseen(unseen_class_ids.begin(), unseen_class_ids.end());
  for (int id : seen) {
    if (unseen.count(id)) {
      throw validation_error("dataset: class " + std::to_string(id) +
                             " listed as both seen and unseen");
    }
  }
  if (static_cast<int>(seen.size() + unseen.size()) != nc) {
    throw validation_error("dataset: every class must be assigned to exactly one split");
  }
  if (static_cast<int>(seen_labels.size()) != seen_features.rows()) {
    throw validation_error("dataset: seen feature/label row counts differ");
  }
  for (int label : seen_labels) {
    if (!seen.count(label)) {
      throw validation_error("dataset: seen sample labeled with non-seen class " +
                             std::to_string(label));
    }
  }
  if (!unseen_labels_heldout.empty() &&
      static_cast<int>(unseen_labels_heldout.size()) != unseen_features.rows()) {
    throw validation_error("dataset: unseen_labels.csv row count (" +
                           std::to_string(unseen_labels_heldout.size()) +
                           ") does not match unseen.csv (" +
                           std::to_string(unseen_features.rows()) + ")");
  }
  for (int label : unseen_labels_heldout) {
    if (!unseen.count(label)) {
      throw validation_error("dataset: held-out label " + std::to_string(label) +
                             " is not an unseen class");
    }
  }
  if (!seen_test_features.empty()) {
    if (static_cast<int>(seen_test_labels.size()) != seen_test_features.rows()) {
      throw validation_error("dataset: seen_test feature/label row counts differ");
    }
    if (seen_test_features.cols() != seen_features.cols()) {
      throw validation_error("dataset: seen_test feature width differs from seen");
    }
    for (int label : seen_test_labels) {
      if (!seen.count(label)) {
        throw validation_error("dataset: seen_test sample labeled with non-seen class " +
                               std::to_string(label));
      }
    }
  }
  if (!unseen_features.empty() && unseen_features.cols() != seen_features.cols()) {
    throw validation_error("dataset: unseen feature width differs from seen");
  }
}

void SynthSpec::validate() const {
  if (n_seen < 1 || n_unseen < 1 || n_attrs < 1 || d_in < 1 || per_class < 1) {
    throw validation_error("synth spec: all counts must be >= 1");
  }
  if (per_class_test < 0) throw validation_error("synth spec: per_class_test must be >= 0");
  if (sigma < 0.0) throw validation_error("synth spec: sigma must be >= 0");
  if (attr_noise < 0.0) throw validation_error("synth spec: attr_noise must be >= 0");
}

Dataset load_dataset(const std::filesystem::path& dir, bool with_heldout) {
  Dataset ds;

  // classes.csv
  const fs::path classes_path = dir / "classes.csv";
  const auto class_lines = read_lines(classes_path);
  std::vector<std::string> splits;
  for (std::size_t i = 0; i < class_lines.size(); ++i) {
    if (class_lines[i].empty()) continue;
    const auto fields = split_csv(class_lines[i]);
    if (fields.size() != 3) {
      throw validation_error(ctx(classes_path, i) + ": expected class_id,name,split");
    }
    const long id = parse_long(fields[0], ctx(classes_path, i));
    if (id != static_cast<long>(ds.class_names.size())) {
      throw validation_error(ctx(classes_path, i) + ": class ids must be the 0-based row index");
    }
    ds.class_names.push_back(fields[1]);
    if (fields[2] == "seen") {
      ds.seen_class_ids.push_back(static_cast<int>(id));
    } else if (fields[2] == "unseen") {
      ds.unseen_class_ids.push_back(static_cast<int>(id));
    } else {
      throw validation_error(ctx(classes_path, i) + ": split must be 'seen' or 'unseen', got '" +
                             fields[2] + "'");
    }
    splits.push_back(fields[2]);
  }
  const int nc = static_cast<int>(ds.class_names.size());
  if (nc == 0) throw validation_error(classes_path.string() + ": no classes");

  // attributes.csv
  ds.attributes = read_matrix_file(dir / "attributes.csv");
  if (ds.attributes.rows() != nc) {
    throw validation_error("attributes.csv: " + std::to_string(ds.attributes.rows()) +
                           " rows but classes.csv lists " + std::to_string(nc) + " classes");
  }

  // seen.csv
  read_labeled_features(dir / "seen.csv", nc, ds.seen_features, ds.seen_labels);

  // unseen.csv
  ds.unseen_features = read_matrix_file(dir / "unseen.csv");

  // unseen_labels.csv (optional; evaluation only)
  const fs::path heldout_path = dir / "unseen_labels.csv";
  if (with_heldout && fs::exists(heldout_path)) {
    const auto lines = read_lines(heldout_path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      ds.unseen_labels_heldout.push_back(
          parse_class_id(lines[i], ctx(heldout_path, i), nc));
    }
  }

  // seen_test.csv (optional; generalized evaluation only)
  const fs::path seen_test_path = dir / "seen_test.csv";
  if (fs::exists(seen_test_path)) {
    read_labeled_features(seen_test_path, nc, ds.seen_test_features, ds.seen_test_labels);
  }

  ds.validate();
  return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  ds.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create directory " + dir.string() + ": " + ec.message());
  if (!fs::is_directory(dir)) throw io_error("not a directory: " + dir.string());

  std::ostringstream classes;
  for (int i = 0; i < ds.n_classes(); ++i) {
    const bool seen = std::find(ds.seen_class_ids.begin(), ds.seen_class_ids.end(), i) !=
                      ds.seen_class_ids.end();
    classes << i << ',' << ds.class_names[i] << ',' << (seen ? "seen" : "unseen") << '\n';
  }
  write_text_file(dir / "classes.csv", classes.str());
  write_matrix_file(dir / "attributes.csv", ds.attributes);

  std::ostringstream seen;
  append_labeled_features(seen, ds.seen_features, ds.seen_labels);
  write_text_file(dir / "seen.csv", seen.str());

  write_matrix_file(dir / "unseen.csv", ds.unseen_features);

  if (ds.has_heldout_labels()) {
    std::ostringstream labels;
    for (int label : ds.unseen_labels_heldout) labels << label << '\n';
    write_text_file(dir / "unseen_labels.csv", labels.str());
  }
  if (ds.has_seen_test()) {
    std::ostringstream seen_test;
    append_labeled_features(seen_test, ds.seen_test_features, ds.seen_test_labels);
    write_text_file(dir / "seen_test.csv", seen_test.str());
  }
}

Dataset gen_synthetic(const SynthSpec& spec, Rng& rng) {
  spec.validate();
  Dataset ds;
  const int nc = spec.n_seen + spec.n_unseen;

  // Attribute rows first, then the mixing map, then per-class noise; this
  // draw order is part of the generator's contract (same seed, same bytes).
  //
  // Seen signatures are sparse nonnegative (clipped Gaussians), redrawn when
  // too similar to an earlier class: near-duplicate signatures would make
  // classes indistinguishable to any attribute-based method. Unseen
  // signatures are positive blends of two seen signatures plus sparse noise,
  // so every unseen class is explainable through the seen attribute
  // structure -- the premise attribute-based zero-shot transfer rests on.
  constexpr double kMaxSeenCosine = 0.7;
  constexpr double kMaxAnyCosine = 0.9;
  constexpr double kBlendNoise = 0.15;
  ds.attributes = Matrix(nc, spec.n_attrs);
  const auto cosine_to = [&](int i, int k) {
    double dot = 0.0, sqi = 0.0, sqk = 0.0;
    for (int j = 0; j < spec.n_attrs; ++j) {
      dot += ds.attributes(i, j) * ds.attributes(k, j);
      sqi += ds.attributes(i, j) * ds.attributes(i, j);
      sqk += ds.attributes(k, j) * ds.attributes(k, j);
    }
    return dot / std::sqrt(sqi * sqk + 1e-300);
  };
  for (int i = 0; i < spec.n_seen; ++i) {
    bool accepted = false;
    while (!accepted) {
      double sq = 0.0;
      for (int j = 0; j < spec.n_attrs; ++j) {
        const double g = rng.gaussian();
        ds.attributes(i, j) = g > 0.0 ? g : 0.0;
        sq += ds.attributes(i, j) * ds.attributes(i, j);
      }
      if (sq == 0.0) continue;
      accepted = true;
      for (int k = 0; k < i && accepted; ++k) accepted = cosine_to(i, k) <= kMaxSeenCosine;
    }
  }
  for (int i = spec.n_seen; i < nc; ++i) {
    bool accepted = false;
    while (!accepted) {
      const int a = rng.below(spec.n_seen);
      int b = rng.below(spec.n_seen);
      while (spec.n_seen > 1 && b == a) b = rng.below(spec.n_seen);
      const double u = rng.uniform(0.25, 0.75);
      for (int j = 0; j < spec.n_attrs; ++j) {
        const double g = rng.gaussian();
        ds.attributes(i, j) = u * ds.attributes(a, j) + (1.0 - u) * ds.attributes(b, j) +
                              kBlendNoise * (g > 0.0 ? g : 0.0);
      }
      accepted = true;
      for (int k = 0; k < i && accepted; ++k) accepted = cosine_to(i, k) <= kMaxAnyCosine;
    }
  }

  Rng mix_rng(spec.mixing_seed);
  const Matrix mixing =
      mix_rng.gaussian_matrix(spec.n_attrs, spec.d_in, 1.0 / std::sqrt(spec.n_attrs));

  for (int i = 0; i < nc; ++i) {
    ds.class_names.push_back("class_" + std::to_string(i));
    if (i < spec.n_seen) {
      ds.seen_class_ids.push_back(i);
    } else {
      ds.unseen_class_ids.push_back(i);
    }
  }

  // Features always derive from the clean signatures. The stored unseen-class
  // rows may be corrupted afterwards: unseen annotations are the ones nobody
  // could calibrate against images, so they carry the observation noise (the
  // seen/unseen semantic shift attribute methods have to survive).
  const Matrix class_centers = matmul(ds.attributes, mixing);  // nc x d_in
  if (spec.attr_noise > 0.0) {
    for (int i = spec.n_seen; i < nc; ++i) {
      for (int j = 0; j < spec.n_attrs; ++j) {
        const double noisy = ds.attributes(i, j) + rng.gaussian(0.0, spec.attr_noise);
        ds.attributes(i, j) = noisy > 0.0 ? noisy : 0.0;
      }
    }
  }
  auto sample_class = [&](int class_id, Matrix& features, int row) {
    for (int j = 0; j < spec.d_in; ++j) {
      features(row, j) = class_centers(class_id, j) + rng.gaussian(0.0, spec.sigma);
    }
  };

  ds.seen_features = Matrix(spec.n_seen * spec.per_class, spec.d_in);
  for (int c = 0; c < spec.n_seen; ++c) {
    for (int s = 0; s < spec.per_class; ++s) {
      const int row = c * spec.per_class + s;
      sample_class(c, ds.seen_features, row);
      ds.seen_labels.push_back(c);
    }
  }

  if (spec.per_class_test > 0) {
    ds.seen_test_features = Matrix(spec.n_seen * spec.per_class_test, spec.d_in);
    for (int c = 0; c < spec.n_seen; ++c) {
      for (int s = 0; s < spec.per_class_test; ++s) {
        const int row = c * spec.per_class_test + s;
        sample_class(c, ds.seen_test_features, row);
        ds.seen_test_labels.push_back(c);
      }
    }
  }

  ds.unseen_features = Matrix(spec.n_unseen * spec.per_class, spec.d_in);
  for (int c = 0; c < spec.n_unseen; ++c) {
    const int class_id = spec.n_seen + c;
    for (int s = 0; s < spec.per_class; ++s) {
      const int row = c * spec.per_class + s;
      sample_class(class_id, ds.unseen_features, row);
      ds.unseen_labels_heldout.push_back(class_id);
    }
  }

  ds.validate();
  return ds;
}

}  // namespace tzsl
