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

#include "tzsl/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "tzsl/align.hpp"
#include "tzsl/checkpoint.hpp"
#include "tzsl/config.hpp"
#include "tzsl/csvio.hpp"
#include "tzsl/dataset.hpp"
#include "tzsl/eval.hpp"
#include "tzsl/gradsuite.hpp"
#include "tzsl/visual.hpp"

namespace tzsl {
namespace {

namespace fs = std::filesystem;

template <typename Fn>
int run_guarded(Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

// Classifier columns are seen class ids in ascending order.
std::vector<int> label_columns(const Dataset& ds) {
  std::vector<int> sorted = ds.seen_class_ids;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> cols(ds.seen_labels.size());
  for (std::size_t i = 0; i < ds.seen_labels.size(); ++i) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), ds.seen_labels[i]);
    cols[i] = static_cast<int>(it - sorted.begin());
  }
  return cols;
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
  return buf;
}

}  // namespace

int cmd_gen(const GenOptions& opt) {
  return run_guarded([&] {
    if (opt.out.empty()) throw validation_error("gen: --out is required");
    SynthSpec spec;
    spec.n_seen = opt.classes_seen;
    spec.n_unseen = opt.classes_unseen;
    spec.n_attrs = opt.attrs;
    spec.d_in = opt.dim;
    spec.per_class = opt.per_class;
    spec.per_class_test = opt.per_class_test;
    spec.sigma = opt.sigma;
    spec.mixing_seed = opt.mix_seed.value_or(opt.seed);
    Rng rng(opt.seed);
    const Dataset ds = gen_synthetic(spec, rng);
    save_dataset(ds, opt.out);
    std::cout << "wrote " << ds.seen_features.rows() << " seen, "
              << ds.unseen_features.rows() << " unseen samples to " << opt.out << '\n';
  });
}

int cmd_train(const TrainOptions& opt) {
  return run_guarded([&] {
    RunConfig cfg;
    if (!opt.config_path.empty()) cfg = parse_config(opt.config_path);
    if (opt.data) cfg.data = *opt.data;
    if (opt.out) cfg.out = *opt.out;
    if (opt.seed) cfg.seed = *opt.seed;
    for (const std::string& kv : opt.ablation) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        throw validation_error("--ablation expects key=value, got '" + kv + "'");
      }
      const std::string key = kv.substr(0, eq);
      if (key != "uvc" && key != "usa" && key != "embed") {
        throw validation_error("--ablation supports uvc, usa and embed, got '" + key + "'");
      }
      cfg.set(key, kv.substr(eq + 1), "--ablation");
    }
    cfg.validate();
    if (cfg.data.empty()) throw validation_error("train: dataset directory not set");
    if (cfg.out.empty()) throw validation_error("train: output directory not set");

    // Held-out labels stay unread during training.
    const Dataset ds = load_dataset(cfg.data, /*with_heldout=*/false);
    const std::vector<int> label_cols = label_columns(ds);

    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) throw io_error("cannot create output directory " + cfg.out);

    Rng rng(cfg.seed);
    std::ostringstream log;
    log << "epoch,l_svc,l_uvc,omega2,l_ssa,l_usa\n";
    int log_epoch = 0;

    // Stage 1: visual embedding with the student/teacher pair.
    MeanTeacherState state = MeanTeacherState::init(
        ds.d_in(), {cfg.hidden_visual}, cfg.d_v, ds.n_seen(), cfg.omega1, cfg.lr, rng);
    VisualTrainConfig vcfg;
    vcfg.batch_seen = cfg.batch_seen;
    vcfg.batch_unseen = cfg.batch_unseen;
    vcfg.aug_sigma = cfg.aug_sigma;
    vcfg.aug_per_sample = cfg.aug_per_sample;
    vcfg.ramp = {cfg.ramp_wmax, cfg.ramp_epochs};
    vcfg.uvc = cfg.uvc;
    for (int e = 0; e < cfg.epochs_visual; ++e) {
      const VisualEpochStats stats =
          train_visual_epoch(state, ds.seen_features, label_cols, ds.unseen_features, vcfg, rng);
      log << ++log_epoch << ',' << format_double(stats.l_svc) << ','
          << format_double(stats.l_uvc) << ',' << format_double(stats.omega2) << ",0,0\n";
    }
    save_visual_checkpoint(fs::path(cfg.out) / "visual", state);

    // Stage 2: the visual space is frozen; only attribute-embedding weights move.
    const Matrix v_seen = embed_all(state, ds.seen_features);
    const CategoryCenters centers = category_centers(v_seen, ds.seen_labels, ds.seen_class_ids);
    const Matrix v_unseen = embed_all(state, ds.unseen_features);
    const Matrix m = normalize_adjacency(attribute_adjacency(ds.attributes, cfg.adj_tau));
    AgaeParams params = AgaeParams::init(ds.n_attrs(), cfg.hidden_agae, cfg.d_v, m, rng);
    AlignConfig acfg;
    acfg.omega3 = cfg.omega3;
    acfg.lr = cfg.lr;
    acfg.use_usa = cfg.usa;
    acfg.embed = cfg.embed;
    AdamState opt2;
    opt2.lr = cfg.lr;
    for (int e = 0; e < cfg.epochs_semantic; ++e) {
      const AlignEpochStats stats = train_semantic_epoch(params, ds.attributes, centers,
                                                         v_unseen, ds.unseen_class_ids, acfg,
                                                         opt2);
      log << ++log_epoch << ",0,0,0," << format_double(stats.l_ssa) << ','
          << format_double(stats.l_usa) << '\n';
    }
    save_semantic_checkpoint(fs::path(cfg.out) / "semantic", params, cfg.embed);

    write_text_file(fs::path(cfg.out) / "log.csv", log.str());
    write_text_file(fs::path(cfg.out) / "config.txt", serialize_config(cfg));
    std::cout << "checkpoints written to " << cfg.out << '\n';
  });
}

int cmd_eval(const EvalOptions& opt) {
  return run_guarded([&] {
    if (opt.data.empty()) throw validation_error("eval: --data is required");
    if (opt.ckpt.empty()) throw validation_error("eval: --ckpt is required");
    const Dataset ds = load_dataset(opt.data);
    const MeanTeacherState state = load_visual_checkpoint(fs::path(opt.ckpt) / "visual");
    const auto [params, kind] = load_semantic_checkpoint(fs::path(opt.ckpt) / "semantic");

    EvalReport report;
    if (opt.setting == "czsl") {
      report = eval_conventional(state, params, kind, ds);
      std::cout << "MCA " << percent(report.mca) << '\n';
    } else if (opt.setting == "gzsl") {
      report = eval_generalized(state, params, kind, ds);
      std::cout << "MCA_u " << percent(*report.mca_u) << '\n'
                << "MCA_s " << percent(*report.mca_s) << '\n'
                << "H " << percent(*report.h) << '\n';
    } else {
      throw validation_error("eval: setting must be czsl or gzsl");
    }
    if (!opt.report_path.empty()) write_report(report, opt.report_path);
    if (!opt.export_path.empty()) {
      export_embeddings(state, params, kind, ds, opt.export_path);
    }
  });
}

int cmd_gradcheck(const GradcheckOptions& opt) {
  try {
    const auto results = run_gradient_suite(opt.seed, opt.instances, opt.corrupt);
    bool all_ok = true;
    for (const auto& r : results) {
      const bool ok = r.max_rel_err < kGradCheckTol;
      all_ok = all_ok && ok;
      std::cout << r.objective << " max_rel_err " << format_double(r.max_rel_err) << " ("
                << r.instances << " instances) " << (ok ? "ok" : "FAIL") << '\n';
      if (!ok) std::cerr << "gradcheck: objective '" << r.objective << "' failed\n";
    }
    return all_ok ? kExitOk : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace tzsl
