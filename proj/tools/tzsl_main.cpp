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

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tzsl/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"transductive zero-shot learning over pre-extracted features"};
  app.require_subcommand(1);

  int threads = 1;  // pipeline runs single-threaded unless asked otherwise
  app.add_option("--threads", threads,
                 "OpenMP thread count (0 = runtime default); results are "
                 "identical for any value");

  tzsl::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a synthetic dataset directory");
  gen_cmd->add_option("--classes-seen", gen.classes_seen, "seen classes")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--classes-unseen", gen.classes_unseen, "unseen classes")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--attrs", gen.attrs, "attributes per class")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--dim", gen.dim, "feature width")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--per-class", gen.per_class, "samples per class")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--per-class-test", gen.per_class_test,
                      "seen-test samples per class (0 omits seen_test.csv)");
  gen_cmd->add_option("--sigma", gen.sigma, "cluster noise")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "generator seed");
  gen_cmd->add_option("--mix-seed", gen.mix_seed, "attribute-to-feature map seed (default: --seed)");
  gen_cmd->add_option("--out", gen.out, "output directory")->required();

  tzsl::TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "run both training stages");
  train_cmd->add_option("--config", train.config_path, "key=value config file");
  train_cmd->add_option("--data", train.data, "dataset directory");
  train_cmd->add_option("--out", train.out, "output directory");
  train_cmd->add_option("--seed", train.seed, "run seed");
  train_cmd->add_option("--ablation", train.ablation,
                        "ablation switches: uvc=on|off, usa=on|off, embed=fce|gae|agae");

  tzsl::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate trained checkpoints");
  eval_cmd->add_option("--data", eval.data, "dataset directory")->required();
  eval_cmd->add_option("--ckpt", eval.ckpt, "checkpoint directory (from train --out)")->required();
  eval_cmd->add_option("--setting", eval.setting, "evaluation protocol")
      ->check(CLI::IsMember({"czsl", "gzsl"}));
  eval_cmd->add_option("--report", eval.report_path, "write full-precision report CSV here");
  eval_cmd->add_option("--export", eval.export_path, "write embedding dump CSV here");

  tzsl::GradcheckOptions grad;
  auto* grad_cmd = app.add_subcommand("gradcheck",
                                      "check analytic gradients against finite differences");
  grad_cmd->add_option("--seed", grad.seed, "instance seed");
  grad_cmd->add_option("--instances", grad.instances, "instances per objective")
      ->check(CLI::PositiveNumber);
  grad_cmd->add_option("--corrupt", grad.corrupt,
                       "test hook: corrupt the named objective's gradient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tzsl::kExitUsage;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  if (gen_cmd->parsed()) return tzsl::cmd_gen(gen);
  if (train_cmd->parsed()) return tzsl::cmd_train(train);
  if (eval_cmd->parsed()) return tzsl::cmd_eval(eval);
  if (grad_cmd->parsed()) return tzsl::cmd_gradcheck(grad);
  return tzsl::kExitUsage;
}
