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

#ifndef TZSL_COMMANDS_HPP
#define TZSL_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tzsl {

// Exit codes: 0 success, 1 usage (handled by the argv parser), 2 validation
// or I/O failure, 3 numeric failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

struct GenOptions {
  int classes_seen = 6;
  int classes_unseen = 3;
  int attrs = 8;
  int dim = 16;
  int per_class = 20;
  int per_class_test = 5;
  double sigma = 0.1;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> mix_seed;  // defaults to seed
  std::string out;
};
int cmd_gen(const GenOptions& opt);

struct TrainOptions {
  std::string config_path;  // optional key=value file
  std::optional<std::string> data;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> ablation;  // uvc=off, usa=off, embed=fce|gae|agae
};
int cmd_train(const TrainOptions& opt);

struct EvalOptions {
  std::string data;
  std::string ckpt;              // directory holding visual/ and semantic/
  std::string setting = "czsl";  // czsl or gzsl
  std::string report_path;       // optional machine-readable report
  std::string export_path;       // optional embedding dump
};
int cmd_eval(const EvalOptions& opt);

struct GradcheckOptions {
  std::uint64_t seed = 1;
  int instances = 20;
  std::string corrupt;  // test hook: objective whose gradient gets corrupted
};
int cmd_gradcheck(const GradcheckOptions& opt);

}  // namespace tzsl

#endif  // TZSL_COMMANDS_HPP
