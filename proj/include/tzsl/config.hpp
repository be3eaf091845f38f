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

#ifndef TZSL_CONFIG_HPP
#define TZSL_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "tzsl/agae.hpp"

namespace tzsl {

/// Flat key=value run configuration. Unknown keys are rejected; flags given
/// on the command line override file values.
struct RunConfig {
  std::string data;  // dataset directory
  std::string out;   // output directory
  std::uint64_t seed = 1;

  int d_v = 32;
  int hidden_visual = 256;
  int hidden_agae = 64;
  int epochs_visual = 120;
  int epochs_semantic = 200;

  double lr = 0.001;
  double omega1 = 0.95;
  double ramp_wmax = 1.0;
  int ramp_epochs = 30;
  double omega3 = 0.001;
  double aug_sigma = 0.05;
  int aug_per_sample = 1;
  int batch_seen = 64;
  int batch_unseen = 64;
  double adj_tau = 0.0;

  bool uvc = true;
  bool usa = true;
  EmbedKind embed = EmbedKind::Agae;

  void validate() const;
  // Applies "key=value"; unknown key or bad value throws naming both.
  void set(const std::string& key, const std::string& value, const std::string& where);
};

RunConfig parse_config(const std::filesystem::path& path);
std::string serialize_config(const RunConfig& cfg);

}  // namespace tzsl

#endif  // TZSL_CONFIG_HPP
