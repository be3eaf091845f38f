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

#ifndef TZSL_CHECKPOINT_HPP
#define TZSL_CHECKPOINT_HPP

#include <filesystem>

#include "tzsl/agae.hpp"
#include "tzsl/visual.hpp"

namespace tzsl {

// A checkpoint is a directory holding one CSV per tensor plus manifest.csv
// with rows name,rows,cols,role. Scalars (omega1, epoch, Adam settings) are
// stored as 1x1 tensors with role "meta", so a load reproduces the saved
// state exactly, optimizer moments included.

void save_visual_checkpoint(const std::filesystem::path& dir, const MeanTeacherState& state);
MeanTeacherState load_visual_checkpoint(const std::filesystem::path& dir);

void save_semantic_checkpoint(const std::filesystem::path& dir, const AgaeParams& params,
                              EmbedKind kind);
std::pair<AgaeParams, EmbedKind> load_semantic_checkpoint(const std::filesystem::path& dir);

}  // namespace tzsl

#endif  // TZSL_CHECKPOINT_HPP
