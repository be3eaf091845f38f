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

#ifndef TZSL_GRADSUITE_HPP
#define TZSL_GRADSUITE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace tzsl {

// Diagnostic suite checking every hand-derived gradient against central
// finite differences on random tiny instances. Instances whose pre-activation
// entries, row norms or nearest-neighbor margins fall within 1e-3 of a kink
// or tie are resampled.

inline constexpr double kGradCheckTol = 1e-4;
inline constexpr double kGradCheckStep = 1e-5;

struct GradCheckResult {
  std::string objective;
  double max_rel_err = 0.0;
  int instances = 0;
};

/// Objectives: seen_cross_entropy, consistency, seen_alignment,
/// unseen_alignment, semantic_total. `corrupt_objective` perturbs one
/// analytic gradient of the named objective (negative-control test hook).
std::vector<GradCheckResult> run_gradient_suite(std::uint64_t seed,
                                                int instances_per_objective,
                                                const std::string& corrupt_objective = "");

bool gradient_suite_passes(const std::vector<GradCheckResult>& results,
                           double tol = kGradCheckTol);

}  // namespace tzsl

#endif  // TZSL_GRADSUITE_HPP
