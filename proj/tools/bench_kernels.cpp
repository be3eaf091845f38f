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

// OpenMP kernels vs the serial reference implementations. Both sides compute
// bit-identical results; this target only compares speed.

#include <benchmark/benchmark.h>

#include "tzsl/matrix.hpp"
#include "tzsl/rng.hpp"

namespace {

tzsl::Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  tzsl::Rng rng(seed);
  return rng.gaussian_matrix(rows, cols);
}

void BM_MatmulSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tzsl::Matrix a = random_matrix(n, n, 1);
  const tzsl::Matrix b = random_matrix(n, n, 2);
  for (auto _ : state) {
    tzsl::Matrix c = tzsl::serial::matmul(a, b);
    benchmark::DoNotOptimize(c.data());
  }
}
BENCHMARK(BM_MatmulSerial)->Arg(64)->Arg(128)->Arg(256);

void BM_MatmulParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const tzsl::Matrix a = random_matrix(n, n, 1);
  const tzsl::Matrix b = random_matrix(n, n, 2);
  for (auto _ : state) {
    tzsl::Matrix c = tzsl::matmul(a, b);
    benchmark::DoNotOptimize(c.data());
  }
}
BENCHMARK(BM_MatmulParallel)->Arg(64)->Arg(128)->Arg(256);

void BM_RowNormalizeSerial(benchmark::State& state) {
  const tzsl::Matrix x = random_matrix(static_cast<int>(state.range(0)), 256, 3);
  for (auto _ : state) {
    tzsl::Matrix y = tzsl::serial::row_l2_normalize(x);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_RowNormalizeSerial)->Arg(1024)->Arg(8192);

void BM_RowNormalizeParallel(benchmark::State& state) {
  const tzsl::Matrix x = random_matrix(static_cast<int>(state.range(0)), 256, 3);
  for (auto _ : state) {
    tzsl::Matrix y = tzsl::row_l2_normalize(x);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_RowNormalizeParallel)->Arg(1024)->Arg(8192);

void BM_ReluSerial(benchmark::State& state) {
  const tzsl::Matrix x = random_matrix(static_cast<int>(state.range(0)), 512, 4);
  for (auto _ : state) {
    tzsl::Matrix y = tzsl::serial::relu(x);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ReluSerial)->Arg(2048);

void BM_ReluParallel(benchmark::State& state) {
  const tzsl::Matrix x = random_matrix(static_cast<int>(state.range(0)), 512, 4);
  for (auto _ : state) {
    tzsl::Matrix y = tzsl::relu(x);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ReluParallel)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
