// Copyright 2026 The tecmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <benchmark/benchmark.h>

#include "tecmap/dct.h"
#include "tecmap/grid.h"

namespace tecmap {
namespace {

Eigen::MatrixXd RandomMap(Index rows, Index cols) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(10.0, 30.0);
  Eigen::MatrixXd u(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) u(i, j) = d(rng);
  }
  return u;
}

void BM_Dct2Forward(benchmark::State& state) {
  const Index rows = state.range(0);
  const Index cols = state.range(1);
  const Dct2 dct(rows, cols);
  const Eigen::MatrixXd u = RandomMap(rows, cols);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dct.forward(u));
  }
}
BENCHMARK(BM_Dct2Forward)->Args({8, 8})->Args({26, 63})->Args({64, 128});

void BM_Dct2Inverse(benchmark::State& state) {
  const Index rows = state.range(0);
  const Index cols = state.range(1);
  const Dct2 dct(rows, cols);
  const Eigen::MatrixXd s = RandomMap(rows, cols);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dct.inverse(s));
  }
}
BENCHMARK(BM_Dct2Inverse)->Args({8, 8})->Args({26, 63})->Args({64, 128});

void BM_SparsityLevel(benchmark::State& state) {
  const Grid grid = default_grid();
  const SpectralCoeffs s = dct2_forward(TecMap(grid, RandomMap(grid.rows, grid.cols)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sparsity_level(s, 0.985, SparsityMeasure::kAcEnergy));
  }
}
BENCHMARK(BM_SparsityLevel);

}  // namespace
}  // namespace tecmap
