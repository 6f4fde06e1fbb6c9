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
#include <vector>

#include <benchmark/benchmark.h>

#include "tecmap/evaluation.h"
#include "tecmap/grid.h"
#include "tecmap/sensing.h"

namespace tecmap {
namespace {

ObservationSet RandomObservations(Index count) {
  const Grid grid = default_grid();
  std::mt19937_64 rng(11);
  std::vector<Observation> entries;
  for (Index n : draw_subset(rng, grid.size(), count)) entries.push_back({FlatIndex{n}, 20.0});
  return ObservationSet(grid, entries);
}

void BM_SensingApply(benchmark::State& state) {
  const SensingOperator a(RandomObservations(state.range(0)));
  const Eigen::MatrixXd s = Eigen::MatrixXd::Random(26, 63);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.apply(s));
  }
}
BENCHMARK(BM_SensingApply)->Arg(20)->Arg(70)->Arg(146);

void BM_SensingAdjoint(benchmark::State& state) {
  const SensingOperator a(RandomObservations(state.range(0)));
  const Eigen::VectorXd r = Eigen::VectorXd::Random(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.adjoint(r));
  }
}
BENCHMARK(BM_SensingAdjoint)->Arg(20)->Arg(70)->Arg(146);

}  // namespace
}  // namespace tecmap
