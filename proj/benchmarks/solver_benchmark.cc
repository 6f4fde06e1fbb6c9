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
#include "tecmap/solver.h"
#include "tecmap/synthetic.h"

namespace tecmap {
namespace {

ObservationSet NetworkObservations(SyntheticKind kind, Index count) {
  const Grid grid = default_grid();
  const std::vector<Station> net = default_station_network(grid);
  std::vector<Measurement> meas = sample_synthetic(kind, net, grid, SampleAt::kNearestNode);
  std::mt19937_64 rng(3);
  std::vector<Measurement> subset;
  for (Index i : draw_subset(rng, static_cast<Index>(meas.size()), count)) {
    subset.push_back(meas[static_cast<std::size_t>(i)]);
  }
  return build_observation_set(subset, grid).observations;
}

void BM_Reconstruct(benchmark::State& state) {
  const ObservationSet obs =
      NetworkObservations(static_cast<SyntheticKind>(state.range(0)), state.range(1));
  const SolverParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reconstruct(obs, params));
  }
}
BENCHMARK(BM_Reconstruct)
    ->Args({0, 146})
    ->Args({3, 146})
    ->Args({3, 70})
    ->Args({4, 40})
    ->Unit(benchmark::kMillisecond);

void BM_SolvePenalized(benchmark::State& state) {
  const ObservationSet obs = NetworkObservations(SyntheticKind::kSm3, 146);
  const SolverParams params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_penalized(obs, params, 100.0));
  }
}
BENCHMARK(BM_SolvePenalized)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace tecmap
