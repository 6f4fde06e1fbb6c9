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

#include <vector>

#include <benchmark/benchmark.h>

#include "tecmap/evaluation.h"
#include "tecmap/grid.h"
#include "tecmap/kriging.h"
#include "tecmap/synthetic.h"

namespace tecmap {
namespace {

std::vector<ScatteredPoint> NetworkPoints() {
  const Grid grid = default_grid();
  const std::vector<Station> net = default_station_network(grid);
  return to_scattered(sample_synthetic(SyntheticKind::kSm5, net, grid, SampleAt::kExactCoordinate));
}

void BM_EmpiricalSemivariogram(benchmark::State& state) {
  const std::vector<ScatteredPoint> pts = NetworkPoints();
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_semivariogram(pts, 15, 10.0));
  }
}
BENCHMARK(BM_EmpiricalSemivariogram);

void BM_PrepareKriging(benchmark::State& state) {
  const std::vector<ScatteredPoint> pts = NetworkPoints();
  const Grid grid = default_grid();
  for (auto _ : state) {
    benchmark::DoNotOptimize(prepare_kriging(pts, grid, KrigingParams{}));
  }
}
BENCHMARK(BM_PrepareKriging)->Unit(benchmark::kMillisecond);

void BM_KrigingPredictMap(benchmark::State& state) {
  const Grid grid = default_grid();
  const KrigingSetup setup = prepare_kriging(NetworkPoints(), grid, KrigingParams{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(setup.kriging.predict_map(grid));
  }
}
BENCHMARK(BM_KrigingPredictMap)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace tecmap
