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

// Experiment harness: error metric, station layouts, observation-count
// sweeps and hold-out cross checks.
//
// All randomness is drawn from a std::mt19937_64 seeded by the caller. Random
// subsets are drawn up front, in a fixed order, so running trials on several
// threads never changes the numbers.

#ifndef TECMAP_EVALUATION_H_
#define TECMAP_EVALUATION_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tecmap/grid.h"
#include "tecmap/kriging.h"
#include "tecmap/sensing.h"
#include "tecmap/solver.h"
#include "tecmap/synthetic.h"

namespace tecmap {

// ||u - u_hat||^2 / ||u||^2. Throws kDimension on a shape mismatch and
// kDegenerateInput when the truth has zero energy.
double normalized_error_energy(const Eigen::VectorXd& truth,
                               const Eigen::VectorXd& estimate);
double normalized_error_energy(const TecMap& truth, const TecMap& estimate);

// Jittered lattice spanning the grid's node bounding box, edges included.
// `count` of the rows x cols sites are kept (the rest are dropped at random)
// and each kept site moves by up to jitter * spacing per axis, reflected back
// inside the box.
struct LatticeLayout {
  Index count = 146;
  Index rows = 9;
  Index cols = 17;
  double jitter = 0.4;
};

std::vector<Station> default_station_network(const Grid& grid,
                                             std::uint64_t seed = 0,
                                             const LatticeLayout& layout = {});

enum class SampleAt {
  kNearestNode,      // value of the synthetic map at the snapped pixel
  kExactCoordinate,  // closed-form value at the station coordinate
};

// Stations outside the grid tolerance are skipped for kNearestNode.
std::vector<Measurement> sample_synthetic(SyntheticKind kind,
                                          std::span<const Station> stations,
                                          const Grid& grid, SampleAt at);

// Uniform draw of `k` distinct indices from [0, n), returned sorted.
std::vector<Index> draw_subset(std::mt19937_64& rng, Index n, Index k);

struct SweepPoint {
  Index count = 0;
  double mean_error = 0.0;
  std::vector<double> trial_errors;
};

struct SweepResult {
  SyntheticKind kind = SyntheticKind::kSm1;
  std::vector<SweepPoint> points;
};

struct EvalOptions {
  int trials = 100;
  std::uint64_t seed = 0;
  int jobs = 1;
};

// For each count, reconstructs `trials` random station subsets of the
// synthetic map (sampled at the nearest node) and averages the normalized
// error energy against the full synthetic map.
SweepResult sweep_observation_count(SyntheticKind kind,
                                    std::span<const Station> stations,
                                    std::span<const Index> counts,
                                    const Grid& grid,
                                    const SolverParams& params,
                                    const EvalOptions& options);

enum class Method { kCs, kKriging };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct CrossCheckPoint {
  Index holdout = 0;
  double mean_error = 0.0;
  std::vector<double> trial_errors;
};

struct CrossCheckResult {
  Method method = Method::kCs;
  std::vector<CrossCheckPoint> points;
};

// Holds out random measurements, builds the map from the rest and compares
// the map at each held-out station's nearest node with the held-out value.
CrossCheckResult cross_check(std::span<const Measurement> measurements,
                             std::span<const Index> holdout_counts,
                             const Grid& grid, Method method,
                             const SolverParams& solver,
                             const KrigingParams& kriging,
                             const EvalOptions& options);

}  // namespace tecmap

#endif  // TECMAP_EVALUATION_H_
