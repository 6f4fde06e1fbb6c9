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

#include "tecmap/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>

#include "tecmap/error.h"

namespace tecmap {
namespace {

// Uniform integer in [0, n) by rejection, independent of the standard
// library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit =
      std::mt19937_64::max() - (std::mt19937_64::max() % n) - 1;
  std::uint64_t x = rng();
  while (x > limit) x = rng();
  return x % n;
}

// Uniform double in [0, 1) from the top 53 bits.
double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double reflect(double x, double lo, double hi) {
  if (x < lo) x = 2.0 * lo - x;
  if (x > hi) x = 2.0 * hi - x;
  return std::clamp(x, lo, hi);
}

// Runs body(i) for i in [0, n) on up to `jobs` threads. Exceptions are
// collected and the one with the lowest index is rethrown.
void parallel_for(Index n, int jobs, const std::function<void(Index)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  auto worker = [&] {
    for (Index i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int threads = static_cast<int>(std::min<Index>(jobs, n));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void check_options(const EvalOptions& options) {
  if (options.trials < 1) {
    throw Error(ErrorCode::kParameter, "trials must be at least 1");
  }
  if (options.jobs < 1) {
    throw Error(ErrorCode::kParameter, "jobs must be at least 1");
  }
}

}  // namespace

double normalized_error_energy(const Eigen::VectorXd& truth,
                               const Eigen::VectorXd& estimate) {
  if (truth.size() != estimate.size()) {
    throw Error(ErrorCode::kDimension, "truth and estimate differ in length");
  }
  const double energy = truth.squaredNorm();
  if (energy == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "truth has zero energy");
  }
  return (truth - estimate).squaredNorm() / energy;
}

double normalized_error_energy(const TecMap& truth, const TecMap& estimate) {
  if (!truth.grid().same_shape(estimate.grid())) {
    throw Error(ErrorCode::kDimension, "maps differ in shape");
  }
  return normalized_error_energy(vectorize(truth), vectorize(estimate));
}

std::vector<Station> default_station_network(const Grid& grid,
                                             std::uint64_t seed,
                                             const LatticeLayout& layout) {
  grid.validate();
  if (layout.rows < 2 || layout.cols < 2 || layout.count < 1 ||
      layout.count > layout.rows * layout.cols) {
    throw Error(ErrorCode::kParameter,
                "lattice must be at least 2x2 and hold `count` sites");
  }
  if (!(layout.jitter >= 0.0) || layout.jitter >= 0.5) {
    throw Error(ErrorCode::kParameter, "jitter must lie in [0, 0.5)");
  }
  std::mt19937_64 rng(seed);
  const Index sites = layout.rows * layout.cols;
  const std::vector<Index> keep = draw_subset(rng, sites, layout.count);

  const double lat_step =
      (grid.lat_max() - grid.lat_min) / static_cast<double>(layout.rows - 1);
  const double lon_step =
      (grid.lon_max() - grid.lon_min) / static_cast<double>(layout.cols - 1);
  std::vector<Station> out;
  out.reserve(keep.size());
  int id = 0;
  for (Index site : keep) {
    const Index r = site / layout.cols;
    const Index c = site % layout.cols;
    const double dlat = (2.0 * uniform_unit(rng) - 1.0) * layout.jitter * lat_step;
    const double dlon = (2.0 * uniform_unit(rng) - 1.0) * layout.jitter * lon_step;
    char name[16];
    std::snprintf(name, sizeof(name), "S%03d", ++id);
    out.push_back(Station{
        name,
        reflect(grid.lat_min + static_cast<double>(r) * lat_step + dlat,
                grid.lat_min, grid.lat_max()),
        reflect(grid.lon_min + static_cast<double>(c) * lon_step + dlon,
                grid.lon_min, grid.lon_max())});
  }
  return out;
}

std::vector<Measurement> sample_synthetic(SyntheticKind kind,
                                          std::span<const Station> stations,
                                          const Grid& grid, SampleAt at) {
  std::vector<Measurement> out;
  out.reserve(stations.size());
  for (const Station& s : stations) {
    if (at == SampleAt::kExactCoordinate) {
      out.push_back({s, synth_value(kind, s.lat, s.lon)});
      continue;
    }
    GridIndex node;
    if (!try_nearest_grid_index(s.lat, s.lon, grid, &node)) continue;
    out.push_back({s, synth_value(kind, grid.lat(node.p), grid.lon(node.q))});
  }
  return out;
}

std::vector<Index> draw_subset(std::mt19937_64& rng, Index n, Index k) {
  if (k < 0 || k > n) {
    throw Error(ErrorCode::kParameter, "subset size exceeds population");
  }
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  for (Index i = 0; i < k; ++i) {
    const auto j = i + static_cast<Index>(
                           uniform_below(rng, static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(k));
  std::sort(pool.begin(), pool.end());
  return pool;
}

SweepResult sweep_observation_count(SyntheticKind kind,
                                    std::span<const Station> stations,
                                    std::span<const Index> counts,
                                    const Grid& grid,
                                    const SolverParams& params,
                                    const EvalOptions& options) {
  check_options(options);
  params.validate();
  const auto n = static_cast<Index>(stations.size());
  for (Index c : counts) {
    if (c < 1 || c > n) {
      std::ostringstream os;
      os << "sample count " << c << " is outside [1, " << n << "]";
      throw Error(ErrorCode::kParameter, os.str());
    }
  }
  const TecMap truth = synth_map(kind, grid);
  const std::vector<Measurement> all =
      sample_synthetic(kind, stations, grid, SampleAt::kNearestNode);
  if (static_cast<Index>(all.size()) != n) {
    throw Error(ErrorCode::kOutOfRegion,
                "every station of a sweep must lie inside the grid");
  }

  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<Index>> subsets;
  for (Index c : counts) {
    for (int t = 0; t < options.trials; ++t) subsets.push_back(draw_subset(rng, n, c));
  }

  std::vector<double> errors(subsets.size());
  parallel_for(static_cast<Index>(subsets.size()), options.jobs, [&](Index i) {
    const auto& subset = subsets[static_cast<std::size_t>(i)];
    std::vector<Measurement> picked;
    picked.reserve(subset.size());
    for (Index j : subset) picked.push_back(all[static_cast<std::size_t>(j)]);
    const SnapReport snap = build_observation_set(picked, grid);
    const ReconstructionResult r = reconstruct(snap.observations, params);
    errors[static_cast<std::size_t>(i)] = normalized_error_energy(truth, r.map);
  });

  SweepResult result{kind, {}};
  std::size_t at = 0;
  for (Index c : counts) {
    SweepPoint p;
    p.count = c;
    p.trial_errors.assign(errors.begin() + static_cast<std::ptrdiff_t>(at),
                          errors.begin() + static_cast<std::ptrdiff_t>(at + options.trials));
    at += static_cast<std::size_t>(options.trials);
    p.mean_error = mean(p.trial_errors);
    result.points.push_back(std::move(p));
  }
  return result;
}

std::string_view to_string(Method method) {
  return method == Method::kCs ? "cs" : "kriging";
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "cs") return Method::kCs;
  if (lower == "kriging") return Method::kKriging;
  throw Error(ErrorCode::kParameter,
              "unknown method '" + std::string(name) + "' (expected cs|kriging)");
}

CrossCheckResult cross_check(std::span<const Measurement> measurements,
                             std::span<const Index> holdout_counts,
                             const Grid& grid, Method method,
                             const SolverParams& solver,
                             const KrigingParams& kriging,
                             const EvalOptions& options) {
  check_options(options);
  if (method == Method::kCs) {
    solver.validate();
  } else {
    kriging.validate();
  }
  const auto n = static_cast<Index>(measurements.size());
  for (Index h : holdout_counts) {
    if (h < 1 || h >= n) {
      std::ostringstream os;
      os << "holdout count " << h << " must lie in [1, " << n - 1 << "]";
      throw Error(ErrorCode::kParameter, os.str());
    }
  }
  std::vector<GridIndex> nodes;
  nodes.reserve(measurements.size());
  for (const Measurement& m : measurements) {
    nodes.push_back(nearest_grid_index(m.station.lat, m.station.lon, grid));
  }

  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<Index>> held;
  for (Index h : holdout_counts) {
    for (int t = 0; t < options.trials; ++t) held.push_back(draw_subset(rng, n, h));
  }

  std::vector<double> errors(held.size());
  parallel_for(static_cast<Index>(held.size()), options.jobs, [&](Index i) {
    const auto& out = held[static_cast<std::size_t>(i)];
    std::vector<char> is_out(measurements.size(), 0);
    for (Index j : out) is_out[static_cast<std::size_t>(j)] = 1;
    std::vector<Measurement> train;
    for (std::size_t j = 0; j < measurements.size(); ++j) {
      if (!is_out[j]) train.push_back(measurements[j]);
    }

    Eigen::VectorXd truth(static_cast<Index>(out.size()));
    Eigen::VectorXd estimate(static_cast<Index>(out.size()));
    for (std::size_t j = 0; j < out.size(); ++j) {
      truth[static_cast<Index>(j)] = measurements[static_cast<std::size_t>(out[j])].tecu;
    }
    if (method == Method::kCs) {
      const SnapReport snap = build_observation_set(train, grid);
      const ReconstructionResult r = reconstruct(snap.observations, solver);
      for (std::size_t j = 0; j < out.size(); ++j) {
        estimate[static_cast<Index>(j)] = r.map.at(nodes[static_cast<std::size_t>(out[j])]);
      }
    } else {
      const std::vector<ScatteredPoint> pts = to_scattered(train);
      const KrigingSetup setup = prepare_kriging(pts, grid, kriging);
      std::vector<double> lat;
      std::vector<double> lon;
      for (Index j : out) {
        const GridIndex& node = nodes[static_cast<std::size_t>(j)];
        lat.push_back(grid.lat(node.p));
        lon.push_back(grid.lon(node.q));
      }
      estimate = setup.kriging.predict(lat, lon);
    }
    errors[static_cast<std::size_t>(i)] = normalized_error_energy(truth, estimate);
  });

  CrossCheckResult result{method, {}};
  std::size_t at = 0;
  for (Index h : holdout_counts) {
    CrossCheckPoint p;
    p.holdout = h;
    p.trial_errors.assign(errors.begin() + static_cast<std::ptrdiff_t>(at),
                          errors.begin() + static_cast<std::ptrdiff_t>(at + options.trials));
    at += static_cast<std::size_t>(options.trials);
    p.mean_error = mean(p.trial_errors);
    result.points.push_back(std::move(p));
  }
  return result;
}

}  // namespace tecmap
