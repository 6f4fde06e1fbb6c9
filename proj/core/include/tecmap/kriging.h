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

// Baseline map generation: inverse-distance densification followed by
// ordinary Kriging with an isotropic semivariogram. Distances are planar
// Euclidean distances in degrees.

#ifndef TECMAP_KRIGING_H_
#define TECMAP_KRIGING_H_

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "tecmap/grid.h"
#include "tecmap/sensing.h"

namespace tecmap {

enum class VariogramKind { kSpherical, kExponential, kGaussian };

std::string_view to_string(VariogramKind kind);
VariogramKind parse_variogram_kind(std::string_view name);

struct SemivariogramModel {
  VariogramKind kind = VariogramKind::kSpherical;
  double nugget = 0.0;  // TECU^2
  double sill = 1.0;    // TECU^2, total (nugget included)
  double range = 1.0;   // degrees; practical range for exponential/gaussian

  // Throws kParameter unless 0 <= nugget <= sill and range > 0.
  void validate() const;

  // gamma(h); gamma(0) = 0 so that the nugget is a discontinuity at the origin.
  double operator()(double h) const;
};

struct ScatteredPoint {
  double lat = 0.0;
  double lon = 0.0;
  double value = 0.0;  // TECU
};

std::vector<ScatteredPoint> to_scattered(std::span<const Measurement> measurements);

// Appends pseudo-observations on a sub-lattice of `grid` with spacing
// `target_spacing` degrees (anchored at the grid origin). Each pseudo value is
// sum v_i d_i^-power / sum d_i^-power over all real observations; a pseudo
// point within 1e-9 deg of a real observation copies its value.
std::vector<ScatteredPoint> idw_densify(std::span<const ScatteredPoint> obs,
                                        const Grid& grid, double power,
                                        double target_spacing);

struct LagBin {
  double lag = 0.0;  // mean pair distance in the bin
  double semivariance = 0.0;
  Index pair_count = 0;
};

// Equal-width bins over [0, max_lag]; pairs farther than max_lag are ignored
// and empty bins are omitted.
std::vector<LagBin> empirical_semivariogram(std::span<const ScatteredPoint> obs,
                                            int n_bins, double max_lag);

struct SemivariogramFit {
  SemivariogramModel model;
  double weighted_residual = 0.0;  // sum n_i (gamma_hat_i - gamma(h_i))^2
  // Pure-nugget fit, or the best range sits at an edge of the search interval.
  bool degenerate = false;
};

double fit_residual(std::span<const LagBin> bins,
                    const SemivariogramModel& model);

// Pair-count weighted least squares over (nugget, sill, range). For a fixed
// range the model is linear in (nugget, sill - nugget), which is solved
// exactly under non-negativity; the range is found by a log-spaced scan
// refined with golden-section search. Throws kFit for fewer than 3 bins.
SemivariogramFit fit_semivariogram(std::span<const LagBin> bins,
                                   VariogramKind kind);

// Ordinary Kriging system for a fixed observation set and model:
//   [Gamma 1; 1^T 0] [w; mu] = [gamma_0; 1].
// Observations closer than 1e-9 deg are merged (averaged) before assembly.
// The system is factored once; predictions only need a solve.
class OrdinaryKriging {
 public:
  OrdinaryKriging(std::span<const ScatteredPoint> obs,
                  const SemivariogramModel& model);

  Index size() const { return static_cast<Index>(points_.size()); }
  Index merged_duplicates() const { return merged_; }
  const std::vector<ScatteredPoint>& points() const { return points_; }

  // Kriging weights w (without the Lagrange multiplier).
  Eigen::VectorXd weights(double lat, double lon) const;
  double predict(double lat, double lon) const;
  // Batched prediction; `lat` and `lon` have equal length.
  Eigen::VectorXd predict(std::span<const double> lat,
                          std::span<const double> lon) const;
  TecMap predict_map(const Grid& grid) const;

 private:
  Eigen::VectorXd rhs(double lat, double lon) const;

  SemivariogramModel model_;
  std::vector<ScatteredPoint> points_;
  Eigen::VectorXd values_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Index merged_ = 0;
};

TecMap ordinary_kriging(std::span<const ScatteredPoint> obs,
                        const SemivariogramModel& model, const Grid& grid);

struct KrigingParams {
  double idw_power = 2.0;
  double idw_spacing = 1.0;  // degrees
  int n_bins = 15;
  double max_lag = 0.0;  // degrees; <= 0 selects half the grid diagonal
  VariogramKind kind = VariogramKind::kSpherical;

  void validate() const;
};

// A ready-to-evaluate Kriging baseline: the semivariogram is fitted to the
// real observations and the system is built on the densified set.
struct KrigingSetup {
  SemivariogramFit fit;
  OrdinaryKriging kriging;
  Index pseudo_points = 0;
};

KrigingSetup prepare_kriging(std::span<const ScatteredPoint> obs,
                             const Grid& grid, const KrigingParams& params);

}  // namespace tecmap

#endif  // TECMAP_KRIGING_H_
