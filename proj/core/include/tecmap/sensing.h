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

#ifndef TECMAP_SENSING_H_
#define TECMAP_SENSING_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tecmap/dct.h"
#include "tecmap/grid.h"

namespace tecmap {

struct Station {
  std::string id;
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

// One TEC value reported by a station at a single epoch.
struct Measurement {
  Station station;
  double tecu = 0.0;
};

struct Observation {
  FlatIndex index;
  double value = 0.0;  // TECU
};

// Grid-aligned measurements: the pixel set and the vector b. Pixel indices are
// distinct and kept in ascending flat-index order.
class ObservationSet {
 public:
  // Throws kNoObservations when empty, kDimension for indices outside the
  // grid, kValidation for duplicate indices or non-finite values.
  ObservationSet(const Grid& grid, std::vector<Observation> entries);

  const Grid& grid() const { return grid_; }
  const std::vector<Observation>& entries() const { return entries_; }
  Index size() const { return static_cast<Index>(entries_.size()); }

  Eigen::VectorXd values() const;

 private:
  Grid grid_;
  std::vector<Observation> entries_;
};

struct SnapReport {
  ObservationSet observations;
  // Station ids farther than half a pixel outside the grid.
  std::vector<std::string> dropped;
  // Pixels that received more than one station, with the station count.
  std::vector<std::pair<FlatIndex, int>> merged;
};

// Snaps every measurement to its nearest node; several stations on one node
// are averaged into a single entry. Throws kNoObservations when nothing
// survives snapping.
SnapReport build_observation_set(std::span<const Measurement> measurements,
                                 const Grid& grid);

// Matrix-free sensing operator A = M D for a fixed observation set.
// apply() evaluates the synthesized map only at the observed pixels and
// adjoint() scatters a residual into the coefficient domain.
class SensingOperator {
 public:
  explicit SensingOperator(const ObservationSet& observations);

  Index rows() const { return static_cast<Index>(p_.size()); }
  const Grid& grid() const { return grid_; }

  // A s. `coeffs` is P x Q.
  Eigen::VectorXd apply(const Eigen::MatrixXd& coeffs) const;
  // A^T r, returned as a P x Q coefficient matrix.
  Eigen::MatrixXd adjoint(const Eigen::VectorXd& residual) const;

 private:
  Grid grid_;
  Dct2 dct_;
  std::vector<Index> p_;
  std::vector<Index> q_;
};

Eigen::VectorXd apply_sensing(const SpectralCoeffs& coeffs,
                              const ObservationSet& observations);
SpectralCoeffs apply_sensing_adjoint(const Eigen::VectorXd& residual,
                                     const ObservationSet& observations);

}  // namespace tecmap

#endif  // TECMAP_SENSING_H_
