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

#include "tecmap/sensing.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "tecmap/error.h"

namespace tecmap {

ObservationSet::ObservationSet(const Grid& grid,
                               std::vector<Observation> entries)
    : grid_(grid), entries_(std::move(entries)) {
  grid_.validate();
  if (entries_.empty()) {
    throw Error(ErrorCode::kNoObservations, "observation set is empty");
  }
  for (const Observation& o : entries_) {
    if (o.index.n < 0 || o.index.n >= grid_.size()) {
      throw Error(ErrorCode::kDimension, "observation index outside the grid");
    }
    if (!std::isfinite(o.value)) {
      throw Error(ErrorCode::kValidation, "observation value is not finite");
    }
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Observation& a, const Observation& b) {
                     return a.index < b.index;
                   });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].index == entries_[i - 1].index) {
      std::ostringstream os;
      os << "pixel " << entries_[i].index.n << " observed twice";
      throw Error(ErrorCode::kValidation, os.str());
    }
  }
}

Eigen::VectorXd ObservationSet::values() const {
  Eigen::VectorXd b(size());
  for (Index m = 0; m < size(); ++m) {
    b[m] = entries_[static_cast<std::size_t>(m)].value;
  }
  return b;
}

SnapReport build_observation_set(std::span<const Measurement> measurements,
                                 const Grid& grid) {
  // Keyed by flat index so the merged entries come out in index order.
  std::map<Index, std::pair<double, int>> sums;
  std::vector<std::string> dropped;
  for (const Measurement& m : measurements) {
    if (!std::isfinite(m.tecu)) {
      throw Error(ErrorCode::kValidation,
                  "measurement for station '" + m.station.id + "' is not finite");
    }
    GridIndex node;
    if (!try_nearest_grid_index(m.station.lat, m.station.lon, grid, &node)) {
      dropped.push_back(m.station.id);
      continue;
    }
    auto& slot = sums[to_flat(node, grid).n];
    slot.first += m.tecu;
    slot.second += 1;
  }
  if (sums.empty()) {
    throw Error(ErrorCode::kNoObservations,
                "no measurement falls inside the grid");
  }
  std::vector<Observation> entries;
  std::vector<std::pair<FlatIndex, int>> merged;
  entries.reserve(sums.size());
  for (const auto& [n, acc] : sums) {
    entries.push_back({FlatIndex{n}, acc.first / acc.second});
    if (acc.second > 1) merged.emplace_back(FlatIndex{n}, acc.second);
  }
  return SnapReport{ObservationSet(grid, std::move(entries)),
                    std::move(dropped), std::move(merged)};
}

SensingOperator::SensingOperator(const ObservationSet& observations)
    : grid_(observations.grid()), dct_(grid_.rows, grid_.cols) {
  p_.reserve(observations.entries().size());
  q_.reserve(observations.entries().size());
  for (const Observation& o : observations.entries()) {
    const GridIndex idx = from_flat(o.index, grid_);
    p_.push_back(idx.p);
    q_.push_back(idx.q);
  }
}

Eigen::VectorXd SensingOperator::apply(const Eigen::MatrixXd& coeffs) const {
  if (coeffs.rows() != grid_.rows || coeffs.cols() != grid_.cols) {
    throw Error(ErrorCode::kDimension,
                "coefficient shape does not match observation grid");
  }
  // U = C_P^T S C_Q; only U(p_m, q_m) is needed, so form T = S C_Q once and
  // finish each sample with a length-P dot product against C_P(:, p_m).
  const Eigen::MatrixXd t = coeffs * dct_.col_matrix();
  const Eigen::MatrixXd& cp = dct_.row_matrix();
  Eigen::VectorXd out(rows());
  for (std::size_t m = 0; m < p_.size(); ++m) {
    out[static_cast<Index>(m)] = cp.col(p_[m]).dot(t.col(q_[m]));
  }
  return out;
}

Eigen::MatrixXd SensingOperator::adjoint(
    const Eigen::VectorXd& residual) const {
  if (residual.size() != rows()) {
    throw Error(ErrorCode::kDimension,
                "residual length does not match observation count");
  }
  // A^T r = C_P R C_Q^T with R the residual scattered onto the map.
  // Y = C_P R only touches the observed columns.
  const Eigen::MatrixXd& cp = dct_.row_matrix();
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(grid_.rows, grid_.cols);
  for (std::size_t m = 0; m < p_.size(); ++m) {
    y.col(q_[m]) += residual[static_cast<Index>(m)] * cp.col(p_[m]);
  }
  return y * dct_.col_matrix().transpose();
}

Eigen::VectorXd apply_sensing(const SpectralCoeffs& coeffs,
                              const ObservationSet& observations) {
  if (!coeffs.grid().same_shape(observations.grid())) {
    throw Error(ErrorCode::kDimension,
                "coefficient grid does not match observation grid");
  }
  return SensingOperator(observations).apply(coeffs.values());
}

SpectralCoeffs apply_sensing_adjoint(const Eigen::VectorXd& residual,
                                     const ObservationSet& observations) {
  return SpectralCoeffs(observations.grid(),
                        SensingOperator(observations).adjoint(residual));
}

}  // namespace tecmap
