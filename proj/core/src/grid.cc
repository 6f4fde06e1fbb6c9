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

#include "tecmap/grid.h"

#include <cmath>
#include <sstream>
#include <utility>

#include "tecmap/error.h"

namespace tecmap {
namespace {

// Slack for coordinates that land on a half-pixel boundary up to rounding.
constexpr double kSnapSlack = 1e-9;

// Returns false when x (in pixel units) is further than half a pixel outside
// [0, count - 1].
bool snap_axis(double x, Index count, Index* out) {
  if (!std::isfinite(x) || x < -0.5 - kSnapSlack ||
      x > static_cast<double>(count - 1) + 0.5 + kSnapSlack) {
    return false;
  }
  // ceil(x - 0.5) rounds to nearest with ties toward the lower index.
  auto idx = static_cast<Index>(std::ceil(x - 0.5 - kSnapSlack));
  if (idx < 0) idx = 0;
  if (idx > count - 1) idx = count - 1;
  *out = idx;
  return true;
}

}  // namespace

Grid Grid::make(double lat_min, double lon_min, double dlat, double dlon,
                Index rows, Index cols) {
  Grid g{lat_min, lon_min, dlat, dlon, rows, cols};
  g.validate();
  return g;
}

void Grid::validate() const {
  if (rows < 2 || cols < 2) {
    std::ostringstream os;
    os << "grid needs at least 2x2 nodes, got " << rows << "x" << cols;
    throw Error(ErrorCode::kParameter, os.str());
  }
  if (!(dlat > 0.0) || !(dlon > 0.0) || !std::isfinite(dlat) ||
      !std::isfinite(dlon)) {
    throw Error(ErrorCode::kParameter, "grid spacing must be positive");
  }
  if (!std::isfinite(lat_min) || !std::isfinite(lon_min)) {
    throw Error(ErrorCode::kParameter, "grid origin must be finite");
  }
}

Grid default_grid() { return Grid::make(36.0, 26.0, 0.3, 0.3, 26, 63); }

FlatIndex to_flat(GridIndex index, const Grid& grid) {
  if (index.p < 0 || index.p >= grid.rows || index.q < 0 ||
      index.q >= grid.cols) {
    throw Error(ErrorCode::kDimension, "grid index out of range");
  }
  return FlatIndex{grid.rows * index.q + index.p};
}

GridIndex from_flat(FlatIndex index, const Grid& grid) {
  if (index.n < 0 || index.n >= grid.size()) {
    throw Error(ErrorCode::kDimension, "flat index out of range");
  }
  return GridIndex{index.n % grid.rows, index.n / grid.rows};
}

TecMap::TecMap(const Grid& grid, Eigen::MatrixXd values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.rows() != grid_.rows || values_.cols() != grid_.cols) {
    std::ostringstream os;
    os << "map is " << values_.rows() << "x" << values_.cols()
       << " but grid is " << grid_.rows << "x" << grid_.cols;
    throw Error(ErrorCode::kDimension, os.str());
  }
  if (!values_.allFinite()) {
    throw Error(ErrorCode::kValidation, "map contains non-finite values");
  }
}

Eigen::VectorXd vectorize(const TecMap& map) {
  return Eigen::Map<const Eigen::VectorXd>(map.values().data(),
                                           map.values().size());
}

TecMap devectorize(const Eigen::VectorXd& u, const Grid& grid) {
  if (u.size() != grid.size()) {
    std::ostringstream os;
    os << "vector of length " << u.size() << " does not fit a " << grid.rows
       << "x" << grid.cols << " grid";
    throw Error(ErrorCode::kDimension, os.str());
  }
  return TecMap(grid, Eigen::Map<const Eigen::MatrixXd>(u.data(), grid.rows,
                                                        grid.cols));
}

bool try_nearest_grid_index(double lat, double lon, const Grid& grid,
                            GridIndex* out) {
  GridIndex idx;
  if (!snap_axis((lat - grid.lat_min) / grid.dlat, grid.rows, &idx.p) ||
      !snap_axis((lon - grid.lon_min) / grid.dlon, grid.cols, &idx.q)) {
    return false;
  }
  *out = idx;
  return true;
}

GridIndex nearest_grid_index(double lat, double lon, const Grid& grid) {
  GridIndex idx;
  if (!try_nearest_grid_index(lat, lon, grid, &idx)) {
    std::ostringstream os;
    os << "coordinate (" << lat << ", " << lon
       << ") is more than half a pixel outside the grid";
    throw Error(ErrorCode::kOutOfRegion, os.str());
  }
  return idx;
}

}  // namespace tecmap
