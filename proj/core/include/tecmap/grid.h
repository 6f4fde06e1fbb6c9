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

// Map raster definition and the flattening convention shared by every module.
//
// A map is a P x Q matrix U whose row index p walks latitude and whose column
// index q walks longitude; pixel (0, 0) is the lower-left (south-west) node.
// Vectors always stack columns: u[n] = U(p, q) with n = P * q + p. Eigen's
// default column-major storage has exactly this layout, so a MatrixXd can be
// viewed as the flattened vector without copying.

#ifndef TECMAP_GRID_H_
#define TECMAP_GRID_H_

#include <Eigen/Core>

namespace tecmap {

using Index = Eigen::Index;

struct Grid {
  double lat_min = 0.0;  // degrees
  double lon_min = 0.0;  // degrees
  double dlat = 1.0;     // degrees per pixel
  double dlon = 1.0;     // degrees per pixel
  Index rows = 2;        // P, latitude
  Index cols = 2;        // Q, longitude

  // Throws ErrorCode::kParameter unless P, Q >= 2 and the spacings are
  // positive and finite.
  static Grid make(double lat_min, double lon_min, double dlat, double dlon,
                   Index rows, Index cols);

  void validate() const;

  Index size() const { return rows * cols; }
  double lat(Index p) const { return lat_min + static_cast<double>(p) * dlat; }
  double lon(Index q) const { return lon_min + static_cast<double>(q) * dlon; }
  double lat_max() const { return lat(rows - 1); }
  double lon_max() const { return lon(cols - 1); }

  bool same_shape(const Grid& other) const {
    return rows == other.rows && cols == other.cols;
  }
  friend bool operator==(const Grid&, const Grid&) = default;
};

// 26 x 63 nodes at 0.3 deg covering lat [36.0, 43.5], lon [26.0, 44.6].
Grid default_grid();

struct GridIndex {
  Index p = 0;
  Index q = 0;
  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

struct FlatIndex {
  Index n = 0;
  friend auto operator<=>(const FlatIndex&, const FlatIndex&) = default;
};

FlatIndex to_flat(GridIndex index, const Grid& grid);
GridIndex from_flat(FlatIndex index, const Grid& grid);

// Per-pixel TEC values (TECU) on a grid. Immutable after construction.
class TecMap {
 public:
  // Throws kDimension if the matrix shape differs from the grid and
  // kValidation if any entry is NaN or infinite.
  TecMap(const Grid& grid, Eigen::MatrixXd values);

  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Index p, Index q) const { return values_(p, q); }
  double at(GridIndex index) const { return values_(index.p, index.q); }

 private:
  Grid grid_;
  Eigen::MatrixXd values_;
};

Eigen::VectorXd vectorize(const TecMap& map);
TecMap devectorize(const Eigen::VectorXd& u, const Grid& grid);

// Snaps a coordinate to the closest node. Exact half-pixel ties go to the
// lower index. Coordinates more than half a pixel outside the node bounding
// box raise ErrorCode::kOutOfRegion.
GridIndex nearest_grid_index(double lat, double lon, const Grid& grid);

// Non-throwing variant of nearest_grid_index.
bool try_nearest_grid_index(double lat, double lon, const Grid& grid,
                            GridIndex* out);

}  // namespace tecmap

#endif  // TECMAP_GRID_H_
