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

// Orthonormal 2D DCT-II between map space and coefficient space.
//
// The synthesis basis is
//
//   D_{k,l}(p, q) = a_k a_l cos(pi (2p + 1) k / 2P) cos(pi (2q + 1) l / 2Q)
//
// with a_0 = sqrt(1/P), a_k = sqrt(2/P) otherwise (and likewise along Q).
// Coefficients are held as a P x Q matrix S(k, l); flattened, s[t] = S(k, l)
// with t = P * l + k, matching the map convention in grid.h.

#ifndef TECMAP_DCT_H_
#define TECMAP_DCT_H_

#include <Eigen/Core>

#include "tecmap/grid.h"

namespace tecmap {

// 2D-DCT coefficients of a map on `grid`.
class SpectralCoeffs {
 public:
  SpectralCoeffs(const Grid& grid, Eigen::MatrixXd values);

  static SpectralCoeffs zeros(const Grid& grid);
  static SpectralCoeffs from_vector(const Eigen::VectorXd& s, const Grid& grid);

  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Index k, Index l) const { return values_(k, l); }

  // Flattened view, s[P * l + k] = S(k, l).
  Eigen::VectorXd vec() const;

 private:
  Grid grid_;
  Eigen::MatrixXd values_;
};

// Single entry D_{k,l}(p, q) of the synthesis basis.
double basis_entry(Index k, Index l, Index p, Index q, Index rows, Index cols);

// Orthonormal 1D DCT-II matrix C with C(k, p) = a_k cos(pi (2p + 1) k / 2n).
Eigen::MatrixXd dct_matrix(Index n);

// Separable transform plan for a fixed P x Q shape. forward() computes
// S = C_P U C_Q^T and inverse() computes U = C_P^T S C_Q, each in
// O(PQ (P + Q)) without forming the PQ x PQ matrix D.
class Dct2 {
 public:
  Dct2(Index rows, Index cols);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& u) const;
  Eigen::MatrixXd inverse(const Eigen::MatrixXd& s) const;

  // 1D factors, exposed for operators that only need part of the synthesis.
  const Eigen::MatrixXd& row_matrix() const { return row_; }
  const Eigen::MatrixXd& col_matrix() const { return col_; }

 private:
  Index rows_;
  Index cols_;
  Eigen::MatrixXd row_;  // C_P
  Eigen::MatrixXd col_;  // C_Q
};

SpectralCoeffs dct2_forward(const TecMap& map);
TecMap dct2_inverse(const SpectralCoeffs& coeffs);

enum class SparsityMeasure {
  // K largest-magnitude coefficients hold the fraction of the total energy.
  kTotalEnergy,
  // The DC coefficient is always counted; the K - 1 largest remaining
  // coefficients hold the fraction of the non-DC energy.
  kAcEnergy,
};

// Smallest K such that the K largest-magnitude coefficients reach
// `energy_fraction` under `measure`. Equal magnitudes are taken in flat-index
// order. Throws kDegenerateInput for an all-zero input and kParameter for a
// fraction outside (0, 1].
Index sparsity_level(const SpectralCoeffs& coeffs, double energy_fraction,
                     SparsityMeasure measure = SparsityMeasure::kTotalEnergy);

}  // namespace tecmap

#endif  // TECMAP_DCT_H_
