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

#include "tecmap/dct.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "tecmap/error.h"

namespace tecmap {
namespace {

double alpha(Index k, Index n) {
  return std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
}

double cosine(Index k, Index p, Index n) {
  return std::cos(std::numbers::pi * static_cast<double>(2 * p + 1) *
                  static_cast<double>(k) / (2.0 * static_cast<double>(n)));
}

void check_shape(const Grid& grid, const Eigen::MatrixXd& m) {
  if (m.rows() != grid.rows || m.cols() != grid.cols) {
    std::ostringstream os;
    os << "coefficients are " << m.rows() << "x" << m.cols()
       << " but grid is " << grid.rows << "x" << grid.cols;
    throw Error(ErrorCode::kDimension, os.str());
  }
}

// Number of leading entries of `energy` (sorted descending) whose sum reaches
// fraction * total.
Index count_to_fraction(const std::vector<double>& energy, double fraction) {
  const double total = std::accumulate(energy.begin(), energy.end(), 0.0);
  const double target = fraction * total * (1.0 - 1e-12);
  double acc = 0.0;
  for (std::size_t i = 0; i < energy.size(); ++i) {
    acc += energy[i];
    if (acc >= target) return static_cast<Index>(i + 1);
  }
  return static_cast<Index>(energy.size());
}

std::vector<double> sorted_energy(const Eigen::VectorXd& s, bool skip_dc) {
  std::vector<double> e;
  e.reserve(static_cast<std::size_t>(s.size()));
  for (Index t = skip_dc ? 1 : 0; t < s.size(); ++t) e.push_back(s[t] * s[t]);
  std::stable_sort(e.begin(), e.end(), std::greater<>());
  return e;
}

}  // namespace

SpectralCoeffs::SpectralCoeffs(const Grid& grid, Eigen::MatrixXd values)
    : grid_(grid), values_(std::move(values)) {
  check_shape(grid_, values_);
  if (!values_.allFinite()) {
    throw Error(ErrorCode::kValidation, "coefficients contain non-finite values");
  }
}

SpectralCoeffs SpectralCoeffs::zeros(const Grid& grid) {
  return SpectralCoeffs(grid, Eigen::MatrixXd::Zero(grid.rows, grid.cols));
}

SpectralCoeffs SpectralCoeffs::from_vector(const Eigen::VectorXd& s,
                                           const Grid& grid) {
  if (s.size() != grid.size()) {
    throw Error(ErrorCode::kDimension,
                "coefficient vector length does not match grid");
  }
  return SpectralCoeffs(
      grid, Eigen::Map<const Eigen::MatrixXd>(s.data(), grid.rows, grid.cols));
}

Eigen::VectorXd SpectralCoeffs::vec() const {
  return Eigen::Map<const Eigen::VectorXd>(values_.data(), values_.size());
}

double basis_entry(Index k, Index l, Index p, Index q, Index rows,
                   Index cols) {
  if (rows < 1 || cols < 1 || k < 0 || k >= rows || p < 0 || p >= rows ||
      l < 0 || l >= cols || q < 0 || q >= cols) {
    throw Error(ErrorCode::kDimension, "DCT basis index out of range");
  }
  return alpha(k, rows) * alpha(l, cols) * cosine(k, p, rows) *
         cosine(l, q, cols);
}

Eigen::MatrixXd dct_matrix(Index n) {
  if (n < 1) throw Error(ErrorCode::kDimension, "DCT length must be positive");
  Eigen::MatrixXd c(n, n);
  for (Index k = 0; k < n; ++k) {
    const double a = alpha(k, n);
    for (Index p = 0; p < n; ++p) c(k, p) = a * cosine(k, p, n);
  }
  return c;
}

Dct2::Dct2(Index rows, Index cols)
    : rows_(rows), cols_(cols), row_(dct_matrix(rows)), col_(dct_matrix(cols)) {}

Eigen::MatrixXd Dct2::forward(const Eigen::MatrixXd& u) const {
  if (u.rows() != rows_ || u.cols() != cols_) {
    throw Error(ErrorCode::kDimension, "map shape does not match DCT plan");
  }
  return row_ * u * col_.transpose();
}

Eigen::MatrixXd Dct2::inverse(const Eigen::MatrixXd& s) const {
  if (s.rows() != rows_ || s.cols() != cols_) {
    throw Error(ErrorCode::kDimension,
                "coefficient shape does not match DCT plan");
  }
  return row_.transpose() * s * col_;
}

SpectralCoeffs dct2_forward(const TecMap& map) {
  const Dct2 plan(map.grid().rows, map.grid().cols);
  return SpectralCoeffs(map.grid(), plan.forward(map.values()));
}

TecMap dct2_inverse(const SpectralCoeffs& coeffs) {
  const Dct2 plan(coeffs.grid().rows, coeffs.grid().cols);
  return TecMap(coeffs.grid(), plan.inverse(coeffs.values()));
}

Index sparsity_level(const SpectralCoeffs& coeffs, double energy_fraction,
                     SparsityMeasure measure) {
  if (!(energy_fraction > 0.0) || energy_fraction > 1.0) {
    throw Error(ErrorCode::kParameter, "energy fraction must lie in (0, 1]");
  }
  const Eigen::VectorXd s = coeffs.vec();
  if (s.squaredNorm() == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "all coefficients are zero");
  }
  if (measure == SparsityMeasure::kTotalEnergy) {
    return count_to_fraction(sorted_energy(s, false), energy_fraction);
  }
  const Index dc = s[0] != 0.0 ? 1 : 0;
  const std::vector<double> ac = sorted_energy(s, true);
  if (std::all_of(ac.begin(), ac.end(), [](double e) { return e == 0.0; })) {
    return dc;
  }
  return dc + count_to_fraction(ac, energy_fraction);
}

}  // namespace tecmap
