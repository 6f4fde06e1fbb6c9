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

#include <random>

#include <gtest/gtest.h>

#include "error_code.h"
#include "oracles.h"
#include "tecmap/evaluation.h"

namespace tecmap {
namespace {

using testing::error_code_of;

ObservationSet random_observations(const Grid& g, Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> n(20.0, 3.0);
  std::vector<Observation> e;
  for (Index i : draw_subset(rng, g.size(), m)) e.push_back({FlatIndex{i}, n(rng)});
  return ObservationSet(g, e);
}

TEST(ObservationSet, SortsAndValidates) {
  const Grid g = Grid::make(0, 0, 1, 1, 3, 3);
  const ObservationSet obs(g, {{FlatIndex{5}, 1.0}, {FlatIndex{2}, 2.0}});
  EXPECT_EQ(obs.entries()[0].index.n, 2);
  EXPECT_DOUBLE_EQ(obs.values()[1], 1.0);
  EXPECT_EQ(error_code_of([&] { ObservationSet(g, {}); }), ErrorCode::kNoObservations);
  EXPECT_EQ(error_code_of([&] { ObservationSet(g, {{FlatIndex{9}, 1.0}}); }),
            ErrorCode::kDimension);
  EXPECT_EQ(error_code_of([&] {
              ObservationSet(g, {{FlatIndex{1}, 1.0}, {FlatIndex{1}, 2.0}});
            }),
            ErrorCode::kValidation);
}

TEST(BuildObservationSet, AveragesCoincidentStationsAndDropsOutsiders) {
  const Grid g = Grid::make(0, 0, 1, 1, 4, 4);
  const std::vector<Measurement> ms = {
      {{"A", 1.1, 1.0}, 10.0},
      {{"B", 0.9, 1.2}, 14.0},
      {{"C", 3.0, 2.0}, 5.0},
      {{"D", 9.0, 9.0}, 7.0},
  };
  const SnapReport r = build_observation_set(ms, g);
  ASSERT_EQ(r.observations.size(), 2);
  EXPECT_EQ(r.observations.entries()[0].index.n, 4 * 1 + 1);
  EXPECT_DOUBLE_EQ(r.observations.entries()[0].value, 12.0);
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0], "D");
  ASSERT_EQ(r.merged.size(), 1u);
  EXPECT_EQ(r.merged[0].second, 2);
}

TEST(BuildObservationSet, NothingInside) {
  const Grid g = Grid::make(0, 0, 1, 1, 4, 4);
  const std::vector<Measurement> ms = {{{"X", 50.0, 50.0}, 1.0}};
  EXPECT_EQ(error_code_of([&] { build_observation_set(ms, g); }),
            ErrorCode::kNoObservations);
}

TEST(SensingOperator, MatchesDenseRows) {
  std::mt19937_64 rng(5);
  const Grid g = Grid::make(0, 0, 1, 1, 5, 7);
  const ObservationSet obs = random_observations(g, 12, rng);
  std::vector<Index> pixels;
  for (const Observation& o : obs.entries()) pixels.push_back(o.index.n);
  const Eigen::MatrixXd a = oracle::dense_sensing(5, 7, pixels);
  const SensingOperator op(obs);
  const Eigen::MatrixXd s = Eigen::MatrixXd::Random(5, 7);
  EXPECT_LT((op.apply(s) - a * s.reshaped()).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::VectorXd r = Eigen::VectorXd::Random(12);
  EXPECT_LT((op.adjoint(r).reshaped() - a.transpose() * r).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SensingOperator, RowsAreOrthonormal) {
  std::mt19937_64 rng(8);
  const Grid g = Grid::make(0, 0, 1, 1, 6, 6);
  const ObservationSet obs = random_observations(g, 10, rng);
  const SensingOperator op(obs);
  for (Index i = 0; i < 10; ++i) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(10, i);
    EXPECT_LT((op.apply(op.adjoint(e)) - e).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(SensingOperator, FreeFunctionsAgree) {
  std::mt19937_64 rng(9);
  const Grid g = Grid::make(0, 0, 1, 1, 4, 5);
  const ObservationSet obs = random_observations(g, 6, rng);
  const SpectralCoeffs s(g, Eigen::MatrixXd::Random(4, 5));
  const SensingOperator op(obs);
  EXPECT_EQ(apply_sensing(s, obs), op.apply(s.values()));
  const Eigen::VectorXd r = Eigen::VectorXd::Random(6);
  EXPECT_EQ(apply_sensing_adjoint(r, obs).values(), op.adjoint(r));
}

TEST(SensingOperator, ApplyOfSynthesisSamplesTheMap) {
  std::mt19937_64 rng(4);
  const Grid g = default_grid();
  const ObservationSet obs = random_observations(g, 30, rng);
  const Eigen::MatrixXd u = Eigen::MatrixXd::Random(g.rows, g.cols);
  const SpectralCoeffs s = dct2_forward(TecMap(g, u));
  const Eigen::VectorXd sampled = apply_sensing(s, obs);
  for (Index m = 0; m < obs.size(); ++m) {
    const GridIndex i = from_flat(obs.entries()[static_cast<std::size_t>(m)].index, g);
    EXPECT_NEAR(sampled[m], u(i.p, i.q), 1e-12);
  }
}

TEST(BuildObservationSet, StationOnNode) {
  const Grid g = default_grid();
  const std::vector<Measurement> ms = {{{"N", g.lat(4), g.lon(9)}, 12.5}};
  const SnapReport r = build_observation_set(ms, g);
  ASSERT_EQ(r.observations.size(), 1);
  EXPECT_EQ(r.observations.entries()[0].index.n, 238);
  EXPECT_DOUBLE_EQ(r.observations.entries()[0].value, 12.5);
}

TEST(BuildObservationSet, StationOneDegreeOutsideIsDropped) {
  const Grid g = default_grid();
  const std::vector<Measurement> ms = {{{"IN", 38.0, 30.0}, 1.0},
                                       {{"OUT", g.lat_min - 1.0, 30.0}, 2.0}};
  const SnapReport r = build_observation_set(ms, g);
  EXPECT_EQ(r.observations.size(), 1);
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0], "OUT");
}

TEST(SensingOperator, ConstantMapSamplesToOnes) {
  std::mt19937_64 rng(1);
  const Grid g = Grid::make(0, 0, 1, 1, 4, 4);
  const ObservationSet obs = random_observations(g, 5, rng);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 4);
  s(0, 0) = 4.0;
  const Eigen::VectorXd v = apply_sensing(SpectralCoeffs(g, s), obs);
  EXPECT_LT((v.array() - 1.0).abs().maxCoeff(), 1e-14);
}

TEST(SensingOperator, FullSamplingIsSynthesis) {
  const Grid g = Grid::make(0, 0, 1, 1, 4, 3);
  std::vector<Observation> all;
  for (Index n = 0; n < g.size(); ++n) all.push_back({FlatIndex{n}, 1.0});
  const ObservationSet obs(g, all);
  const SpectralCoeffs s(g, Eigen::MatrixXd::Random(4, 3));
  EXPECT_LT((apply_sensing(s, obs) - vectorize(dct2_inverse(s))).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(SensingOperator, ZeroResidualAndNormBound) {
  std::mt19937_64 rng(2);
  const Grid g = Grid::make(0, 0, 1, 1, 5, 7);
  const ObservationSet obs = random_observations(g, 9, rng);
  EXPECT_EQ(apply_sensing_adjoint(Eigen::VectorXd::Zero(9), obs).values().cwiseAbs().maxCoeff(),
            0.0);
  for (int t = 0; t < 20; ++t) {
    const SpectralCoeffs s(g, Eigen::MatrixXd::Random(5, 7));
    EXPECT_LE(apply_sensing(s, obs).norm(), s.values().norm() * (1.0 + 1e-14));
  }
  EXPECT_EQ(error_code_of([&] { apply_sensing_adjoint(Eigen::VectorXd::Zero(8), obs); }),
            ErrorCode::kDimension);
  const Grid other = Grid::make(0, 0, 1, 1, 4, 7);
  EXPECT_EQ(error_code_of([&] { apply_sensing(SpectralCoeffs::zeros(other), obs); }),
            ErrorCode::kDimension);
}

}  // namespace
}  // namespace tecmap
