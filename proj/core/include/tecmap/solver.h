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

// Weighted-l1, gradient-regularized compressive-sensing reconstruction.
//
// The map is recovered from its DCT coefficients s as the solution of
//
//   minimize   ||W s||_1 + gamma * f(D s)
//   subject to ||A s - b||^2 / ||b||^2 <= epsilon
//
// where W = diag(1 / w_t) with the first-order Butterworth response
// w_t = 1 / (1 + (k^2 + l^2) / sigma^2), and f(u) is the squared norm of the
// forward-difference gradient of the map (zero difference past the last row
// and column).
//
// The quadratic constraint is traded for a penalty lambda ||A s - b||^2; an
// outer bracketed search adjusts lambda until the penalized minimizer sits on
// the constraint boundary. Each penalized problem is solved with FISTA (step
// 1/L) plus a function-value restart that keeps the objective monotone.
//
// With replicate boundaries the forward-difference Laplacian is diagonalized
// by the DCT-II, so f(D s) = sum_t mu_t s_t^2 with
// mu_{k,l} = 4 sin^2(pi k / 2P) + 4 sin^2(pi l / 2Q). The solver evaluates f
// in that form; gradient_energy() evaluates it on the map directly.

#ifndef TECMAP_SOLVER_H_
#define TECMAP_SOLVER_H_

#include <vector>

#include <Eigen/Core>

#include "tecmap/dct.h"
#include "tecmap/grid.h"
#include "tecmap/sensing.h"

namespace tecmap {

enum class Weighting {
  kButterworth,
  // W = I, the unweighted basis-pursuit baseline (use with gamma = 0).
  kUniform,
};

struct SolverParams {
  double sigma = 5.0;     // Butterworth cutoff wave number
  double gamma = 1.0;     // gradient regularization weight
  double epsilon = 1e-4;  // bound on ||A s - b||^2 / ||b||^2
  // Accepted residual band is [epsilon (1 - feas_tol), epsilon].
  double feas_tol = 1e-3;
  double opt_tol = 1e-8;
  int max_iters = 20000;  // per penalized solve
  int multiplier_search_iters = 60;
  Weighting weighting = Weighting::kButterworth;

  // Throws kParameter on out-of-range values.
  void validate() const;
};

// gamma = 0, W = I.
SolverParams conventional_cs_params(double epsilon = 1e-4);

struct ReconstructionResult {
  SpectralCoeffs coeffs;
  TecMap map;
  double normalized_residual = 0.0;
  double objective = 0.0;  // ||W s||_1 + gamma f(D s)
  int iterations = 0;      // inner iterations summed over the lambda search
  bool converged = false;
  double lambda = 0.0;
};

// Butterworth response w, flattened with i = P * l + k. The penalty applied to
// coefficient i is 1 / w[i]. Throws kParameter for sigma <= 0.
Eigen::VectorXd butterworth_weights(Index rows, Index cols, double sigma);

// Eigenvalues mu_{k,l} of the forward-difference Laplacian in the DCT basis.
Eigen::MatrixXd gradient_spectrum(Index rows, Index cols);

// Sum of squared forward differences along both axes.
double gradient_energy(const TecMap& map);

// Same quantity evaluated from the coefficients through gradient_spectrum().
double gradient_energy(const SpectralCoeffs& coeffs);

// Proximal map of tau * |x| / weight: sign(x) max(|x| - tau / weight, 0).
double weighted_soft_threshold(double x, double tau, double weight);

// The penalized problem
//   F(s) = sum_t c_t |s_t| + gamma sum_t mu_t s_t^2 + lambda ||A s - b||^2
// split into its smooth quadratic part and the weighted-l1 part.
class PenalizedProblem {
 public:
  PenalizedProblem(const ObservationSet& observations,
                   const SolverParams& params, double lambda);

  double lambda() const { return lambda_; }
  const SensingOperator& sensing() const { return sensing_; }
  const Eigen::VectorXd& rhs() const { return b_; }
  // c_t as a P x Q matrix.
  const Eigen::MatrixXd& penalty() const { return penalty_; }

  double smooth_value(const Eigen::MatrixXd& s) const;
  Eigen::MatrixXd smooth_gradient(const Eigen::MatrixXd& s) const;
  double l1_value(const Eigen::MatrixXd& s) const;
  double value(const Eigen::MatrixXd& s) const;
  // ||W s||_1 + gamma f(D s), the objective of the constrained problem.
  double regularizer_value(const Eigen::MatrixXd& s) const;

  // Upper bound on the curvature of the smooth part:
  // 2 (gamma max mu + lambda), using ||A|| = 1.
  double lipschitz() const { return lipschitz_; }

  // prox of step * sum_t c_t |x_t|.
  Eigen::MatrixXd prox(const Eigen::MatrixXd& x, double step) const;

  // Internals shared with the FISTA loop; `as` is A s precomputed.
  double value_given_as(const Eigen::MatrixXd& s, const Eigen::VectorXd& as) const;
  Eigen::MatrixXd gradient_given_as(const Eigen::MatrixXd& s,
                                    const Eigen::VectorXd& as) const;

 private:
  SensingOperator sensing_;
  Eigen::VectorXd b_;
  Eigen::MatrixXd penalty_;
  Eigen::MatrixXd gamma_mu_;
  double lambda_;
  double lipschitz_;
};

struct PenalizedSolution {
  SpectralCoeffs coeffs;
  double objective = 0.0;  // penalized objective F
  int iterations = 0;
  int restarts = 0;
  bool converged = false;
};

// Minimizes F for a fixed lambda > 0. Starts from `warm_start` when given,
// otherwise from A^T b. When `history` is non-null it receives F after every
// iteration (non-increasing).
PenalizedSolution solve_penalized(const ObservationSet& observations,
                                  const SolverParams& params, double lambda,
                                  const SpectralCoeffs* warm_start = nullptr,
                                  std::vector<double>* history = nullptr);

// Solves the constrained problem. Throws kDegenerateInput when b = 0.
// Running out of iterations is reported through `converged`, not thrown.
ReconstructionResult reconstruct(const ObservationSet& observations,
                                 const SolverParams& params);

}  // namespace tecmap

#endif  // TECMAP_SOLVER_H_
