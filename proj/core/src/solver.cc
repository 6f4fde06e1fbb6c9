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

#include "tecmap/solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>

#include "tecmap/error.h"

namespace tecmap {
namespace {

// Consecutive small-change iterations required to stop.
constexpr int kStallWindow = 5;

double squared(double x) { return x * x; }

Eigen::MatrixXd penalty_matrix(Index rows, Index cols,
                               const SolverParams& params) {
  if (params.weighting == Weighting::kUniform) {
    return Eigen::MatrixXd::Ones(rows, cols);
  }
  const Eigen::VectorXd w = butterworth_weights(rows, cols, params.sigma);
  return Eigen::Map<const Eigen::MatrixXd>(w.data(), rows, cols)
      .cwiseInverse();
}

struct SearchPoint {
  double lambda;
  double residual;
};

// Next multiplier inside the bracket (lo, hi). The residual behaves roughly
// like a power of lambda, so interpolate log(residual) against log(lambda),
// then keep the split at least 10% away from either end so that the bracket
// always shrinks.
double split_bracket(const SearchPoint& lo, const SearchPoint& hi,
                     double target) {
  const double a = std::log(lo.lambda);
  const double b = std::log(hi.lambda);
  double x = 0.5 * (a + b);
  const double ra = std::log(lo.residual);
  const double rb = std::log(hi.residual);
  if (ra > rb) {
    x = a + (std::log(target) - ra) * (b - a) / (rb - ra);
  }
  const double margin = 0.1 * (b - a);
  x = std::clamp(x, a + margin, b - margin);
  return std::exp(x);
}

}  // namespace

void SolverParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kParameter, "sigma must be positive");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kParameter, "gamma must be non-negative");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kParameter, "epsilon must be positive");
  }
  if (!(feas_tol > 0.0) || feas_tol >= 1.0) {
    throw Error(ErrorCode::kParameter, "feas_tol must lie in (0, 1)");
  }
  if (!(opt_tol > 0.0)) {
    throw Error(ErrorCode::kParameter, "opt_tol must be positive");
  }
  if (max_iters < 1 || multiplier_search_iters < 1) {
    throw Error(ErrorCode::kParameter, "iteration limits must be at least 1");
  }
}

SolverParams conventional_cs_params(double epsilon) {
  SolverParams p;
  p.gamma = 0.0;
  p.epsilon = epsilon;
  p.weighting = Weighting::kUniform;
  return p;
}

Eigen::VectorXd butterworth_weights(Index rows, Index cols, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kParameter, "sigma must be positive");
  }
  Eigen::VectorXd w(rows * cols);
  const double s2 = sigma * sigma;
  for (Index l = 0; l < cols; ++l) {
    for (Index k = 0; k < rows; ++k) {
      const auto kk = static_cast<double>(k * k + l * l);
      w[rows * l + k] = 1.0 / (1.0 + kk / s2);
    }
  }
  return w;
}

Eigen::MatrixXd gradient_spectrum(Index rows, Index cols) {
  Eigen::MatrixXd mu(rows, cols);
  for (Index l = 0; l < cols; ++l) {
    const double ml = 4.0 * squared(std::sin(std::numbers::pi *
                                             static_cast<double>(l) /
                                             (2.0 * static_cast<double>(cols))));
    for (Index k = 0; k < rows; ++k) {
      mu(k, l) = ml + 4.0 * squared(std::sin(std::numbers::pi *
                                             static_cast<double>(k) /
                                             (2.0 * static_cast<double>(rows))));
    }
  }
  return mu;
}

double gradient_energy(const TecMap& map) {
  const Eigen::MatrixXd& u = map.values();
  const Index P = u.rows();
  const Index Q = u.cols();
  const double along_lat =
      (u.bottomRows(P - 1) - u.topRows(P - 1)).squaredNorm();
  const double along_lon =
      (u.rightCols(Q - 1) - u.leftCols(Q - 1)).squaredNorm();
  return along_lat + along_lon;
}

double gradient_energy(const SpectralCoeffs& coeffs) {
  const Eigen::MatrixXd mu =
      gradient_spectrum(coeffs.grid().rows, coeffs.grid().cols);
  return (mu.array() * coeffs.values().array().square()).sum();
}

double weighted_soft_threshold(double x, double tau, double weight) {
  const double shrunk = std::abs(x) - tau / weight;
  if (shrunk <= 0.0) return 0.0;
  return std::copysign(shrunk, x);
}

PenalizedProblem::PenalizedProblem(const ObservationSet& observations,
                                   const SolverParams& params, double lambda)
    : sensing_(observations),
      b_(observations.values()),
      penalty_(penalty_matrix(observations.grid().rows,
                              observations.grid().cols, params)),
      gamma_mu_(params.gamma * gradient_spectrum(observations.grid().rows,
                                                 observations.grid().cols)),
      lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kParameter, "lambda must be positive");
  }
  lipschitz_ = 2.0 * (gamma_mu_.maxCoeff() + lambda_);
}

double PenalizedProblem::value_given_as(const Eigen::MatrixXd& s,
                                        const Eigen::VectorXd& as) const {
  return l1_value(s) + (gamma_mu_.array() * s.array().square()).sum() +
         lambda_ * (as - b_).squaredNorm();
}

Eigen::MatrixXd PenalizedProblem::gradient_given_as(
    const Eigen::MatrixXd& s, const Eigen::VectorXd& as) const {
  Eigen::MatrixXd g = sensing_.adjoint(as - b_);
  g *= 2.0 * lambda_;
  g.array() += 2.0 * gamma_mu_.array() * s.array();
  return g;
}

double PenalizedProblem::smooth_value(const Eigen::MatrixXd& s) const {
  return (gamma_mu_.array() * s.array().square()).sum() +
         lambda_ * (sensing_.apply(s) - b_).squaredNorm();
}

Eigen::MatrixXd PenalizedProblem::smooth_gradient(
    const Eigen::MatrixXd& s) const {
  return gradient_given_as(s, sensing_.apply(s));
}

double PenalizedProblem::l1_value(const Eigen::MatrixXd& s) const {
  return (penalty_.array() * s.array().abs()).sum();
}

double PenalizedProblem::value(const Eigen::MatrixXd& s) const {
  return value_given_as(s, sensing_.apply(s));
}

double PenalizedProblem::regularizer_value(const Eigen::MatrixXd& s) const {
  return l1_value(s) + (gamma_mu_.array() * s.array().square()).sum();
}

Eigen::MatrixXd PenalizedProblem::prox(const Eigen::MatrixXd& x,
                                       double step) const {
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Index i = 0; i < x.size(); ++i) {
    out(i) = weighted_soft_threshold(x(i), step, 1.0 / penalty_(i));
  }
  return out;
}

PenalizedSolution solve_penalized(const ObservationSet& observations,
                                  const SolverParams& params, double lambda,
                                  const SpectralCoeffs* warm_start,
                                  std::vector<double>* history) {
  params.validate();
  const PenalizedProblem problem(observations, params, lambda);
  const SensingOperator& a = problem.sensing();
  const Grid& grid = observations.grid();

  Eigen::MatrixXd x;
  if (warm_start != nullptr) {
    if (!warm_start->grid().same_shape(grid)) {
      throw Error(ErrorCode::kDimension, "warm start does not match the grid");
    }
    x = warm_start->values();
  } else {
    x = a.adjoint(problem.rhs());
  }
  Eigen::VectorXd ax = a.apply(x);
  double fx = problem.value_given_as(x, ax);

  const double step = 1.0 / problem.lipschitz();
  Eigen::MatrixXd y = x;
  Eigen::VectorXd ay = ax;
  double t = 1.0;
  bool just_restarted = false;
  int stall = 0;
  int restarts = 0;
  int it = 0;
  bool converged = false;

  while (it < params.max_iters) {
    ++it;
    const Eigen::MatrixXd grad = problem.gradient_given_as(y, ay);
    Eigen::MatrixXd z = problem.prox(y - step * grad, step);
    Eigen::VectorXd az = a.apply(z);
    const double fz = problem.value_given_as(z, az);

    if (fz > fx) {
      if (just_restarted) {
        // A plain proximal step from x no longer decreases F: x is
        // stationary to working precision.
        converged = true;
        break;
      }
      // Drop the momentum and retry from the last accepted iterate.
      t = 1.0;
      y = x;
      ay = ax;
      just_restarted = true;
      ++restarts;
      if (history != nullptr) history->push_back(fx);
      continue;
    }
    just_restarted = false;

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    y = z + beta * (z - x);
    ay = az + beta * (az - ax);

    const double change =
        std::abs(fx - fz) / std::max(std::abs(fx), std::numeric_limits<double>::min());
    x = std::move(z);
    ax = std::move(az);
    fx = fz;
    t = t_next;
    if (history != nullptr) history->push_back(fx);

    stall = change < params.opt_tol ? stall + 1 : 0;
    if (stall >= kStallWindow) {
      converged = true;
      break;
    }
  }
  return PenalizedSolution{SpectralCoeffs(grid, std::move(x)), fx, it,
                           restarts, converged};
}

ReconstructionResult reconstruct(const ObservationSet& observations,
                                 const SolverParams& params) {
  params.validate();
  const Grid& grid = observations.grid();
  const Eigen::VectorXd b = observations.values();
  const double b_energy = b.squaredNorm();
  if (b_energy == 0.0) {
    throw Error(ErrorCode::kDegenerateInput,
                "all observations are zero; the normalized residual is undefined");
  }

  const SensingOperator a(observations);
  const Eigen::MatrixXd penalty =
      penalty_matrix(grid.rows, grid.cols, params);
  auto normalized_residual = [&](const SpectralCoeffs& s) {
    return (a.apply(s.values()) - b).squaredNorm() / b_energy;
  };
  auto finish = [&](SpectralCoeffs coeffs, double lambda, int iterations,
                    bool converged) {
    const double residual = normalized_residual(coeffs);
    const double value =
        (penalty.array() * coeffs.values().array().abs()).sum() +
        params.gamma * gradient_energy(coeffs);
    TecMap map = dct2_inverse(coeffs);
    return ReconstructionResult{std::move(coeffs), std::move(map), residual,
                                value, iterations, converged, lambda};
  };

  // s = 0 minimizes the regularizer and has residual exactly 1.
  if (params.epsilon >= 1.0) {
    return finish(SpectralCoeffs::zeros(grid), 0.0, 0, true);
  }

  // Below lambda_zero the penalized minimizer is s = 0: the subgradient
  // condition |2 lambda (A^T b)_t| <= c_t holds for every t.
  const Eigen::MatrixXd atb = a.adjoint(b);
  double lambda_zero = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < atb.size(); ++i) {
    if (atb(i) != 0.0) {
      lambda_zero = std::min(lambda_zero, penalty(i) / (2.0 * std::abs(atb(i))));
    }
  }

  // Accepted residuals lie on the feasible side of the constraint.
  const double lower_target = params.epsilon * (1.0 - params.feas_tol);
  const double upper_target = params.epsilon;
  const double aim = params.epsilon * (1.0 - 0.5 * params.feas_tol);

  SearchPoint lo{lambda_zero, 1.0};
  std::optional<SearchPoint> hi;
  std::optional<SpectralCoeffs> feasible;  // solution at hi
  std::optional<SpectralCoeffs> warm;
  std::optional<SpectralCoeffs> last;
  double last_lambda = lambda_zero;
  int total_iters = 0;

  double lambda = 4.0 * lambda_zero;
  for (int search = 0; search < params.multiplier_search_iters; ++search) {
    PenalizedSolution sol = solve_penalized(
        observations, params, lambda, warm ? &*warm : nullptr, nullptr);
    total_iters += sol.iterations;
    const double residual = normalized_residual(sol.coeffs);

    if (residual >= lower_target && residual <= upper_target) {
      return finish(std::move(sol.coeffs), lambda, total_iters, sol.converged);
    }
    if (residual > upper_target) {
      lo = {lambda, residual};
    } else {
      hi = SearchPoint{lambda, residual};
      feasible = sol.coeffs;
    }
    warm = sol.coeffs;
    last = std::move(sol.coeffs);
    last_lambda = lambda;

    if (hi) {
      lambda = split_bracket(lo, *hi, aim);
    } else {
      // Residual falls roughly like lambda^-2; overshoot that estimate so the
      // bracket closes quickly, growing by at least 2x and at most 100x.
      const double factor =
          std::clamp(1.5 * std::sqrt(residual / aim), 2.0, 100.0);
      lambda *= factor;
    }
  }

  if (feasible) {
    return finish(std::move(*feasible), hi->lambda, total_iters, false);
  }
  return finish(std::move(*last), last_lambda, total_iters, false);
}

}  // namespace tecmap
