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

#include "tecmap/kriging.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "tecmap/error.h"

namespace tecmap {
namespace {

constexpr double kCoincident = 1e-9;  // degrees
constexpr int kRangeScan = 256;
constexpr int kGoldenIters = 80;

double distance(double lat0, double lon0, double lat1, double lon1) {
  return std::hypot(lat1 - lat0, lon1 - lon0);
}

double shape(VariogramKind kind, double x) {
  switch (kind) {
    case VariogramKind::kSpherical:
      return x < 1.0 ? 1.5 * x - 0.5 * x * x * x : 1.0;
    case VariogramKind::kExponential:
      return 1.0 - std::exp(-3.0 * x);
    case VariogramKind::kGaussian:
      return 1.0 - std::exp(-3.0 * x * x);
  }
  return 1.0;
}

void check_points(std::span<const ScatteredPoint> obs) {
  for (const ScatteredPoint& p : obs) {
    if (!std::isfinite(p.lat) || !std::isfinite(p.lon) ||
        !std::isfinite(p.value)) {
      throw Error(ErrorCode::kValidation, "scattered observation is not finite");
    }
  }
}

struct LinearFit {
  double nugget = 0.0;
  double partial_sill = 0.0;
  double residual = std::numeric_limits<double>::infinity();
};

// Best (nugget, partial sill) >= 0 for a fixed range. The constrained optimum
// of a two-variable least-squares problem is either the unconstrained one or
// lies on one of the axes, so all feasible candidates are compared.
LinearFit fit_linear(std::span<const LagBin> bins, VariogramKind kind,
                     double range) {
  double s00 = 0, s01 = 0, s11 = 0, t0 = 0, t1 = 0;
  for (const LagBin& b : bins) {
    const auto n = static_cast<double>(b.pair_count);
    const double f = shape(kind, b.lag / range);
    s00 += n;
    s01 += n * f;
    s11 += n * f * f;
    t0 += n * b.semivariance;
    t1 += n * f * b.semivariance;
  }
  auto residual = [&](double c0, double c1) {
    double r = 0.0;
    for (const LagBin& b : bins) {
      const double e =
          b.semivariance - (c0 + c1 * shape(kind, b.lag / range));
      r += static_cast<double>(b.pair_count) * e * e;
    }
    return r;
  };
  LinearFit best;
  auto consider = [&](double c0, double c1) {
    if (c0 < 0.0 || c1 < 0.0 || !std::isfinite(c0) || !std::isfinite(c1)) {
      return;
    }
    const double r = residual(c0, c1);
    if (r < best.residual) best = {c0, c1, r};
  };
  const double det = s00 * s11 - s01 * s01;
  if (det > 1e-12 * s00 * s11) {
    consider((s11 * t0 - s01 * t1) / det, (s00 * t1 - s01 * t0) / det);
  }
  if (s11 > 0.0) consider(0.0, std::max(0.0, t1 / s11));
  if (s00 > 0.0) consider(std::max(0.0, t0 / s00), 0.0);
  consider(0.0, 0.0);
  return best;
}

}  // namespace

std::string_view to_string(VariogramKind kind) {
  switch (kind) {
    case VariogramKind::kSpherical:
      return "spherical";
    case VariogramKind::kExponential:
      return "exponential";
    case VariogramKind::kGaussian:
      return "gaussian";
  }
  return "?";
}

VariogramKind parse_variogram_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "spherical") return VariogramKind::kSpherical;
  if (lower == "exponential") return VariogramKind::kExponential;
  if (lower == "gaussian") return VariogramKind::kGaussian;
  throw Error(ErrorCode::kParameter,
              "unknown semivariogram kind '" + std::string(name) + "'");
}

void SemivariogramModel::validate() const {
  if (!(nugget >= 0.0) || !(sill >= nugget) || !std::isfinite(sill)) {
    throw Error(ErrorCode::kParameter,
                "semivariogram needs 0 <= nugget <= sill");
  }
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw Error(ErrorCode::kParameter, "semivariogram range must be positive");
  }
}

double SemivariogramModel::operator()(double h) const {
  if (h <= 0.0) return 0.0;
  return nugget + (sill - nugget) * shape(kind, h / range);
}

std::vector<ScatteredPoint> to_scattered(
    std::span<const Measurement> measurements) {
  std::vector<ScatteredPoint> out;
  out.reserve(measurements.size());
  for (const Measurement& m : measurements) {
    out.push_back({m.station.lat, m.station.lon, m.tecu});
  }
  return out;
}

std::vector<ScatteredPoint> idw_densify(std::span<const ScatteredPoint> obs,
                                        const Grid& grid, double power,
                                        double target_spacing) {
  if (obs.empty()) {
    throw Error(ErrorCode::kDegenerateInput, "IDW needs at least one observation");
  }
  if (!(power > 0.0) || !(target_spacing > 0.0)) {
    throw Error(ErrorCode::kParameter,
                "IDW power and spacing must be positive");
  }
  check_points(obs);
  std::vector<ScatteredPoint> out(obs.begin(), obs.end());
  const double slack = 1e-9;
  const auto n_lat = static_cast<Index>(
      std::floor((grid.lat_max() - grid.lat_min) / target_spacing + slack));
  const auto n_lon = static_cast<Index>(
      std::floor((grid.lon_max() - grid.lon_min) / target_spacing + slack));
  for (Index i = 0; i <= n_lat; ++i) {
    for (Index j = 0; j <= n_lon; ++j) {
      const double lat = grid.lat_min + static_cast<double>(i) * target_spacing;
      const double lon = grid.lon_min + static_cast<double>(j) * target_spacing;
      double num = 0.0;
      double den = 0.0;
      bool coincident = false;
      double copied = 0.0;
      for (const ScatteredPoint& o : obs) {
        const double d = distance(lat, lon, o.lat, o.lon);
        if (d < kCoincident) {
          coincident = true;
          copied = o.value;
          break;
        }
        const double w = std::pow(d, -power);
        num += w * o.value;
        den += w;
      }
      out.push_back({lat, lon, coincident ? copied : num / den});
    }
  }
  return out;
}

std::vector<LagBin> empirical_semivariogram(std::span<const ScatteredPoint> obs,
                                            int n_bins, double max_lag) {
  if (obs.size() < 2) {
    throw Error(ErrorCode::kDegenerateInput,
                "semivariogram needs at least two observations");
  }
  if (n_bins < 1 || !(max_lag > 0.0)) {
    throw Error(ErrorCode::kParameter,
                "semivariogram needs n_bins >= 1 and max_lag > 0");
  }
  check_points(obs);
  const double width = max_lag / n_bins;
  std::vector<double> lag_sum(static_cast<std::size_t>(n_bins), 0.0);
  std::vector<double> sq_sum(static_cast<std::size_t>(n_bins), 0.0);
  std::vector<Index> count(static_cast<std::size_t>(n_bins), 0);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    for (std::size_t j = i + 1; j < obs.size(); ++j) {
      const double d = distance(obs[i].lat, obs[i].lon, obs[j].lat, obs[j].lon);
      if (d > max_lag) continue;
      const auto bin = static_cast<std::size_t>(
          std::min<Index>(static_cast<Index>(d / width), n_bins - 1));
      const double dv = obs[i].value - obs[j].value;
      lag_sum[bin] += d;
      sq_sum[bin] += dv * dv;
      ++count[bin];
    }
  }
  std::vector<LagBin> out;
  for (std::size_t b = 0; b < count.size(); ++b) {
    if (count[b] == 0) continue;
    const auto n = static_cast<double>(count[b]);
    out.push_back({lag_sum[b] / n, sq_sum[b] / (2.0 * n), count[b]});
  }
  return out;
}

double fit_residual(std::span<const LagBin> bins,
                    const SemivariogramModel& model) {
  double r = 0.0;
  for (const LagBin& b : bins) {
    const double e = b.semivariance - model(b.lag);
    r += static_cast<double>(b.pair_count) * e * e;
  }
  return r;
}

SemivariogramFit fit_semivariogram(std::span<const LagBin> bins,
                                   VariogramKind kind) {
  if (bins.size() < 3) {
    std::ostringstream os;
    os << "semivariogram fit needs at least 3 non-empty bins, got "
       << bins.size();
    throw Error(ErrorCode::kFit, os.str());
  }
  double min_lag = std::numeric_limits<double>::infinity();
  double max_lag = 0.0;
  for (const LagBin& b : bins) {
    if (b.pair_count <= 0 || !std::isfinite(b.semivariance) ||
        !std::isfinite(b.lag)) {
      throw Error(ErrorCode::kFit, "invalid lag bin");
    }
    if (b.lag > 0.0) min_lag = std::min(min_lag, b.lag);
    max_lag = std::max(max_lag, b.lag);
  }
  if (!(max_lag > 0.0)) {
    throw Error(ErrorCode::kFit, "all lags are zero");
  }
  const double lo = std::log(min_lag / 4.0);
  const double hi = std::log(4.0 * max_lag);

  auto eval = [&](double log_range) {
    return fit_linear(bins, kind, std::exp(log_range)).residual;
  };

  int best_i = 0;
  double best_r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kRangeScan; ++i) {
    const double x = lo + (hi - lo) * i / (kRangeScan - 1);
    const double r = eval(x);
    if (r < best_r) {
      best_r = r;
      best_i = i;
    }
  }
  const double step = (hi - lo) / (kRangeScan - 1);
  double a = lo + step * std::max(best_i - 1, 0);
  double b = lo + step * std::min(best_i + 1, kRangeScan - 1);
  double best_x = lo + step * best_i;
  // Golden-section refinement between the neighbours of the best scan point.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  for (int it = 0; it < kGoldenIters; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = eval(d);
    }
  }
  if (std::min(fc, fd) < best_r) best_x = fc < fd ? c : d;

  const double range = std::exp(best_x);
  const LinearFit lin = fit_linear(bins, kind, range);
  SemivariogramFit fit;
  fit.model = {kind, lin.nugget, lin.nugget + lin.partial_sill, range};
  fit.weighted_residual = lin.residual;
  fit.degenerate = lin.partial_sill <= 1e-9 * std::max(fit.model.sill, 1e-300) ||
                   best_i == 0 || best_i == kRangeScan - 1;
  return fit;
}

OrdinaryKriging::OrdinaryKriging(std::span<const ScatteredPoint> obs,
                                 const SemivariogramModel& model)
    : model_(model) {
  if (obs.empty()) {
    throw Error(ErrorCode::kDegenerateInput, "Kriging needs observations");
  }
  model_.validate();
  check_points(obs);

  std::vector<int> counts;
  for (const ScatteredPoint& p : obs) {
    bool found = false;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (distance(p.lat, p.lon, points_[i].lat, points_[i].lon) < kCoincident) {
        points_[i].value += p.value;
        ++counts[i];
        ++merged_;
        found = true;
        break;
      }
    }
    if (!found) {
      points_.push_back(p);
      counts.push_back(1);
    }
  }
  const Index n = size();
  values_.resize(n);
  for (Index i = 0; i < n; ++i) {
    auto& pt = points_[static_cast<std::size_t>(i)];
    pt.value /= counts[static_cast<std::size_t>(i)];
    values_[i] = pt.value;
  }

  Eigen::MatrixXd k(n + 1, n + 1);
  for (Index i = 0; i < n; ++i) {
    const auto& pi = points_[static_cast<std::size_t>(i)];
    k(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const auto& pj = points_[static_cast<std::size_t>(j)];
      k(i, j) = k(j, i) = model_(distance(pi.lat, pi.lon, pj.lat, pj.lon));
    }
    k(i, n) = k(n, i) = 1.0;
  }
  k(n, n) = 0.0;
  if (model_.sill > 0.0) lu_.compute(k);
}

Eigen::VectorXd OrdinaryKriging::rhs(double lat, double lon) const {
  const Index n = size();
  Eigen::VectorXd r(n + 1);
  for (Index i = 0; i < n; ++i) {
    const auto& p = points_[static_cast<std::size_t>(i)];
    r[i] = model_(distance(lat, lon, p.lat, p.lon));
  }
  r[n] = 1.0;
  return r;
}

Eigen::VectorXd OrdinaryKriging::weights(double lat, double lon) const {
  const Index n = size();
  if (model_.sill <= 0.0) {
    // No spatial variability: every unbiased combination is optimal.
    return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  }
  return lu_.solve(rhs(lat, lon)).head(n);
}

double OrdinaryKriging::predict(double lat, double lon) const {
  return weights(lat, lon).dot(values_);
}

Eigen::VectorXd OrdinaryKriging::predict(std::span<const double> lat,
                                         std::span<const double> lon) const {
  if (lat.size() != lon.size()) {
    throw Error(ErrorCode::kDimension, "latitude/longitude length mismatch");
  }
  const Index n = size();
  const auto m = static_cast<Index>(lat.size());
  if (model_.sill <= 0.0) {
    return Eigen::VectorXd::Constant(m, values_.mean());
  }
  Eigen::MatrixXd r(n + 1, m);
  for (Index j = 0; j < m; ++j) {
    r.col(j) = rhs(lat[static_cast<std::size_t>(j)],
                   lon[static_cast<std::size_t>(j)]);
  }
  const Eigen::MatrixXd w = lu_.solve(r);
  return w.topRows(n).transpose() * values_;
}

TecMap OrdinaryKriging::predict_map(const Grid& grid) const {
  std::vector<double> lat;
  std::vector<double> lon;
  lat.reserve(static_cast<std::size_t>(grid.size()));
  lon.reserve(static_cast<std::size_t>(grid.size()));
  for (Index q = 0; q < grid.cols; ++q) {
    for (Index p = 0; p < grid.rows; ++p) {
      lat.push_back(grid.lat(p));
      lon.push_back(grid.lon(q));
    }
  }
  const Eigen::VectorXd u = predict(lat, lon);
  return devectorize(u, grid);
}

TecMap ordinary_kriging(std::span<const ScatteredPoint> obs,
                        const SemivariogramModel& model, const Grid& grid) {
  return OrdinaryKriging(obs, model).predict_map(grid);
}

void KrigingParams::validate() const {
  if (!(idw_power > 0.0) || !(idw_spacing > 0.0)) {
    throw Error(ErrorCode::kParameter, "IDW power and spacing must be positive");
  }
  if (n_bins < 3) {
    throw Error(ErrorCode::kParameter, "semivariogram needs at least 3 bins");
  }
}

KrigingSetup prepare_kriging(std::span<const ScatteredPoint> obs,
                             const Grid& grid, const KrigingParams& params) {
  params.validate();
  const double max_lag =
      params.max_lag > 0.0
          ? params.max_lag
          : 0.5 * std::hypot(grid.lat_max() - grid.lat_min,
                             grid.lon_max() - grid.lon_min);
  const std::vector<LagBin> bins =
      empirical_semivariogram(obs, params.n_bins, max_lag);
  SemivariogramFit fit = fit_semivariogram(bins, params.kind);
  const std::vector<ScatteredPoint> dense =
      idw_densify(obs, grid, params.idw_power, params.idw_spacing);
  const auto pseudo = static_cast<Index>(dense.size() - obs.size());
  return KrigingSetup{fit, OrdinaryKriging(dense, fit.model), pseudo};
}

}  // namespace tecmap
