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

// tecmap: command-line front end for map synthesis, reconstruction, Kriging,
// evaluation and rendering.
//
// Exit status: 0 success, 2 usage, 3 data/validation, 4 non-convergence
// under --strict.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tecmap/dct.h"
#include "tecmap/error.h"
#include "tecmap/evaluation.h"
#include "tecmap/grid.h"
#include "tecmap/io.h"
#include "tecmap/kriging.h"
#include "tecmap/sensing.h"
#include "tecmap/solver.h"
#include "tecmap/synthetic.h"

namespace {

using tecmap::Error;
using tecmap::ErrorCode;
using tecmap::Index;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNotConverged = 4;

struct GridFlags {
  tecmap::Grid grid = tecmap::default_grid();

  void add(CLI::App* app) {
    app->add_option("--lat-min", grid.lat_min, "Southernmost node latitude (deg)")
        ->capture_default_str();
    app->add_option("--lon-min", grid.lon_min, "Westernmost node longitude (deg)")
        ->capture_default_str();
    app->add_option("--dlat", grid.dlat, "Latitude spacing (deg)")->capture_default_str();
    app->add_option("--dlon", grid.dlon, "Longitude spacing (deg)")->capture_default_str();
    app->add_option("--rows", grid.rows, "Number of latitude nodes P")
        ->capture_default_str();
    app->add_option("--cols", grid.cols, "Number of longitude nodes Q")
        ->capture_default_str();
  }

  const tecmap::Grid& get() const {
    grid.validate();
    return grid;
  }
};

struct SolverFlags {
  tecmap::SolverParams params;
  std::string weighting = "butterworth";

  void add(CLI::App* app) {
    app->add_option("--sigma", params.sigma, "Butterworth cutoff")->capture_default_str();
    app->add_option("--gamma", params.gamma, "Gradient regularization weight")
        ->capture_default_str();
    app->add_option("--epsilon", params.epsilon,
                    "Bound on ||As-b||^2/||b||^2")
        ->capture_default_str();
    app->add_option("--feas-tol", params.feas_tol,
                    "Relative width of the accepted residual band")
        ->capture_default_str();
    app->add_option("--opt-tol", params.opt_tol, "Inner stopping tolerance")
        ->capture_default_str();
    app->add_option("--max-iters", params.max_iters, "Inner iteration cap per solve")
        ->capture_default_str();
    app->add_option("--weighting", weighting, "Coefficient weighting")
        ->check(CLI::IsMember({"butterworth", "uniform"}))
        ->capture_default_str();
  }

  tecmap::SolverParams get() const {
    tecmap::SolverParams p = params;
    p.weighting = weighting == "uniform" ? tecmap::Weighting::kUniform
                                         : tecmap::Weighting::kButterworth;
    p.validate();
    return p;
  }
};

struct KrigingFlags {
  tecmap::KrigingParams params;
  std::string variogram = "spherical";

  void add(CLI::App* app) {
    app->add_option("--variogram", variogram, "Semivariogram model")
        ->check(CLI::IsMember({"spherical", "exponential", "gaussian"}))
        ->capture_default_str();
    app->add_option("--idw-power", params.idw_power, "IDW distance exponent")
        ->capture_default_str();
    app->add_option("--idw-spacing", params.idw_spacing,
                    "Pseudo-observation spacing (deg)")
        ->capture_default_str();
    app->add_option("--bins", params.n_bins, "Semivariogram lag bins")
        ->capture_default_str();
    app->add_option("--max-lag", params.max_lag,
                    "Largest lag (deg); <= 0 uses half the grid diagonal")
        ->capture_default_str();
  }

  tecmap::KrigingParams get() const {
    tecmap::KrigingParams p = params;
    p.kind = tecmap::parse_variogram_kind(variogram);
    p.validate();
    return p;
  }
};

std::vector<tecmap::Measurement> load_measurements(const std::string& path,
                                                   const std::string& stations_path) {
  std::vector<tecmap::Station> stations;
  if (!stations_path.empty()) stations = tecmap::read_stations(stations_path);
  return tecmap::read_measurements(path, stations);
}

void report_snap(const tecmap::SnapReport& snap) {
  for (const std::string& id : snap.dropped) {
    std::cerr << "dropped station " << id << " (outside grid)\n";
  }
  for (const auto& [index, count] : snap.merged) {
    std::cerr << "merged " << count << " stations at node " << index.n << "\n";
  }
}

std::string join_counts(const std::vector<Index>& v) {
  std::string out;
  for (Index x : v) {
    if (!out.empty()) out += ',';
    out += std::to_string(x);
  }
  return out;
}

void print_summary(const char* label, const std::vector<std::pair<Index, double>>& rows) {
  std::printf("%-10s %14s\n", label, "mean_error");
  for (const auto& [count, mean] : rows) {
    std::printf("%-10lld %14.6e\n", static_cast<long long>(count), mean);
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kValidation, "cannot open '" + path + "' for writing");
  return out;
}

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::kParameter ? kExitUsage : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regional TEC map reconstruction in the 2D-DCT domain"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand help for every subcommand");

  // synth
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic map as a grid file");
  std::string synth_kind;
  std::string synth_out;
  GridFlags synth_grid;
  synth->add_option("--kind", synth_kind, "sm1..sm5")->required();
  synth->add_option("--out", synth_out, "Output grid file")->required();
  synth_grid.add(synth);

  // stations
  CLI::App* stations = app.add_subcommand(
      "stations", "Write the seeded quasi-uniform station network");
  std::string stations_out;
  std::uint64_t stations_seed = 0;
  tecmap::LatticeLayout layout;
  GridFlags stations_grid;
  stations->add_option("--out", stations_out, "Output station file")->required();
  stations->add_option("--seed", stations_seed, "Layout seed")->capture_default_str();
  stations->add_option("--count", layout.count, "Stations kept")->capture_default_str();
  stations->add_option("--lattice-rows", layout.rows, "Lattice rows")->capture_default_str();
  stations->add_option("--lattice-cols", layout.cols, "Lattice columns")
      ->capture_default_str();
  stations->add_option("--jitter", layout.jitter, "Jitter as a fraction of spacing")
      ->capture_default_str();
  stations_grid.add(stations);

  // sample
  CLI::App* sample = app.add_subcommand(
      "sample", "Sample a synthetic map at stations into a measurement file");
  std::string sample_kind;
  std::string sample_stations;
  std::string sample_out;
  std::string sample_at = "node";
  GridFlags sample_grid;
  sample->add_option("--kind", sample_kind, "sm1..sm5")->required();
  sample->add_option("--stations", sample_stations, "Station file")->required();
  sample->add_option("--out", sample_out, "Output measurement file")->required();
  sample->add_option("--at", sample_at,
                     "node: value at the nearest node; exact: at the coordinate")
      ->check(CLI::IsMember({"node", "exact"}))
      ->capture_default_str();
  sample_grid.add(sample);

  // reconstruct
  CLI::App* recon = app.add_subcommand("reconstruct",
                                       "Compressive-sensing map from measurements");
  std::string recon_meas;
  std::string recon_stations;
  std::string recon_out;
  bool recon_strict = false;
  GridFlags recon_grid;
  SolverFlags recon_solver;
  recon->add_option("--measurements", recon_meas, "Measurement file")->required();
  recon->add_option("--stations", recon_stations,
                    "Station file resolving rows without coordinates");
  recon->add_option("--out", recon_out, "Output grid file")->required();
  recon->add_flag("--strict", recon_strict, "Exit 4 if the solver does not converge");
  recon_grid.add(recon);
  recon_solver.add(recon);

  // krige
  CLI::App* krige = app.add_subcommand("krige", "Ordinary-Kriging map from measurements");
  std::string krige_meas;
  std::string krige_stations;
  std::string krige_out;
  GridFlags krige_grid;
  KrigingFlags krige_params;
  krige->add_option("--measurements", krige_meas, "Measurement file")->required();
  krige->add_option("--stations", krige_stations,
                    "Station file resolving rows without coordinates");
  krige->add_option("--out", krige_out, "Output grid file")->required();
  krige_grid.add(krige);
  krige_params.add(krige);

  // eval
  CLI::App* eval = app.add_subcommand("eval", "Monte Carlo evaluation");
  eval->require_subcommand(1);

  CLI::App* sweep = eval->add_subcommand(
      "sweep", "Mean error versus number of measurements on a synthetic map");
  std::string sweep_kind;
  std::string sweep_stations;
  std::string sweep_out;
  std::vector<Index> sweep_counts = {20, 40, 70, 100, 140};
  std::uint64_t sweep_layout_seed = 0;
  tecmap::EvalOptions sweep_opts;
  GridFlags sweep_grid;
  SolverFlags sweep_solver;
  sweep->add_option("--kind", sweep_kind, "sm1..sm5")->required();
  sweep->add_option("--stations", sweep_stations,
                    "Station file (default: seeded quasi-uniform network)");
  sweep->add_option("--layout-seed", sweep_layout_seed,
                    "Seed of the default network")
      ->capture_default_str();
  sweep->add_option("--counts", sweep_counts, "Measurement counts")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--trials", sweep_opts.trials, "Trials per count")
      ->capture_default_str();
  sweep->add_option("--seed", sweep_opts.seed, "Subset seed")->capture_default_str();
  sweep->add_option("--jobs", sweep_opts.jobs, "Worker threads")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output CSV")->required();
  sweep_grid.add(sweep);
  sweep_solver.add(sweep);

  CLI::App* xcheck = eval->add_subcommand(
      "crosscheck", "Hold-out cross check of a mapping method");
  std::string xc_meas;
  std::string xc_stations;
  std::string xc_kind;
  std::string xc_method = "cs";
  std::string xc_out;
  std::vector<Index> xc_holdout = {10, 15, 20, 25, 30};
  std::uint64_t xc_layout_seed = 0;
  tecmap::EvalOptions xc_opts;
  xc_opts.trials = 1000;
  GridFlags xc_grid;
  SolverFlags xc_solver;
  KrigingFlags xc_kriging;
  xcheck->add_option("--measurements", xc_meas, "Measurement file");
  xcheck->add_option("--stations", xc_stations,
                     "Station file for --measurements rows or --kind sampling");
  xcheck->add_option("--kind", xc_kind,
                     "Sample sm1..sm5 at the stations instead of reading measurements");
  xcheck->add_option("--layout-seed", xc_layout_seed,
                     "Seed of the default network used with --kind")
      ->capture_default_str();
  xcheck->add_option("--method", xc_method, "Mapping method")
      ->check(CLI::IsMember({"cs", "kriging"}))
      ->capture_default_str();
  xcheck->add_option("--holdout", xc_holdout, "Held-out counts")
      ->delimiter(',')
      ->capture_default_str();
  xcheck->add_option("--trials", xc_opts.trials, "Trials per count")
      ->capture_default_str();
  xcheck->add_option("--seed", xc_opts.seed, "Hold-out seed")->capture_default_str();
  xcheck->add_option("--jobs", xc_opts.jobs, "Worker threads")->capture_default_str();
  xcheck->add_option("--out", xc_out, "Output CSV")->required();
  xcheck->get_option("--kind")->excludes("--measurements");
  xc_grid.add(xcheck);
  xc_solver.add(xcheck);
  xc_kriging.add(xcheck);

  // heatmap
  CLI::App* heat = app.add_subcommand("heatmap", "Render a grid file as a PPM image");
  std::string heat_in;
  std::string heat_out;
  double heat_vmin = 0.0;
  double heat_vmax = 0.0;
  heat->add_option("--grid", heat_in, "Input grid file")->required();
  heat->add_option("--vmin", heat_vmin, "Value mapped to the first colour")->required();
  heat->add_option("--vmax", heat_vmax, "Value mapped to the last colour")->required();
  heat->add_option("--out", heat_out, "Output PPM")->required();

  // sparsity
  CLI::App* sparsity = app.add_subcommand(
      "sparsity", "Sparsity levels of the synthetic maps");
  double sp_fraction = tecmap::kCalibratedSparsityFraction;
  std::string sp_measure = "ac";
  bool sp_calibrate = false;
  GridFlags sp_grid;
  sparsity->add_option("--fraction", sp_fraction, "Energy fraction")
      ->capture_default_str();
  sparsity->add_option("--measure", sp_measure,
                       "total: all coefficients; ac: DC counted, AC energy fraction")
      ->check(CLI::IsMember({"total", "ac"}))
      ->capture_default_str();
  sparsity->add_flag("--calibrate", sp_calibrate,
                     "Search fraction and measure against the reference levels");
  sp_grid.add(sparsity);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*synth) {
      const auto kind = tecmap::parse_synthetic_kind(synth_kind);
      tecmap::write_grid(synth_out, tecmap::synth_map(kind, synth_grid.get()));
    } else if (*stations) {
      const auto net =
          tecmap::default_station_network(stations_grid.get(), stations_seed, layout);
      tecmap::write_stations(stations_out, net);
    } else if (*sample) {
      const auto kind = tecmap::parse_synthetic_kind(sample_kind);
      const auto net = tecmap::read_stations(sample_stations);
      const auto at = sample_at == "exact" ? tecmap::SampleAt::kExactCoordinate
                                           : tecmap::SampleAt::kNearestNode;
      const auto ms = tecmap::sample_synthetic(kind, net, sample_grid.get(), at);
      if (ms.size() < net.size()) {
        std::cerr << net.size() - ms.size() << " stations outside the grid skipped\n";
      }
      tecmap::write_measurements(sample_out, ms);
    } else if (*recon) {
      const auto params = recon_solver.get();
      const auto ms = load_measurements(recon_meas, recon_stations);
      const auto snap = tecmap::build_observation_set(ms, recon_grid.get());
      report_snap(snap);
      const auto r = tecmap::reconstruct(snap.observations, params);
      tecmap::write_grid(recon_out, r.map);
      std::printf("observations=%lld iterations=%d objective=%.10e residual=%.6e "
                  "lambda=%.6e converged=%s\n",
                  static_cast<long long>(snap.observations.size()), r.iterations,
                  r.objective, r.normalized_residual, r.lambda,
                  r.converged ? "true" : "false");
      if (recon_strict && !r.converged) {
        std::cerr << "error: solver did not converge\n";
        return kExitNotConverged;
      }
    } else if (*krige) {
      const auto params = krige_params.get();
      const auto ms = load_measurements(krige_meas, krige_stations);
      const auto setup =
          tecmap::prepare_kriging(tecmap::to_scattered(ms), krige_grid.get(), params);
      if (setup.kriging.merged_duplicates() > 0) {
        std::cerr << "merged " << setup.kriging.merged_duplicates()
                  << " coincident points\n";
      }
      tecmap::write_grid(krige_out, setup.kriging.predict_map(krige_grid.get()));
      const auto& m = setup.fit.model;
      std::printf("model=%s nugget=%.6e sill=%.6e range=%.6e pseudo_points=%lld "
                  "merged=%lld%s\n",
                  std::string(tecmap::to_string(m.kind)).c_str(), m.nugget, m.sill,
                  m.range, static_cast<long long>(setup.pseudo_points),
                  static_cast<long long>(setup.kriging.merged_duplicates()),
                  setup.fit.degenerate ? " degenerate_fit" : "");
    } else if (*sweep) {
      const auto params = sweep_solver.get();
      const auto& grid = sweep_grid.get();
      const auto kind = tecmap::parse_synthetic_kind(sweep_kind);
      const auto net = sweep_stations.empty()
                           ? tecmap::default_station_network(grid, sweep_layout_seed)
                           : tecmap::read_stations(sweep_stations);
      const auto result = tecmap::sweep_observation_count(kind, net, sweep_counts, grid,
                                                          params, sweep_opts);
      std::ofstream out = open_out(sweep_out);
      tecmap::write_evaluation_header(out);
      tecmap::write_evaluation_csv(out, result);
      std::vector<std::pair<Index, double>> rows;
      for (const auto& p : result.points) rows.emplace_back(p.count, p.mean_error);
      std::printf("sweep %s counts=%s trials=%d seed=%llu\n",
                  std::string(tecmap::to_string(kind)).c_str(),
                  join_counts(sweep_counts).c_str(), sweep_opts.trials,
                  static_cast<unsigned long long>(sweep_opts.seed));
      print_summary("count", rows);
    } else if (*xcheck) {
      const auto& grid = xc_grid.get();
      const auto method = tecmap::parse_method(xc_method);
      const auto solver = xc_solver.get();
      const auto kriging = xc_kriging.get();
      std::vector<tecmap::Measurement> ms;
      if (!xc_kind.empty()) {
        const auto kind = tecmap::parse_synthetic_kind(xc_kind);
        const auto net = xc_stations.empty()
                             ? tecmap::default_station_network(grid, xc_layout_seed)
                             : tecmap::read_stations(xc_stations);
        ms = tecmap::sample_synthetic(kind, net, grid,
                                      tecmap::SampleAt::kExactCoordinate);
      } else if (!xc_meas.empty()) {
        ms = load_measurements(xc_meas, xc_stations);
      } else {
        throw Error(ErrorCode::kParameter, "crosscheck needs --measurements or --kind");
      }
      const auto result =
          tecmap::cross_check(ms, xc_holdout, grid, method, solver, kriging, xc_opts);
      std::ofstream out = open_out(xc_out);
      tecmap::write_evaluation_header(out);
      tecmap::write_evaluation_csv(out, result);
      std::vector<std::pair<Index, double>> rows;
      for (const auto& p : result.points) rows.emplace_back(p.holdout, p.mean_error);
      std::printf("crosscheck %s holdout=%s trials=%d seed=%llu\n",
                  std::string(tecmap::to_string(method)).c_str(),
                  join_counts(xc_holdout).c_str(), xc_opts.trials,
                  static_cast<unsigned long long>(xc_opts.seed));
      print_summary("holdout", rows);
    } else if (*heat) {
      tecmap::colormap_index(heat_vmin, heat_vmin, heat_vmax);
      tecmap::write_heatmap(heat_out, tecmap::read_grid(heat_in), heat_vmin, heat_vmax);
    } else if (*sparsity) {
      const auto& grid = sp_grid.get();
      double fraction = sp_fraction;
      auto measure = sp_measure == "total" ? tecmap::SparsityMeasure::kTotalEnergy
                                           : tecmap::SparsityMeasure::kAcEnergy;
      if (sp_calibrate) {
        const auto candidates = tecmap::default_sparsity_candidates();
        const std::vector<tecmap::SparsityMeasure> measures = {
            tecmap::SparsityMeasure::kTotalEnergy, tecmap::SparsityMeasure::kAcEnergy};
        const auto cal = tecmap::calibrate_sparsity_threshold(grid, candidates, measures);
        fraction = cal.fraction;
        measure = cal.measure;
        std::printf("calibrated fraction=%.6g measure=%s max_deviation=%lld\n", fraction,
                    measure == tecmap::SparsityMeasure::kAcEnergy ? "ac" : "total",
                    static_cast<long long>(cal.max_deviation));
      }
      std::printf("map  K    reference\n");
      const auto table = tecmap::synthetic_sparsity_table(grid, fraction, measure);
      for (std::size_t i = 0; i < table.size(); ++i) {
        std::printf("%-4s %-4lld %lld\n",
                    std::string(tecmap::to_string(table[i].kind)).c_str(),
                    static_cast<long long>(table[i].level),
                    static_cast<long long>(tecmap::kReferenceSparsity[i]));
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
