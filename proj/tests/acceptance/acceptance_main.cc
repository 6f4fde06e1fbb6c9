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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any selected criterion fails.
//
//   tecmap_acceptance                 run criteria 1..9
//   tecmap_acceptance --criterion 5   run one criterion

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "oracles.h"
#include "tecmap/dct.h"
#include "tecmap/evaluation.h"
#include "tecmap/grid.h"
#include "tecmap/kriging.h"
#include "tecmap/sensing.h"
#include "tecmap/solver.h"
#include "tecmap/synthetic.h"

namespace tecmap {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

int worker_count() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = u(rng);
  }
  return m;
}

std::vector<Measurement> network_samples(SyntheticKind kind, SampleAt at) {
  const Grid grid = default_grid();
  const std::vector<Station> net = default_station_network(grid);
  return sample_synthetic(kind, net, grid, at);
}

// 1. Orthonormality of the dense transform and agreement of the fast path.
Outcome criterion_1() {
  double worst_ortho = 0.0;
  for (Index P = 1; P <= 8; ++P) {
    for (Index Q = 1; Q <= 8; ++Q) {
      const Eigen::MatrixXd d = oracle::dense_dct(P, Q);
      const Eigen::MatrixXd e =
          d.transpose() * d - Eigen::MatrixXd::Identity(P * Q, P * Q);
      worst_ortho = std::max(worst_ortho, e.cwiseAbs().maxCoeff());
    }
  }
  std::mt19937_64 rng(1);
  const std::vector<std::pair<Index, Index>> shapes = {{8, 8}, {5, 7}, {26, 63}, {3, 8}};
  double worst_fast = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto [P, Q] = shapes[static_cast<std::size_t>(trial) % shapes.size()];
    const Grid g = Grid::make(0, 0, 1, 1, P, Q);
    const Eigen::MatrixXd d = oracle::dense_dct(P, Q);
    const Eigen::MatrixXd u = random_matrix(rng, P, Q);
    const Eigen::MatrixXd s = dct2_forward(TecMap(g, u)).values();
    const Eigen::VectorXd s_dense = d.transpose() * u.reshaped();
    worst_fast = std::max(worst_fast, (s.reshaped() - s_dense).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd back = dct2_inverse(SpectralCoeffs(g, s_dense.reshaped(P, Q))).values();
    const Eigen::VectorXd u_dense = d * s_dense;
    worst_fast = std::max(worst_fast, (back.reshaped() - u_dense).cwiseAbs().maxCoeff());
  }
  return {worst_ortho <= 1e-12 && worst_fast <= 1e-12,
          "max |D^T D - I| = " + sci(worst_ortho) + ", max fast vs dense = " + sci(worst_fast) +
              " (tol 1e-12)"};
}

// 2. <A s, r> = <s, A^T r>.
Outcome criterion_2() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (const auto& [P, Q] : std::vector<std::pair<Index, Index>>{{4, 4}, {5, 7}, {26, 63}}) {
    const Grid g = Grid::make(0, 0, 1, 1, P, Q);
    for (int draw = 0; draw < 100; ++draw) {
      const Index m = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(P * Q));
      std::vector<Observation> e;
      for (Index n : draw_subset(rng, P * Q, m)) e.push_back({FlatIndex{n}, 1.0});
      const SensingOperator a(ObservationSet(g, e));
      const Eigen::MatrixXd s = random_matrix(rng, P, Q);
      const Eigen::VectorXd r = random_matrix(rng, m, 1);
      const Eigen::VectorXd as = a.apply(s);
      const double lhs = as.dot(r);
      const double rhs = s.reshaped().dot(a.adjoint(r).reshaped());
      const double scale = std::max(as.norm() * r.norm(), 1e-300);
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  return {worst <= 1e-10, "max relative adjoint gap = " + sci(worst) + " (tol 1e-10)"};
}

// 3. Sparsity levels of the synthetic maps.
Outcome criterion_3() {
  const Grid grid = default_grid();
  const std::vector<double> candidates = default_sparsity_candidates();
  const std::vector<SparsityMeasure> measures = {SparsityMeasure::kTotalEnergy,
                                                 SparsityMeasure::kAcEnergy};
  const SparsityCalibration cal = calibrate_sparsity_threshold(grid, candidates, measures);
  const bool ac = cal.measure == SparsityMeasure::kAcEnergy;
  std::cout << "  calibration: " << candidates.size() << " fractions x 2 measures; best fraction="
            << cal.fraction << " measure=" << (ac ? "ac" : "total")
            << " max_deviation=" << cal.max_deviation
            << " total_deviation=" << cal.total_deviation << "\n";
  const auto table = synthetic_sparsity_table(grid);
  std::ostringstream got;
  Index worst = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    got << (i ? "," : "") << table[i].level;
    worst = std::max(worst, std::abs(table[i].level - kReferenceSparsity[i]));
  }
  const bool frozen = cal.fraction == kCalibratedSparsityFraction &&
                      cal.measure == kCalibratedSparsityMeasure;
  return {worst <= 2 && frozen,
          "K = {" + got.str() + "} vs {3,7,6,21,11}, max deviation " + std::to_string(worst) +
              " (tol 2)" + (frozen ? "" : ", calibration differs from frozen constants")};
}

// 4. Reconstruction from the full 146-station network.
Outcome criterion_4() {
  const Grid grid = default_grid();
  const SolverParams params;
  bool pass = true;
  std::ostringstream detail;
  for (SyntheticKind kind : kAllSyntheticKinds) {
    const auto meas = network_samples(kind, SampleAt::kNearestNode);
    const ReconstructionResult r =
        reconstruct(build_observation_set(meas, grid).observations, params);
    const double err = normalized_error_energy(synth_map(kind, grid), r.map);
    const double tol = kind == SyntheticKind::kSm4 ? 5e-4 : 2.5e-4;
    pass = pass && err <= tol;
    std::cout << "  " << to_string(kind) << ": M=" << meas.size() << " error=" << sci(err)
              << " tol=" << sci(tol) << " residual=" << sci(r.normalized_residual)
              << " iterations=" << r.iterations << "\n";
    detail << (detail.tellp() > 0 ? ", " : "") << to_string(kind) << " " << sci(err);
  }
  return {pass, detail.str()};
}

// 5. Observation-count sweep.
Outcome criterion_5() {
  const Grid grid = default_grid();
  const std::vector<Station> net = default_station_network(grid);
  const std::vector<Index> counts = {40, 70, 140};
  EvalOptions opts;
  opts.trials = 100;
  opts.seed = 0;
  opts.jobs = worker_count();
  bool pass = true;
  std::ostringstream detail;
  for (SyntheticKind kind : kAllSyntheticKinds) {
    const SweepResult r = sweep_observation_count(kind, net, counts, grid, SolverParams{}, opts);
    const double e40 = r.points[0].mean_error;
    const double e70 = r.points[1].mean_error;
    const double e140 = r.points[2].mean_error;
    const bool ok = e70 <= 1e-3 && e140 <= e40;
    pass = pass && ok;
    std::cout << "  " << to_string(kind) << ": mean(40)=" << sci(e40) << " mean(70)=" << sci(e70)
              << " mean(140)=" << sci(e140) << (ok ? "" : "  <-- fails") << "\n";
    detail << (detail.tellp() > 0 ? ", " : "") << to_string(kind) << " " << sci(e70);
  }
  return {pass, "mean error at M=70 (tol 1e-3): " + detail.str()};
}

// 6. Cross-check of CS against Kriging.
Outcome criterion_6() {
  const Grid grid = default_grid();
  const std::vector<Index> holdouts = {10, 20, 30};
  EvalOptions opts;
  opts.trials = 100;
  opts.seed = 0;
  opts.jobs = worker_count();
  bool pass = true;
  std::ostringstream detail;
  for (SyntheticKind kind : {SyntheticKind::kSm3, SyntheticKind::kSm5}) {
    const auto meas = network_samples(kind, SampleAt::kExactCoordinate);
    const CrossCheckResult cs =
        cross_check(meas, holdouts, grid, Method::kCs, SolverParams{}, KrigingParams{}, opts);
    const CrossCheckResult kr =
        cross_check(meas, holdouts, grid, Method::kKriging, SolverParams{}, KrigingParams{}, opts);
    for (std::size_t i = 0; i < holdouts.size(); ++i) {
      const double a = cs.points[i].mean_error;
      const double b = kr.points[i].mean_error;
      pass = pass && a < b;
      std::cout << "  " << to_string(kind) << " holdout=" << holdouts[i] << ": cs=" << sci(a)
                << " kriging=" << sci(b) << (a < b ? "" : "  <-- fails") << "\n";
    }
    detail << (detail.tellp() > 0 ? "; " : "") << to_string(kind) << " cs/kriging at 20 = "
           << fmt("%.2f", cs.points[1].mean_error / kr.points[1].mean_error);
  }
  return {pass, detail.str()};
}

// 7. Solver against the long-run subgradient reference.
Outcome criterion_7() {
  constexpr int kInstances = 5;
  constexpr long kReferenceIterations = 2000000;
  const SolverParams params;
  const Grid g = Grid::make(0, 0, 1, 1, 4, 4);
  std::mt19937_64 rng(2026);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<ObservationSet> sets;
  std::vector<oracle::ConstrainedProblem> problems;
  const Eigen::MatrixXd gd = oracle::dense_gradient(4, 4) * oracle::dense_dct(4, 4);
  for (int i = 0; i < kInstances; ++i) {
    const std::vector<Index> pixels = draw_subset(rng, 16, 8);
    std::vector<Observation> e;
    for (Index p : pixels) e.push_back({FlatIndex{p}, 20.0 + n(rng)});
    sets.emplace_back(g, e);
    oracle::ConstrainedProblem p;
    p.a = oracle::dense_sensing(4, 4, pixels);
    p.b = sets.back().values();
    p.c = oracle::inverse_weights(4, 4, params.sigma);
    p.h = params.gamma * gd.transpose() * gd;
    p.radius_sq = params.epsilon * p.b.squaredNorm();
    problems.push_back(std::move(p));
  }
  std::vector<double> reference(kInstances);
  std::vector<std::thread> threads;
  for (int i = 0; i < kInstances; ++i) {
    threads.emplace_back([&, i] {
      reference[static_cast<std::size_t>(i)] =
          oracle::subgradient_reference(problems[static_cast<std::size_t>(i)],
                                        kReferenceIterations)
              .objective;
    });
  }
  for (auto& t : threads) t.join();
  bool pass = true;
  double worst = 0.0;
  for (int i = 0; i < kInstances; ++i) {
    const ReconstructionResult r = reconstruct(sets[static_cast<std::size_t>(i)], params);
    const double ref = reference[static_cast<std::size_t>(i)];
    const double rel = std::abs(r.objective - ref) / std::abs(ref);
    const bool in_band = r.normalized_residual <= params.epsilon &&
                         r.normalized_residual >= params.epsilon * (1.0 - params.feas_tol);
    pass = pass && rel <= 1e-4 && in_band;
    worst = std::max(worst, rel);
    std::cout << "  instance " << i << ": solver=" << fmt("%.10f", r.objective)
              << " reference=" << fmt("%.10f", ref) << " rel=" << sci(rel)
              << " residual=" << sci(r.normalized_residual) << (in_band ? "" : " (out of band)")
              << "\n";
  }
  return {pass, "max relative objective gap = " + sci(worst) + " (tol 1e-4), residual band [" +
                    sci(params.epsilon * (1.0 - params.feas_tol)) + ", " + sci(params.epsilon) +
                    "]"};
}

// 8. Kriging weights, exact interpolation and empirical semivariogram.
Outcome criterion_8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> lat(36.0, 42.0);
  std::uniform_real_distribution<double> lon(26.0, 45.0);
  std::uniform_real_distribution<double> val(10.0, 30.0);
  std::vector<ScatteredPoint> pts(50);
  for (auto& p : pts) p = {lat(rng), lon(rng), val(rng)};
  double worst_sum = 0.0;
  double worst_interp = 0.0;
  for (VariogramKind kind :
       {VariogramKind::kSpherical, VariogramKind::kExponential, VariogramKind::kGaussian}) {
    const SemivariogramModel model{kind, 0.0, 4.0, 6.0};
    const OrdinaryKriging ok(pts, model);
    for (int i = 0; i < 100; ++i) {
      worst_sum = std::max(worst_sum, std::abs(ok.weights(lat(rng), lon(rng)).sum() - 1.0));
    }
    for (const auto& p : pts) {
      worst_interp = std::max(worst_interp, std::abs(ok.predict(p.lat, p.lon) - p.value));
    }
  }
  std::vector<double> la, lo, va;
  for (const auto& p : pts) {
    la.push_back(p.lat);
    lo.push_back(p.lon);
    va.push_back(p.value);
  }
  bool bins_ok = true;
  for (double max_lag : {4.0, 10.0, 25.0}) {
    const auto bins = empirical_semivariogram(pts, 15, max_lag);
    const auto brute = oracle::brute_force_bins(la, lo, va, 15, max_lag);
    std::size_t j = 0;
    for (const auto& b : brute) {
      if (b.pairs == 0) continue;
      const double np = static_cast<double>(b.pairs);
      bins_ok = bins_ok && j < bins.size() && bins[j].pair_count == b.pairs &&
                std::abs(bins[j].lag - b.lag_sum / np) <= 1e-12 &&
                std::abs(bins[j].semivariance - b.sq_sum / (2.0 * np)) <=
                    1e-10 * std::max(1.0, bins[j].semivariance);
      ++j;
    }
    bins_ok = bins_ok && j == bins.size();
  }
  return {worst_sum <= 1e-8 && worst_interp <= 1e-6 && bins_ok,
          "max |sum w - 1| = " + sci(worst_sum) + " (tol 1e-8), max interpolation error = " +
              sci(worst_interp) + " TECU (tol 1e-6), semivariogram bins " +
              (bins_ok ? "match" : "differ") + " brute force"};
}

#ifdef TECMAP_CLI_PATH
int run_in(const std::filesystem::path& dir, const std::string& args, const std::string& log) {
  const std::string cmd = "cd '" + dir.string() + "' && '" TECMAP_CLI_PATH "' " + args +
                          " >> " + log + " 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}
#endif

// 9. Byte-identical CLI outputs across two runs.
Outcome criterion_9() {
#ifndef TECMAP_CLI_PATH
  return {false, "command-line tool was not built"};
#else
  namespace fs = std::filesystem;
  const std::vector<std::string> commands = {
      "synth --kind sm4 --out sm4.csv",
      "stations --seed 3 --out st.csv",
      "sample --kind sm3 --stations st.csv --at exact --out m.csv",
      "sample --kind sm5 --stations st.csv --out m5.csv",
      "reconstruct --measurements m.csv --out r.csv",
      "reconstruct --measurements m5.csv --weighting uniform --out r5.csv",
      "krige --measurements m.csv --out k.csv",
      "eval sweep --kind sm2 --counts 30,90 --trials 4 --seed 7 --jobs 3 --out sweep.csv",
      "eval crosscheck --measurements m.csv --method kriging --holdout 10,20 --trials 4 "
      "--seed 9 --jobs 2 --out xk.csv",
      "eval crosscheck --kind sm5 --method cs --holdout 15 --trials 3 --seed 9 --out xc.csv",
      "heatmap --grid r.csv --vmin 10 --vmax 30 --out r.ppm",
      "sparsity --calibrate",
  };
  const fs::path root = fs::temp_directory_path() / "tecmap_acceptance_9";
  fs::remove_all(root);
  for (const char* run : {"a", "b"}) {
    fs::create_directories(root / run);
    for (const auto& c : commands) {
      const int status = run_in(root / run, c, "stdout.txt");
      if (status != 0) {
        return {false, "'" + c + "' exited with " + std::to_string(status)};
      }
    }
  }
  Index files = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const fs::path other = root / "b" / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      return {false, entry.path().filename().string() + " differs between runs"};
    }
    ++files;
  }
  fs::remove_all(root);
  return {true, std::to_string(commands.size()) + " commands, " + std::to_string(files) +
                    " output files (stdout included) byte-identical"};
#endif
}

}  // namespace
}  // namespace tecmap

int main(int argc, char** argv) {
  CLI::App app{"tecmap acceptance suite"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<tecmap::Outcome()>> criteria = {
      tecmap::criterion_1, tecmap::criterion_2, tecmap::criterion_3,
      tecmap::criterion_4, tecmap::criterion_5, tecmap::criterion_6,
      tecmap::criterion_7, tecmap::criterion_8, tecmap::criterion_9};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && id != only) continue;
    tecmap::Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail
              << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
