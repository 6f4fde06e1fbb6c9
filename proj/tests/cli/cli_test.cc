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

// Runs the tecmap executable end to end.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "tecmap/io.h"
#include "tecmap/synthetic.h"

namespace tecmap {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(TECMAP_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tecmap_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Writes the default network and SM1 measurements at its nearest nodes.
  void make_sm1_measurements() {
    ASSERT_EQ(run("stations --out " + path("st.csv")).status, 0);
    ASSERT_EQ(run("sample --kind sm1 --stations " + path("st.csv") + " --out " + path("m.csv"))
                  .status,
              0);
  }

  fs::path dir_;
};

TEST_F(Cli, SynthSm3DefaultGrid) {
  ASSERT_EQ(run("synth --kind sm3 --out " + path("sm3.csv")).status, 0);
  const TecMap m = read_grid(path("sm3.csv"));
  EXPECT_EQ(m.grid().rows, 26);
  EXPECT_EQ(m.grid().cols, 63);
  Index p = 0;
  Index q = 0;
  const double max = m.values().maxCoeff(&p, &q);
  EXPECT_EQ(p, 0);
  EXPECT_EQ(q, 30);
  EXPECT_EQ(max, synth_value(SyntheticKind::kSm3, m.grid().lat(0), m.grid().lon(30)));
}

TEST_F(Cli, SynthPeakWhenGridCoversIt) {
  ASSERT_EQ(run("synth --kind sm3 --lat-min 30 --lon-min 30 --dlat 0.5 --dlon 0.5 --rows 17 "
                "--cols 21 --out " + path("sm3.csv"))
                .status,
            0);
  EXPECT_NEAR(read_grid(path("sm3.csv")).values().maxCoeff(), 25.0, 1e-12);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("synth --kind sm9 --out " + path("x.csv")).status, 2);
  EXPECT_EQ(run("synth --out " + path("x.csv")).status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("eval crosscheck --kind sm3 --method idw --out " + path("x.csv")).status, 2);
}

TEST_F(Cli, DataErrors) {
  std::ofstream(path("bad.csv")) << "id,lat_deg,lon_deg\nA,95,30\n";
  EXPECT_EQ(run("sample --kind sm1 --stations " + path("bad.csv") + " --out " + path("m.csv"))
                .status,
            3);
  EXPECT_EQ(run("heatmap --grid " + path("missing.csv") + " --vmin 0 --vmax 1 --out " +
                path("x.ppm"))
                .status,
            3);
}

TEST_F(Cli, ReconstructDiagnostics) {
  make_sm1_measurements();
  const RunResult r =
      run("reconstruct --measurements " + path("m.csv") + " --out " + path("r.csv"));
  ASSERT_EQ(r.status, 0);
  for (const char* key : {"iterations=", "objective=", "residual=", "lambda="}) {
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
  }
  const auto at = r.out.find("residual=");
  EXPECT_LE(std::stod(r.out.substr(at + 9)), 1e-4);
  EXPECT_EQ(read_grid(path("r.csv")).grid(), default_grid());
}

TEST_F(Cli, ReconstructStrictNonConvergence) {
  make_sm1_measurements();
  const RunResult r = run("reconstruct --strict --max-iters 2 --measurements " + path("m.csv") +
                          " --out " + path("r.csv"));
  EXPECT_EQ(r.status, 4);
  EXPECT_NE(r.out.find("converged=false"), std::string::npos);
}

TEST_F(Cli, ReconstructResolvesStationIds) {
  ASSERT_EQ(run("stations --out " + path("st.csv")).status, 0);
  std::ofstream(path("m.csv")) << "id,lat_deg,lon_deg,tecu\nS001,,,20\nS050,,,21\nS100,,,22\n";
  EXPECT_EQ(run("reconstruct --measurements " + path("m.csv") + " --stations " + path("st.csv") +
                " --out " + path("r.csv"))
                .status,
            0);
  EXPECT_EQ(run("reconstruct --measurements " + path("m.csv") + " --out " + path("r.csv")).status,
            3);
}

TEST_F(Cli, KrigeConstantInput) {
  ASSERT_EQ(run("stations --out " + path("st.csv")).status, 0);
  std::ostringstream m;
  m << "id,lat_deg,lon_deg,tecu\n";
  for (const Station& s : read_stations(path("st.csv"))) {
    m << s.id << "," << format_double(s.lat) << "," << format_double(s.lon) << ",18.5\n";
  }
  std::ofstream(path("m.csv")) << m.str();
  ASSERT_EQ(run("krige --measurements " + path("m.csv") + " --out " + path("k.csv")).status, 0);
  const TecMap k = read_grid(path("k.csv"));
  EXPECT_LT((k.values().array() - 18.5).abs().maxCoeff(), 1e-9);
}

TEST_F(Cli, KrigeReportsMergedDuplicates) {
  std::ofstream(path("m.csv")) << "id,lat_deg,lon_deg,tecu\n"
                                  "A,37.3,30.3,10\nB,37.3,30.3,12\nC,40.3,35.3,15\n"
                                  "D,41.3,40.3,17\nE,38.3,42.3,16\nF,42.3,28.3,14\n"
                                  "G,39.3,33.3,13\n";
  const RunResult r = run("krige --measurements " + path("m.csv") + " --out " + path("k.csv"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("merged=1"), std::string::npos) << r.out;
}

TEST_F(Cli, EvalSweepCsvAndErrors) {
  const RunResult r = run("eval sweep --kind sm1 --counts 30,60 --trials 2 --out " +
                          path("s.csv"));
  ASSERT_EQ(r.status, 0);
  const std::string csv = slurp(path("s.csv"));
  EXPECT_EQ(csv.rfind("method,count,trial,error\ncs,30,0,", 0), 0u);
  EXPECT_NE(r.out.find("mean_error"), std::string::npos);
  EXPECT_EQ(run("eval sweep --kind sm1 --counts 500 --trials 2 --out " + path("s.csv")).status, 2);
}

TEST_F(Cli, EvalCrosscheckMethods) {
  for (const std::string method : {"cs", "kriging"}) {
    ASSERT_EQ(run("eval crosscheck --kind sm3 --method " + method +
                  " --holdout 10 --trials 2 --out " + path(method + ".csv"))
                  .status,
              0);
    EXPECT_EQ(slurp(path(method + ".csv")).find(method + ",10,0,"), 25u);
  }
}

TEST_F(Cli, Heatmap) {
  ASSERT_EQ(run("synth --kind sm1 --out " + path("sm1.csv")).status, 0);
  ASSERT_EQ(run("heatmap --grid " + path("sm1.csv") + " --vmin 10 --vmax 30 --out " +
                path("sm1.ppm"))
                .status,
            0);
  const std::string img = slurp(path("sm1.ppm"));
  EXPECT_EQ(img.rfind("P6\n63 26\n255\n", 0), 0u);
  EXPECT_EQ(img.size(), std::string("P6\n63 26\n255\n").size() + 3u * 63u * 26u);
  EXPECT_EQ(run("heatmap --grid " + path("sm1.csv") + " --vmin 3 --vmax 3 --out " +
                path("x.ppm"))
                .status,
            2);
}

TEST_F(Cli, SparsityTable) {
  const RunResult r = run("sparsity");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("sm1  3"), std::string::npos) << r.out;
  const RunResult c = run("sparsity --calibrate");
  EXPECT_NE(c.out.find("fraction=0.985 measure=ac"), std::string::npos) << c.out;
}

TEST_F(Cli, HelpListsDefaults) {
  const RunResult r = run("reconstruct --help");
  EXPECT_EQ(r.status, 0);
  for (const char* flag : {"--sigma", "--gamma", "--epsilon", "--strict", "--rows"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
  EXPECT_NE(r.out.find("[5]"), std::string::npos);
  EXPECT_NE(r.out.find("[0.0001]"), std::string::npos);
}

}  // namespace
}  // namespace tecmap
