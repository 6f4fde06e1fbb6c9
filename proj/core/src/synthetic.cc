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

#include "tecmap/synthetic.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "tecmap/error.h"

namespace tecmap {

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kSm1:
      return "sm1";
    case SyntheticKind::kSm2:
      return "sm2";
    case SyntheticKind::kSm3:
      return "sm3";
    case SyntheticKind::kSm4:
      return "sm4";
    case SyntheticKind::kSm5:
      return "sm5";
  }
  return "sm?";
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower.starts_with("sm")) lower.erase(0, 2);
  if (lower.size() == 1 && lower[0] >= '1' && lower[0] <= '5') {
    return kAllSyntheticKinds[static_cast<std::size_t>(lower[0] - '1')];
  }
  throw Error(ErrorCode::kParameter,
              "unknown synthetic map '" + std::string(name) +
                  "' (expected sm1..sm5)");
}

double synth_value(SyntheticKind kind, double lat, double lon) {
  switch (kind) {
    case SyntheticKind::kSm1:
      return 25.0 - 0.3 * lat + 0.3 * lon;
    case SyntheticKind::kSm2:
      return 25.0 - 0.3 * (lat - 34.0) * (lat - 34.0) +
             0.3 * (lon - 35.0) * (lon - 35.0);
    case SyntheticKind::kSm3: {
      const double a = (lat - 34.0) / 10.0;
      const double b = (lon - 35.0) / 7.0;
      return 20.0 + 5.0 * std::exp(-a * a - b * b);
    }
    case SyntheticKind::kSm4: {
      const double c = std::cos(lat - 35.0);
      const double s = std::sin(lon - 32.0);
      return 21.0 + 6.0 * std::sqrt(c * c + s * s) -
             6.0 * std::exp(0.25 * (c + std::cos(lon - 32.0)));
    }
    case SyntheticKind::kSm5:
      return 46.0 - 0.3 * lat - 0.3 * lon + 0.5 * std::cos(1.5 * (lon - lat));
  }
  return 0.0;
}

TecMap synth_map(SyntheticKind kind, const Grid& grid) {
  grid.validate();
  Eigen::MatrixXd u(grid.rows, grid.cols);
  for (Index q = 0; q < grid.cols; ++q) {
    for (Index p = 0; p < grid.rows; ++p) {
      u(p, q) = synth_value(kind, grid.lat(p), grid.lon(q));
    }
  }
  return TecMap(grid, std::move(u));
}

std::vector<SparsityEntry> synthetic_sparsity_table(const Grid& grid,
                                                    double energy_fraction,
                                                    SparsityMeasure measure) {
  std::vector<SparsityEntry> table;
  for (SyntheticKind kind : kAllSyntheticKinds) {
    const SpectralCoeffs s = dct2_forward(synth_map(kind, grid));
    table.push_back({kind, sparsity_level(s, energy_fraction, measure)});
  }
  return table;
}

std::vector<double> default_sparsity_candidates() {
  return {0.9,   0.95,  0.96,  0.97,   0.975,   0.98,
          0.985, 0.99,  0.995, 0.999,  0.9999,  0.99999};
}

SparsityCalibration calibrate_sparsity_threshold(
    const Grid& grid, std::span<const double> candidates,
    std::span<const SparsityMeasure> measures,
    std::span<const Index> reference) {
  if (candidates.empty() || measures.empty() ||
      reference.size() != kAllSyntheticKinds.size()) {
    throw Error(ErrorCode::kParameter,
                "calibration needs candidates, measures and five reference "
                "levels");
  }
  // Transform once; the table is cheap to re-threshold.
  std::vector<SpectralCoeffs> spectra;
  for (SyntheticKind kind : kAllSyntheticKinds) {
    spectra.push_back(dct2_forward(synth_map(kind, grid)));
  }
  SparsityCalibration best;
  bool have_best = false;
  for (SparsityMeasure measure : measures) {
    for (double fraction : candidates) {
      SparsityCalibration c{fraction, measure, {}, 0, 0};
      for (std::size_t i = 0; i < spectra.size(); ++i) {
        const Index k = sparsity_level(spectra[i], fraction, measure);
        c.table.push_back({kAllSyntheticKinds[i], k});
        const Index dev = std::abs(k - reference[i]);
        c.max_deviation = std::max(c.max_deviation, dev);
        c.total_deviation += dev;
      }
      if (!have_best || c.max_deviation < best.max_deviation ||
          (c.max_deviation == best.max_deviation &&
           c.total_deviation < best.total_deviation)) {
        best = std::move(c);
        have_best = true;
      }
    }
  }
  return best;
}

}  // namespace tecmap
