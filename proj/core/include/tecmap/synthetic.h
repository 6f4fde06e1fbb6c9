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

// Closed-form synthetic ionosphere maps used as ground truth.
//
// Coordinates are geodetic degrees. Trigonometric arguments take the degree
// differences as plain numbers (no degree-to-radian conversion):
//
//   SM1  25 - 0.3 lat + 0.3 lon                                  linear
//   SM2  25 - 0.3 (lat - 34)^2 + 0.3 (lon - 35)^2                quadratic
//   SM3  20 + 5 exp(-((lat - 34) / 10)^2 - ((lon - 35) / 7)^2)   gaussian
//   SM4  21 + 6 sqrt(cos^2(lat - 35) + sin^2(lon - 32))
//           - 6 exp(0.25 (cos(lat - 35) + cos(lon - 32)))        gaussian + sinusoid
//   SM5  46 - 0.3 lat - 0.3 lon + 0.5 cos(1.5 (lon - lat))       linear + sinusoid

#ifndef TECMAP_SYNTHETIC_H_
#define TECMAP_SYNTHETIC_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tecmap/dct.h"
#include "tecmap/grid.h"

namespace tecmap {

enum class SyntheticKind { kSm1, kSm2, kSm3, kSm4, kSm5 };

inline constexpr std::array<SyntheticKind, 5> kAllSyntheticKinds = {
    SyntheticKind::kSm1, SyntheticKind::kSm2, SyntheticKind::kSm3,
    SyntheticKind::kSm4, SyntheticKind::kSm5};

// "sm1" ... "sm5".
std::string_view to_string(SyntheticKind kind);
// Accepts "sm1".."sm5" (case-insensitive) or "1".."5"; throws kParameter.
SyntheticKind parse_synthetic_kind(std::string_view name);

double synth_value(SyntheticKind kind, double lat, double lon);
TecMap synth_map(SyntheticKind kind, const Grid& grid);

// Published sparsity levels for SM1..SM5.
inline constexpr std::array<Index, 5> kReferenceSparsity = {3, 7, 6, 21, 11};

// Energy threshold that reproduces kReferenceSparsity best on the default
// grid; see calibrate_sparsity_threshold().
inline constexpr double kCalibratedSparsityFraction = 0.985;
inline constexpr SparsityMeasure kCalibratedSparsityMeasure =
    SparsityMeasure::kAcEnergy;

struct SparsityEntry {
  SyntheticKind kind;
  Index level;
};

std::vector<SparsityEntry> synthetic_sparsity_table(
    const Grid& grid, double energy_fraction = kCalibratedSparsityFraction,
    SparsityMeasure measure = kCalibratedSparsityMeasure);

struct SparsityCalibration {
  double fraction = 0.0;
  SparsityMeasure measure = SparsityMeasure::kTotalEnergy;
  std::vector<SparsityEntry> table;
  Index max_deviation = 0;
  Index total_deviation = 0;
};

// Candidate thresholds scanned by calibrate_sparsity_threshold().
std::vector<double> default_sparsity_candidates();

// Scans every (measure, fraction) pair and keeps the one whose table is
// closest to `reference` (smallest maximum deviation, then smallest summed
// deviation, then the earliest candidate).
SparsityCalibration calibrate_sparsity_threshold(
    const Grid& grid, std::span<const double> candidates,
    std::span<const SparsityMeasure> measures,
    std::span<const Index> reference = kReferenceSparsity);

}  // namespace tecmap

#endif  // TECMAP_SYNTHETIC_H_
