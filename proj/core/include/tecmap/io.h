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

// Text and image formats.
//
//   stations      id,lat_deg,lon_deg
//   measurements  id,lat_deg,lon_deg,tecu   (lat/lon may be left empty when
//                                            the id resolves in a station list)
//   grid          # grid lat_min=.. lon_min=.. dlat=.. dlon=.. P=.. Q=..
//                 then P lines of Q comma-separated values, row p ascending
//   evaluation    method,count,trial,error
//   heatmap       binary PPM (P6), north up
//
// Readers never repair input: any malformed line raises kParse with the
// source name and line number. Numbers are written with 17 significant
// digits so that every format round-trips exactly.

#ifndef TECMAP_IO_H_
#define TECMAP_IO_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tecmap/evaluation.h"
#include "tecmap/grid.h"
#include "tecmap/sensing.h"

namespace tecmap {

// "%.17g" rendering used by every writer.
std::string format_double(double v);

std::vector<Station> read_stations(std::istream& in,
                                   const std::string& source = "<stream>");
std::vector<Station> read_stations(const std::string& path);
void write_stations(std::ostream& out, std::span<const Station> stations);
void write_stations(const std::string& path, std::span<const Station> stations);

// `stations` resolves rows whose coordinates are empty; rows that carry
// coordinates use them as written.
std::vector<Measurement> read_measurements(
    std::istream& in, std::span<const Station> stations = {},
    const std::string& source = "<stream>");
std::vector<Measurement> read_measurements(
    const std::string& path, std::span<const Station> stations = {});
void write_measurements(std::ostream& out,
                        std::span<const Measurement> measurements);
void write_measurements(const std::string& path,
                        std::span<const Measurement> measurements);

TecMap read_grid(std::istream& in, const std::string& source = "<stream>");
TecMap read_grid(const std::string& path);
void write_grid(std::ostream& out, const TecMap& map);
void write_grid(const std::string& path, const TecMap& map);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

// Piecewise-linear blue -> green -> yellow -> red ramp; entries 0, 85, 170
// and 255 are the pure colours.
const std::array<Rgb, 256>& heatmap_colormap();

// Colormap index for a value: floor(256 (v - vmin) / (vmax - vmin)) clamped
// to [0, 255]. Throws kParameter unless vmax > vmin.
int colormap_index(double value, double vmin, double vmax);

// Q x P pixels; image row 0 is grid row P - 1.
void write_heatmap(std::ostream& out, const TecMap& map, double vmin,
                   double vmax);
void write_heatmap(const std::string& path, const TecMap& map, double vmin,
                   double vmax);

// Rows only; write_evaluation_header emits the column line once.
void write_evaluation_csv(std::ostream& out, const SweepResult& result);
void write_evaluation_csv(std::ostream& out, const CrossCheckResult& result);
void write_evaluation_header(std::ostream& out);

}  // namespace tecmap

#endif  // TECMAP_IO_H_
