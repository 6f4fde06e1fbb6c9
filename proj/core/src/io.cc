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

#include "tecmap/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "tecmap/error.h"

namespace tecmap {
namespace {

constexpr std::string_view kStationHeader = "id,lat_deg,lon_deg";
constexpr std::string_view kMeasurementHeader = "id,lat_deg,lon_deg,tecu";
constexpr std::string_view kEvaluationHeader = "method,count,trial,error";

// Line reader that tracks line numbers and strips a trailing '\r'.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source)
      : in_(in), source_(std::move(source)) {}

  bool next(std::string* line) {
    if (!std::getline(in_, *line)) return false;
    ++line_no_;
    if (!line->empty() && line->back() == '\r') line->pop_back();
    return true;
  }

  // Next line that is not entirely blank.
  bool next_nonblank(std::string* line) {
    while (next(line)) {
      if (line->find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << source_ << ":" << line_no_ << ": " << what;
    throw Error(ErrorCode::kParse, os.str());
  }

  [[noreturn]] void invalid(const std::string& what) const {
    std::ostringstream os;
    os << source_ << ":" << line_no_ << ": " << what;
    throw Error(ErrorCode::kValidation, os.str());
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::string source_;
  int line_no_ = 0;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

template <typename T>
std::optional<T> parse_integer(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

double require_double(const LineReader& r, std::string_view field,
                      std::string_view name) {
  const auto v = parse_double(field);
  if (!v) {
    r.fail("cannot parse " + std::string(name) + " '" + std::string(field) + "'");
  }
  if (!std::isfinite(*v)) {
    r.invalid(std::string(name) + " is not finite");
  }
  return *v;
}

void check_coordinates(const LineReader& r, double lat, double lon) {
  if (lat < -90.0 || lat > 90.0) {
    r.invalid("latitude " + format_double(lat) + " outside [-90, 90]");
  }
  if (lon < -180.0 || lon > 180.0) {
    r.invalid("longitude " + format_double(lon) + " outside [-180, 180]");
  }
}

void expect_header(LineReader& r, std::string_view header) {
  std::string line;
  if (!r.next(&line)) r.fail("missing header '" + std::string(header) + "'");
  std::string joined;
  for (std::string_view f : split(line)) {
    if (!joined.empty()) joined += ',';
    joined += f;
  }
  if (joined != header) {
    r.fail("expected header '" + std::string(header) + "', got '" + line + "'");
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open '" + path + "' for reading");
  return in;
}

template <typename Fn>
void write_file(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kValidation, "cannot open '" + path + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw Error(ErrorCode::kValidation, "failed writing '" + path + "'");
}

void check_id(const LineReader& r, std::string_view id) {
  if (id.empty()) r.fail("empty station id");
  if (id.find_first_of("\",") != std::string_view::npos) {
    r.fail("station id must not contain quotes or commas");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<Station> read_stations(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  expect_header(r, kStationHeader);
  std::vector<Station> out;
  std::set<std::string, std::less<>> seen;
  std::string line;
  while (r.next_nonblank(&line)) {
    const auto f = split(line);
    if (f.size() != 3) r.fail("expected 3 fields, got " + std::to_string(f.size()));
    check_id(r, f[0]);
    Station s{std::string(f[0]), require_double(r, f[1], "lat_deg"),
              require_double(r, f[2], "lon_deg")};
    check_coordinates(r, s.lat, s.lon);
    if (!seen.insert(s.id).second) r.invalid("duplicate station id '" + s.id + "'");
    out.push_back(std::move(s));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kNoObservations, source + ": station file has no rows");
  }
  return out;
}

std::vector<Station> read_stations(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_stations(in, path);
}

void write_stations(std::ostream& out, std::span<const Station> stations) {
  out << kStationHeader << '\n';
  for (const Station& s : stations) {
    out << s.id << ',' << format_double(s.lat) << ',' << format_double(s.lon) << '\n';
  }
}

void write_stations(const std::string& path, std::span<const Station> stations) {
  write_file(path, [&](std::ostream& out) { write_stations(out, stations); });
}

std::vector<Measurement> read_measurements(std::istream& in,
                                           std::span<const Station> stations,
                                           const std::string& source) {
  std::unordered_map<std::string_view, const Station*> by_id;
  for (const Station& s : stations) by_id.emplace(s.id, &s);

  LineReader r(in, source);
  expect_header(r, kMeasurementHeader);
  std::vector<Measurement> out;
  std::string line;
  while (r.next_nonblank(&line)) {
    const auto f = split(line);
    if (f.size() != 4) r.fail("expected 4 fields, got " + std::to_string(f.size()));
    check_id(r, f[0]);
    Measurement m;
    m.station.id = std::string(f[0]);
    if (f[1].empty() && f[2].empty()) {
      const auto it = by_id.find(f[0]);
      if (it == by_id.end()) {
        r.invalid("no coordinates and no station entry for '" + m.station.id + "'");
      }
      m.station = *it->second;
    } else {
      m.station.lat = require_double(r, f[1], "lat_deg");
      m.station.lon = require_double(r, f[2], "lon_deg");
      check_coordinates(r, m.station.lat, m.station.lon);
    }
    m.tecu = require_double(r, f[3], "tecu");
    out.push_back(std::move(m));
  }
  if (out.empty()) {
    throw Error(ErrorCode::kNoObservations, source + ": measurement file has no rows");
  }
  return out;
}

std::vector<Measurement> read_measurements(const std::string& path,
                                           std::span<const Station> stations) {
  std::ifstream in = open_in(path);
  return read_measurements(in, stations, path);
}

void write_measurements(std::ostream& out,
                        std::span<const Measurement> measurements) {
  out << kMeasurementHeader << '\n';
  for (const Measurement& m : measurements) {
    out << m.station.id << ',' << format_double(m.station.lat) << ','
        << format_double(m.station.lon) << ',' << format_double(m.tecu) << '\n';
  }
}

void write_measurements(const std::string& path,
                        std::span<const Measurement> measurements) {
  write_file(path, [&](std::ostream& out) { write_measurements(out, measurements); });
}

TecMap read_grid(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::string line;
  if (!r.next(&line)) r.fail("missing grid header");
  std::istringstream header(line);
  std::string hash;
  std::string tag;
  header >> hash >> tag;
  if (hash != "#" || tag != "grid") r.fail("expected '# grid ...' header");

  std::map<std::string, std::string, std::less<>> kv;
  std::string token;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) r.fail("malformed header token '" + token + "'");
    if (!kv.emplace(token.substr(0, eq), token.substr(eq + 1)).second) {
      r.fail("repeated header key '" + token.substr(0, eq) + "'");
    }
  }
  auto number = [&](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end()) r.fail(std::string("header lacks ") + key);
    return require_double(r, it->second, key);
  };
  auto count = [&](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end()) r.fail(std::string("header lacks ") + key);
    const auto v = parse_integer<Index>(it->second);
    if (!v) r.fail(std::string("cannot parse ") + key + " '" + it->second + "'");
    return *v;
  };
  if (kv.size() != 6) r.fail("header must hold exactly lat_min lon_min dlat dlon P Q");
  Grid grid{number("lat_min"), number("lon_min"), number("dlat"),
            number("dlon"),    count("P"),        count("Q")};
  try {
    grid.validate();
  } catch (const Error& e) {
    r.fail(e.what());
  }

  Eigen::MatrixXd values(grid.rows, grid.cols);
  for (Index p = 0; p < grid.rows; ++p) {
    if (!r.next(&line)) {
      r.fail("expected " + std::to_string(grid.rows) + " rows, found " +
             std::to_string(p));
    }
    const auto f = split(line);
    if (static_cast<Index>(f.size()) != grid.cols) {
      r.fail("expected " + std::to_string(grid.cols) + " values, got " +
             std::to_string(f.size()));
    }
    for (Index q = 0; q < grid.cols; ++q) {
      values(p, q) = require_double(r, f[static_cast<std::size_t>(q)], "value");
    }
  }
  if (r.next_nonblank(&line)) {
    r.fail("more rows than the header's P=" + std::to_string(grid.rows));
  }
  return TecMap(grid, std::move(values));
}

TecMap read_grid(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_grid(in, path);
}

void write_grid(std::ostream& out, const TecMap& map) {
  const Grid& g = map.grid();
  out << "# grid lat_min=" << format_double(g.lat_min)
      << " lon_min=" << format_double(g.lon_min)
      << " dlat=" << format_double(g.dlat) << " dlon=" << format_double(g.dlon)
      << " P=" << g.rows << " Q=" << g.cols << '\n';
  for (Index p = 0; p < g.rows; ++p) {
    for (Index q = 0; q < g.cols; ++q) {
      if (q > 0) out << ',';
      out << format_double(map(p, q));
    }
    out << '\n';
  }
}

void write_grid(const std::string& path, const TecMap& map) {
  write_file(path, [&](std::ostream& out) { write_grid(out, map); });
}

const std::array<Rgb, 256>& heatmap_colormap() {
  static const std::array<Rgb, 256> table = [] {
    std::array<Rgb, 256> t{};
    for (int i = 0; i < 256; ++i) {
      const int x = 3 * i;
      const int seg = std::min(x / 255, 2);
      const auto f = static_cast<std::uint8_t>(x - 255 * seg);
      const auto g = static_cast<std::uint8_t>(255 - f);
      switch (seg) {
        case 0:
          t[static_cast<std::size_t>(i)] = {0, f, g};
          break;
        case 1:
          t[static_cast<std::size_t>(i)] = {f, 255, 0};
          break;
        default:
          t[static_cast<std::size_t>(i)] = {255, g, 0};
          break;
      }
    }
    return t;
  }();
  return table;
}

int colormap_index(double value, double vmin, double vmax) {
  if (!(vmax > vmin) || !std::isfinite(vmin) || !std::isfinite(vmax)) {
    throw Error(ErrorCode::kParameter, "heatmap needs finite vmin < vmax");
  }
  const double t = std::floor(256.0 * (value - vmin) / (vmax - vmin));
  if (!(t > 0.0)) return 0;
  if (t >= 255.0) return 255;
  return static_cast<int>(t);
}

void write_heatmap(std::ostream& out, const TecMap& map, double vmin,
                   double vmax) {
  colormap_index(vmin, vmin, vmax);
  const Grid& g = map.grid();
  const auto& cmap = heatmap_colormap();
  out << "P6\n" << g.cols << ' ' << g.rows << "\n255\n";
  std::string row(static_cast<std::size_t>(3 * g.cols), '\0');
  for (Index p = g.rows - 1; p >= 0; --p) {
    for (Index q = 0; q < g.cols; ++q) {
      const Rgb c = cmap[static_cast<std::size_t>(colormap_index(map(p, q), vmin, vmax))];
      const auto at = static_cast<std::size_t>(3 * q);
      row[at] = static_cast<char>(c.r);
      row[at + 1] = static_cast<char>(c.g);
      row[at + 2] = static_cast<char>(c.b);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

void write_heatmap(const std::string& path, const TecMap& map, double vmin,
                   double vmax) {
  colormap_index(vmin, vmin, vmax);
  write_file(path, [&](std::ostream& out) { write_heatmap(out, map, vmin, vmax); });
}

void write_evaluation_header(std::ostream& out) {
  out << kEvaluationHeader << '\n';
}

void write_evaluation_csv(std::ostream& out, const SweepResult& result) {
  for (const SweepPoint& p : result.points) {
    for (std::size_t t = 0; t < p.trial_errors.size(); ++t) {
      out << "cs," << p.count << ',' << t << ',' << format_double(p.trial_errors[t])
          << '\n';
    }
  }
}

void write_evaluation_csv(std::ostream& out, const CrossCheckResult& result) {
  for (const CrossCheckPoint& p : result.points) {
    for (std::size_t t = 0; t < p.trial_errors.size(); ++t) {
      out << to_string(result.method) << ',' << p.holdout << ',' << t << ','
          << format_double(p.trial_errors[t]) << '\n';
    }
  }
}

}  // namespace tecmap
