#include "postbench/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "postbench/error.hpp"
#include "postbench/kernels.hpp"
#include "postbench/rng.hpp"

namespace postbench {

namespace chr = std::chrono;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_int(std::string_view s, int& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && !s.empty();
}

[[noreturn]] void ingest_error(std::string_view source, std::size_t line, const std::string& what) {
  fail(ErrorKind::Ingest, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

struct Line {
  std::size_t number;
  std::string_view text;
};

// Splits into non-blank, non-comment lines.
std::vector<Line> data_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::string_view raw = text.substr(start, nl == text.npos ? text.npos : nl - start);
    ++number;
    const std::string_view t = trim(raw);
    if (!t.empty() && t.front() != '#') lines.push_back({number, t});
    if (nl == text.npos) break;
    start = nl + 1;
  }
  return lines;
}

// Maps schema column names to positions in the header.
std::vector<std::size_t> resolve_header(const Line& header, const std::vector<std::string_view>& schema,
                                        const CsvOptions& options, std::string_view source) {
  const auto fields = split_fields(header.text);
  std::vector<std::size_t> pos;
  for (std::string_view name : schema) {
    const auto it = std::find(fields.begin(), fields.end(), name);
    if (it == fields.end())
      ingest_error(source, header.number, "header is missing column '" + std::string(name) + "'");
    pos.push_back(static_cast<std::size_t>(it - fields.begin()));
  }
  if (!options.lenient && fields.size() != schema.size()) {
    for (std::string_view f : fields)
      if (std::find(schema.begin(), schema.end(), f) == schema.end())
        ingest_error(source, header.number, "unknown column '" + std::string(f) + "' (use lenient mode to ignore)");
    ingest_error(source, header.number, "duplicate columns in header");
  }
  return pos;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Ingest, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double wrap_lon(double lon, double lon_min) {
  while (lon < lon_min) lon += 360.0;
  while (lon >= lon_min + 360.0) lon -= 360.0;
  return lon;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  const auto bad = [&] { fail(ErrorKind::Ingest, "malformed timestamp '" + std::string(text) + "'"); };
  std::string_view s = trim(text);
  std::string_view zone;
  if (s.ends_with('Z')) {
    zone = "Z";
    s.remove_suffix(1);
  } else if (s.ends_with("+00:00")) {
    zone = "+00:00";
    s.remove_suffix(6);
  }
  if (zone.empty()) bad();
  // YYYY-MM-DDTHH:MM or YYYY-MM-DDTHH:MM:SS
  if (!(s.size() == 16 || s.size() == 19)) bad();
  if (s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || (s.size() == 19 && s[16] != ':')) bad();
  int y, mo, d, h, mi, sec = 0;
  if (!parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), mo) || !parse_int(s.substr(8, 2), d) ||
      !parse_int(s.substr(11, 2), h) || !parse_int(s.substr(14, 2), mi))
    bad();
  if (s.size() == 19 && !parse_int(s.substr(17, 2), sec)) bad();
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(mo)},
                                chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || sec > 59 || h < 0 || mi < 0 || sec < 0) bad();
  return chr::sys_days{ymd} + chr::hours{h} + chr::minutes{mi} + chr::seconds{sec};
}

std::string format_timestamp(Timestamp t) {
  const auto day = chr::floor<chr::days>(t);
  const chr::year_month_day ymd{day};
  const chr::hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

void validate(const TimeSeries& series) {
  if (series.times.size() != series.values.size())
    fail(ErrorKind::InvalidArgument, "time series '" + series.label + "' has mismatched lengths");
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    if (!std::isfinite(series.values[i]))
      fail(ErrorKind::InvalidArgument, "time series '" + series.label + "' has a non-finite value");
    if (i > 0 && series.times[i] <= series.times[i - 1])
      fail(ErrorKind::InvalidArgument,
           "time series '" + series.label + "' times are not strictly increasing at " +
               format_timestamp(series.times[i]));
  }
}

void validate(const GeoBox& box) {
  if (!(box.lat_min < box.lat_max) || !(box.lon_min < box.lon_max))
    fail(ErrorKind::InvalidArgument, "box requires lat_min < lat_max and lon_min < lon_max");
  if (box.lat_min < -90.0 || box.lat_max > 90.0)
    fail(ErrorKind::InvalidArgument, "box latitudes must lie in [-90, 90]");
}

TimeSeries parse_timeseries_csv(std::string_view text, std::string label, CsvOptions options,
                                std::string_view source) {
  const auto lines = data_lines(text);
  if (lines.empty()) fail(ErrorKind::Ingest, std::string(source) + ": empty file (no header)");
  const auto pos = resolve_header(lines[0], {"time", "value"}, options, source);
  const std::size_t width = split_fields(lines[0].text).size();

  TimeSeries series;
  series.label = std::move(label);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i].text);
    if (fields.size() != width)
      ingest_error(source, lines[i].number,
                   "malformed row: expected " + std::to_string(width) + " fields, got " + std::to_string(fields.size()));
    Timestamp t;
    try {
      t = parse_timestamp(fields[pos[0]]);
    } catch (const Error& e) {
      ingest_error(source, lines[i].number, e.what());
    }
    double v;
    if (!parse_double(fields[pos[1]], v) || !std::isfinite(v))
      ingest_error(source, lines[i].number, "non-numeric value '" + std::string(fields[pos[1]]) + "'");
    if (!series.times.empty() && t <= series.times.back())
      ingest_error(source, lines[i].number,
                   "timestamp " + format_timestamp(t) + " is not strictly after " + format_timestamp(series.times.back()));
    series.times.push_back(t);
    series.values.push_back(v);
  }
  if (series.values.empty()) fail(ErrorKind::Ingest, std::string(source) + ": empty series (header only)");
  return series;
}

TimeSeries read_timeseries_csv(const std::filesystem::path& path, std::string label, CsvOptions options) {
  return parse_timeseries_csv(read_file(path), std::move(label), options, path.string());
}

std::vector<GridSlice> parse_grid_csv(std::string_view text, CsvOptions options, std::string_view source) {
  const auto lines = data_lines(text);
  if (lines.empty()) fail(ErrorKind::Ingest, std::string(source) + ": empty file (no header)");
  const auto pos = resolve_header(lines[0], {"time", "lat", "lon", "value"}, options, source);
  const std::size_t width = split_fields(lines[0].text).size();

  std::map<Timestamp, std::vector<GridPoint>> by_time;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i].text);
    if (fields.size() != width)
      ingest_error(source, lines[i].number, "malformed row: expected " + std::to_string(width) + " fields");
    Timestamp t;
    try {
      t = parse_timestamp(fields[pos[0]]);
    } catch (const Error& e) {
      ingest_error(source, lines[i].number, e.what());
    }
    GridPoint p{};
    if (!parse_double(fields[pos[1]], p.lat) || !parse_double(fields[pos[2]], p.lon) ||
        !parse_double(fields[pos[3]], p.value) || !std::isfinite(p.value))
      ingest_error(source, lines[i].number, "non-numeric field");
    if (p.lat < -90.0 || p.lat > 90.0) ingest_error(source, lines[i].number, "latitude outside [-90, 90]");
    if (p.lon < -180.0 || p.lon >= 360.0) ingest_error(source, lines[i].number, "longitude outside [-180, 360)");
    by_time[t].push_back(p);
  }
  if (by_time.empty()) fail(ErrorKind::Ingest, std::string(source) + ": empty grid (header only)");
  std::vector<GridSlice> slices;
  slices.reserve(by_time.size());
  for (auto& [t, pts] : by_time) slices.push_back({t, std::move(pts)});
  return slices;
}

std::vector<GridSlice> read_grid_csv(const std::filesystem::path& path, CsvOptions options) {
  return parse_grid_csv(read_file(path), options, path.string());
}

TimeSeries box_average(const std::vector<GridSlice>& slices, const GeoBox& box, std::string label) {
  validate(box);
  TimeSeries out;
  out.label = std::move(label);
  out.times.reserve(slices.size());
  out.values.reserve(slices.size());
  std::vector<double> lat, lon, val;
  for (const GridSlice& slice : slices) {
    lat.clear();
    lon.clear();
    val.clear();
    for (const GridPoint& p : slice.points) {
      lat.push_back(p.lat);
      lon.push_back(wrap_lon(p.lon, box.lon_min));
      val.push_back(p.value);
    }
    const auto r = kernels::box_sum(lat, lon, val, {box.lat_min, box.lat_max, box.lon_min, box.lon_max});
    if (r.count == 0)
      fail(ErrorKind::Ingest, "no grid points inside the box at " + format_timestamp(slice.time));
    out.times.push_back(slice.time);
    out.values.push_back(r.sum / static_cast<double>(r.count));
  }
  validate(out);
  return out;
}

TimeSeries subsample(const TimeSeries& series, std::size_t n, std::uint64_t seed) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "subsample size must be positive");
  if (n > series.size())
    fail(ErrorKind::InvalidArgument, "cannot draw " + std::to_string(n) + " timesteps from a series of length " +
                                         std::to_string(series.size()));
  std::vector<std::size_t> idx(series.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  PhiloxStream rng(seed, 0);
  // Partial Fisher-Yates: the first n slots become a uniform n-subset.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());

  TimeSeries out;
  out.label = series.label;
  out.times.reserve(n);
  out.values.reserve(n);
  for (std::size_t i : idx) {
    out.times.push_back(series.times[i]);
    out.values.push_back(series.values[i]);
  }
  return out;
}

TimeSeries filter_months(const TimeSeries& series, const std::vector<YearMonth>& months) {
  if (months.empty()) return series;
  TimeSeries out;
  out.label = series.label;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const chr::year_month_day ymd{chr::floor<chr::days>(series.times[i])};
    const YearMonth ym{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
    if (std::find(months.begin(), months.end(), ym) != months.end()) {
      out.times.push_back(series.times[i]);
      out.values.push_back(series.values[i]);
    }
  }
  return out;
}

SampleStats compute_stats(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::InvalidArgument, "cannot compute statistics of an empty series");
  const double n = static_cast<double>(values.size());
  const double shift = values[0];
  const double mean_dev = kernels::centered_sums(values, shift, 0.0).sum / n;
  SampleStats stats;
  stats.n = static_cast<std::int64_t>(values.size());
  stats.y_bar = shift + mean_dev;
  if (values.size() >= 2) {
    const auto second = kernels::centered_sums(values, shift, mean_dev);
    // Second pass plus the compensation term for rounding in mean_dev.
    const double m2 = second.sum_sq - second.sum * second.sum / n;
    stats.s_sq = std::max(0.0, m2) / (n - 1.0);
  }
  return stats;
}

SampleStats compute_stats(const TimeSeries& series) { return compute_stats(std::span<const double>(series.values)); }

}  // namespace postbench
