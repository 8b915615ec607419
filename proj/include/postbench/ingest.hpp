#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "postbench/posterior.hpp"

namespace postbench {

using Timestamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DDTHH:MM[:SS]" followed by "Z" or "+00:00".
Timestamp parse_timestamp(std::string_view text);
/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp t);

struct TimeSeries {
  std::vector<Timestamp> times;
  std::vector<double> values;
  std::string label;

  std::size_t size() const { return values.size(); }
};

/// Checks equal lengths, strictly increasing times and finite values.
void validate(const TimeSeries& series);

struct GridPoint {
  double lat;
  double lon;
  double value;
};

struct GridSlice {
  Timestamp time;
  std::vector<GridPoint> points;
};

struct GeoBox {
  double lat_min, lat_max, lon_min, lon_max;
};

void validate(const GeoBox& box);

struct CsvOptions {
  // Accept and ignore columns beyond the schema.
  bool lenient = false;
};

/// Reads the `time,value` schema. Blank lines and lines starting with '#'
/// are skipped.
TimeSeries read_timeseries_csv(const std::filesystem::path& path, std::string label,
                               CsvOptions options = {});
TimeSeries parse_timeseries_csv(std::string_view text, std::string label, CsvOptions options = {},
                                std::string_view source = "<memory>");

/// Reads the `time,lat,lon,value` schema, one row per point per time.
/// Slices are returned in chronological order.
std::vector<GridSlice> read_grid_csv(const std::filesystem::path& path, CsvOptions options = {});
std::vector<GridSlice> parse_grid_csv(std::string_view text, CsvOptions options = {},
                                      std::string_view source = "<memory>");

/// Unweighted mean of the points inside the box (inclusive edges) for each
/// slice. Longitudes are wrapped into [lon_min, lon_min + 360) before the
/// test, so 0..360 and -180..180 grids both work.
TimeSeries box_average(const std::vector<GridSlice>& slices, const GeoBox& box, std::string label);

/// n distinct timesteps drawn uniformly without replacement, kept in
/// chronological order.
TimeSeries subsample(const TimeSeries& series, std::size_t n, std::uint64_t seed);

struct YearMonth {
  int year;
  unsigned month;
  bool operator==(const YearMonth&) const = default;
};

/// Keeps only timesteps falling in one of the listed months; an empty list
/// keeps everything.
TimeSeries filter_months(const TimeSeries& series, const std::vector<YearMonth>& months);

/// Shifted two-pass moments: values are centred on the first element before
/// summing, so a constant series yields s_sq == 0 exactly.
SampleStats compute_stats(const TimeSeries& series);
SampleStats compute_stats(std::span<const double> values);

}  // namespace postbench
