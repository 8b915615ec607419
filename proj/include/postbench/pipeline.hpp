#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "postbench/analysis.hpp"
#include "postbench/ingest.hpp"
#include "postbench/report.hpp"
#include "postbench/sampler.hpp"
#include "postbench/serialize.hpp"

namespace postbench {

inline constexpr std::size_t kDefaultSubsample = 200;
inline constexpr std::size_t kDefaultBins = 50;
inline constexpr double kDefaultLevel = 0.95;

struct DatasetSpec {
  std::string label;
  std::filesystem::path path;
  std::string kind = "timeseries";  // or "grid"
};

struct RunConfig {
  Prior prior;
  std::optional<GeoBox> box;
  std::vector<YearMonth> months;
  std::size_t n_subsample = kDefaultSubsample;
  std::size_t num_samples = kDefaultNumSamples;
  std::uint64_t seed = 0;
  double level = kDefaultLevel;
  std::vector<DatasetSpec> datasets;
  std::string reference;
  bool lenient = false;
  std::size_t bins = kDefaultBins;
  std::optional<std::size_t> thin;
  bool dump_samples = false;
};

/// Scheduling knobs; outputs never depend on them.
struct ExecOptions {
  std::size_t chunk_size = kDefaultChunkSize;
  unsigned workers = 1;
};

/// Parses a run config, or the config embedded in a manifest. Relative
/// dataset paths are resolved against `base_dir`.
RunConfig parse_run_config(const Json& j, const std::filesystem::path& base_dir);
Json to_json(const RunConfig& config);
void validate(const RunConfig& config);
/// Reads optional "chunk_size" / "workers" keys.
ExecOptions parse_exec_options(const Json& j);

struct DatasetResult {
  ManifestDataset info;
  JointSamples samples;
};

struct FitResult {
  RunConfig config;
  std::vector<DatasetResult> datasets;

  const DatasetResult& find(const std::string& label) const;
  RunManifest manifest() const;
};

/// Ingest, filter months, subsample, update, sample and summarise every
/// dataset. Every stochastic step draws from derive_seed(seed, label, step).
/// Failures are collected per dataset and rethrown together.
FitResult run_fit(const RunConfig& config, const ExecOptions& exec = {});

/// Writes summary.{txt,json,csv}, joint_<label>.csv,
/// marginal_{theta,precision}_<label>.csv, plot.gp and manifest.json.
std::vector<std::filesystem::path> write_fit_artifacts(const FitResult& result,
                                                       const std::filesystem::path& out_dir);

struct CompareReport {
  std::string reference;
  std::vector<OverlapResult> results;
  std::vector<std::string> theta_ranking;
  std::vector<std::string> sigma_ranking;
  std::vector<std::string> warnings;
};

CompareReport run_compare(const RunManifest& manifest, const std::string& reference);
std::string render_compare_text(const CompareReport& report);
Json compare_to_json(const CompareReport& report);
/// Writes overlap.json and overlap.txt.
std::vector<std::filesystem::path> write_compare(const CompareReport& report, const std::filesystem::path& dir);

struct SynthDataset {
  std::string label;
  double mean = 0.0;
  double variance = 1.0;
  std::size_t steps = 720;
  std::optional<std::uint64_t> seed;
  std::string kind = "timeseries";
};

struct SynthSpec {
  std::uint64_t seed = 0;
  Timestamp start;
  std::chrono::seconds step{3 * 3600};
  std::optional<GeoBox> box;  // required for grid datasets
  std::vector<SynthDataset> datasets;
};

SynthSpec parse_synth_spec(const Json& j);

/// Gaussian series with the requested mean and variance (constant when the
/// variance is zero).
TimeSeries synth_series(const SynthSpec& spec, const SynthDataset& d);

/// Writes <label>.csv per dataset in the time-series or grid schema. Grid
/// files hold interior points equal to the series value plus decoy points
/// outside the box.
std::vector<std::filesystem::path> run_synth(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace postbench
