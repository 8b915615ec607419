#pragma once

#include <optional>
#include <string>
#include <vector>

#include "postbench/analysis.hpp"
#include "postbench/sampler.hpp"
#include "postbench/serialize.hpp"

namespace postbench {

inline constexpr const char* kToolVersion = "0.1.0";

enum class TableFormat { Text, Json, Csv };

/// Two decimals, ties to even, e.g. 0.125 -> "0.12".
std::string format_2dp(double x);

/// Table with columns dataset, theta, theta PB, sigma_sq, sigma_sq PB.
/// Text rounds to two decimals; JSON and CSV carry full precision plus the
/// rounded display strings. `provenance` is embedded verbatim.
std::string render_summary_table(const std::vector<PosteriorSummary>& summaries, TableFormat format,
                                 const Json& provenance = Json::object());

/// `theta,sigma_sq` rows, every `thin`-th draw when thinning is requested.
/// Header comments carry the label, seed, S and the posterior means.
std::string render_joint_scatter(const JointSamples& samples, const std::string& label,
                                 std::optional<std::size_t> thin = std::nullopt);

enum class MarginalKind { Theta, Precision };

const char* marginal_name(MarginalKind which);

struct MarginalRender {
  std::vector<double> values;  // theta draws or 1/sigma_sq draws
  DensitySummary density;
  Interval bound;
};

/// Density and level bound for theta or for the precision 1/sigma_sq.
MarginalRender marginal_data(const JointSamples& samples, MarginalKind which, std::size_t bins,
                             double level);

/// `center,density` rows with the bound endpoints and the optional reference
/// mean as header comments.
std::string render_marginal(const JointSamples& samples, const std::string& label, MarginalKind which,
                            std::size_t bins, double level,
                            std::optional<double> reference_mean = std::nullopt);

struct ManifestDataset {
  std::string label;
  std::string source;
  std::string kind;
  std::size_t n_available = 0;
  SampleStats stats;
  Posterior posterior;
  std::uint64_t subsample_seed = 0;
  std::uint64_t sampler_seed = 0;
  std::size_t num_samples = 0;
  PosteriorSummary summary;
};

/// Provenance of a fit run; `config` is the fully resolved run configuration.
struct RunManifest {
  std::vector<ManifestDataset> datasets;
  Prior prior;
  double level = 0.95;
  std::optional<std::string> created;
  std::string tool_version = kToolVersion;
  Json config = Json::object();
};

void to_json(Json& j, const ManifestDataset& d);
void from_json(const Json& j, ManifestDataset& d);
void to_json(Json& j, const RunManifest& m);
void from_json(const Json& j, RunManifest& m);

/// Checks unique labels and level in (0, 1).
void validate(const RunManifest& m);

/// gnuplot script plotting the joint and marginal files of each label.
std::string render_gnuplot_script(const std::vector<std::string>& labels);

}  // namespace postbench
