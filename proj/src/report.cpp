#include "postbench/report.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "postbench/error.hpp"
#include "postbench/kernels.hpp"

namespace postbench {

namespace {

std::string bound_2dp(const Interval& i) { return "(" + format_2dp(i.lo) + ", " + format_2dp(i.hi) + ")"; }

void append_comment_json(std::string& out, const Json& provenance) {
  for (const auto& [key, value] : provenance.items()) out += "# " + key + ": " + value.dump() + "\n";
}

}  // namespace

std::string format_2dp(double x) {
  // nearbyint follows the default round-to-nearest-even mode.
  const double cents = std::nearbyint(x * 100.0);
  if (cents == 0.0) return "0.00";
  const auto whole = static_cast<long long>(std::fabs(cents));
  return fmt::format("{}{}.{:02}", cents < 0 ? "-" : "", whole / 100, whole % 100);
}

std::string render_summary_table(const std::vector<PosteriorSummary>& summaries, TableFormat format,
                                 const Json& provenance) {
  if (summaries.empty()) fail(ErrorKind::InvalidArgument, "summary table needs at least one dataset");
  const double level = summaries.front().theta_bound.level;

  switch (format) {
    case TableFormat::Text: {
      std::string out = "# posterior summary\n";
      out += "# level: " + format_full(level) + "\n";
      out += std::string("# quantile: ") + kQuantileConvention + "\n";
      append_comment_json(out, provenance);
      out += "dataset  theta  theta PB  sigma_sq  sigma_sq PB\n";
      for (const auto& s : summaries)
        out += s.label + "  " + format_2dp(s.theta_mean) + "  " + bound_2dp(s.theta_bound) + "  " +
               format_2dp(s.sigma_sq_mean) + "  " + bound_2dp(s.sigma_sq_bound) + "\n";
      return out;
    }
    case TableFormat::Json: {
      Json doc{{"level", level}, {"quantile_convention", kQuantileConvention}, {"provenance", provenance}};
      Json rows = Json::array();
      for (const auto& s : summaries) {
        Json row = s;
        row["display"] = Json{{"theta", format_2dp(s.theta_mean)},
                              {"theta_pb", bound_2dp(s.theta_bound)},
                              {"sigma_sq", format_2dp(s.sigma_sq_mean)},
                              {"sigma_sq_pb", bound_2dp(s.sigma_sq_bound)}};
        rows.push_back(std::move(row));
      }
      doc["rows"] = std::move(rows);
      return doc.dump(2) + "\n";
    }
    case TableFormat::Csv: {
      std::string out = std::string("# quantile: ") + kQuantileConvention + "\n";
      append_comment_json(out, provenance);
      out +=
          "label,theta_mean,theta_lo,theta_hi,sigma_sq_mean,sigma_sq_lo,sigma_sq_hi,level,S,seed,"
          "theta_2dp,theta_lo_2dp,theta_hi_2dp,sigma_sq_2dp,sigma_sq_lo_2dp,sigma_sq_hi_2dp\n";
      for (const auto& s : summaries)
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", s.label, s.theta_mean,
                           s.theta_bound.lo, s.theta_bound.hi, s.sigma_sq_mean, s.sigma_sq_bound.lo,
                           s.sigma_sq_bound.hi, s.theta_bound.level, s.num_samples, s.seed,
                           format_2dp(s.theta_mean), format_2dp(s.theta_bound.lo),
                           format_2dp(s.theta_bound.hi), format_2dp(s.sigma_sq_mean),
                           format_2dp(s.sigma_sq_bound.lo), format_2dp(s.sigma_sq_bound.hi));
      return out;
    }
  }
  return {};
}

std::string render_joint_scatter(const JointSamples& samples, const std::string& label,
                                 std::optional<std::size_t> thin) {
  const std::size_t n = samples.size();
  if (n == 0) fail(ErrorKind::InvalidArgument, "joint scatter needs at least one sample");
  if (thin && (*thin == 0 || *thin >= n))
    fail(ErrorKind::InvalidArgument, "thinning factor must lie in [1, S)");
  const std::size_t step = thin.value_or(1);
  const PosteriorExpectations e = posterior_expectations(samples.posterior);

  fmt::memory_buffer buf;
  auto out = std::back_inserter(buf);
  fmt::format_to(out, "# label: {}\n# seed: {}\n# S: {}\n# thin: {}\n", label, samples.seed, n, step);
  fmt::format_to(out, "# posterior: mu_n={} kappa_n={} nu_n={} sigma_n_sq={}\n", samples.posterior.mu_n,
                 samples.posterior.kappa_n, samples.posterior.nu_n, samples.posterior.sigma_n_sq);
  fmt::format_to(out, "# posterior_mean_theta: {}\n", e.e_theta);
  if (e.e_sigma_sq)
    fmt::format_to(out, "# posterior_mean_sigma_sq: {}\n", *e.e_sigma_sq);
  else
    fmt::format_to(out, "# posterior_mean_sigma_sq: undefined\n");
  fmt::format_to(out, "# sample_mean_theta: {}\n# sample_mean_sigma_sq: {}\n", sample_mean(samples.theta),
                 sample_mean(samples.sigma_sq));
  fmt::format_to(out, "theta,sigma_sq\n");
  for (std::size_t i = 0; i < n; i += step) fmt::format_to(out, "{},{}\n", samples.theta[i], samples.sigma_sq[i]);
  return fmt::to_string(buf);
}

const char* marginal_name(MarginalKind which) { return which == MarginalKind::Theta ? "theta" : "precision"; }

MarginalRender marginal_data(const JointSamples& samples, MarginalKind which, std::size_t bins, double level) {
  MarginalRender r;
  if (which == MarginalKind::Theta) {
    r.values = samples.theta;
  } else {
    r.values.resize(samples.size());
    kernels::reciprocal(samples.sigma_sq, r.values);
  }
  r.density = density_summary(r.values, bins);
  r.bound = posterior_bound(r.values, level);
  return r;
}

std::string render_marginal(const JointSamples& samples, const std::string& label, MarginalKind which,
                            std::size_t bins, double level, std::optional<double> reference_mean) {
  const MarginalRender r = marginal_data(samples, which, bins, level);
  fmt::memory_buffer buf;
  auto out = std::back_inserter(buf);
  fmt::format_to(out, "# label: {}\n# which: {}\n# seed: {}\n# S: {}\n# level: {}\n# quantile: {}\n", label,
                 marginal_name(which), samples.seed, samples.size(), level, kQuantileConvention);
  fmt::format_to(out, "# bound_lo: {}\n# bound_hi: {}\n", r.bound.lo, r.bound.hi);
  if (reference_mean) fmt::format_to(out, "# reference_mean: {}\n", *reference_mean);
  fmt::format_to(out, "# bin_width: {}\ncenter,density\n", r.density.width);
  for (const auto& b : r.density.bins) fmt::format_to(out, "{},{}\n", b.center, b.density);
  return fmt::to_string(buf);
}

void to_json(Json& j, const ManifestDataset& d) {
  j = Json{{"label", d.label},
           {"source", d.source},
           {"kind", d.kind},
           {"n_available", d.n_available},
           {"stats", d.stats},
           {"posterior", d.posterior},
           {"subsample_seed", d.subsample_seed},
           {"sampler_seed", d.sampler_seed},
           {"S", d.num_samples},
           {"summary", d.summary}};
}

void from_json(const Json& j, ManifestDataset& d) {
  d.label = j.at("label").get<std::string>();
  d.source = j.value("source", std::string{});
  d.kind = j.value("kind", std::string{"timeseries"});
  d.n_available = j.value("n_available", std::size_t{0});
  if (j.contains("stats")) d.stats = j["stats"].get<SampleStats>();
  if (j.contains("posterior")) d.posterior = j["posterior"].get<Posterior>();
  d.subsample_seed = j.value("subsample_seed", std::uint64_t{0});
  d.sampler_seed = j.value("sampler_seed", std::uint64_t{0});
  d.num_samples = j.value("S", std::size_t{0});
  d.summary = j.at("summary").get<PosteriorSummary>();
}

void to_json(Json& j, const RunManifest& m) {
  j = Json{{"tool_version", m.tool_version},
           {"created", m.created ? Json(*m.created) : Json(nullptr)},
           {"level", m.level},
           {"quantile_convention", kQuantileConvention},
           {"prior", m.prior},
           {"datasets", m.datasets},
           {"config", m.config}};
}

void from_json(const Json& j, RunManifest& m) {
  m.tool_version = j.value("tool_version", std::string{});
  m.created = j.contains("created") && j["created"].is_string() ? std::optional(j["created"].get<std::string>())
                                                                 : std::nullopt;
  m.level = j.at("level").get<double>();
  if (j.contains("prior")) m.prior = j["prior"].get<Prior>();
  m.datasets = j.at("datasets").get<std::vector<ManifestDataset>>();
  m.config = j.value("config", Json::object());
  validate(m);
}

void validate(const RunManifest& m) {
  if (!(m.level > 0.0 && m.level < 1.0)) fail(ErrorKind::Config, "manifest level must lie in (0, 1)");
  std::set<std::string> seen;
  for (const auto& d : m.datasets)
    if (!seen.insert(d.label).second) fail(ErrorKind::Config, "duplicate dataset label '" + d.label + "'");
}

std::string render_gnuplot_script(const std::vector<std::string>& labels) {
  std::string out =
      "# gnuplot script; run from the output directory: gnuplot -p plot.gp\n"
      "set datafile separator ','\n"
      "set datafile commentschars '#'\n"
      "set key autotitle columnhead\n";
  for (const auto& l : labels) {
    out += "set title 'joint posterior draws: " + l + "'\nset xlabel 'sigma^2'\nset ylabel 'theta'\n";
    out += "plot 'joint_" + l + ".csv' using 2:1 with dots notitle\npause -1\n";
    for (const char* which : {"theta", "precision"}) {
      out += std::string("set title 'marginal ") + which + ": " + l + "'\nset xlabel '" + which +
             "'\nset ylabel 'density'\n";
      out += "plot 'marginal_" + std::string(which) + "_" + l + ".csv' using 1:2 with steps notitle\npause -1\n";
    }
  }
  return out;
}

}  // namespace postbench
