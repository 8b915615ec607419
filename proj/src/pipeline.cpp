#include "postbench/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "postbench/distributions.hpp"
#include "postbench/error.hpp"
#include "postbench/kernels.hpp"
#include "postbench/rng.hpp"

namespace postbench {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kConfigKeys = {"prior",  "box",      "months",  "n_subsample", "num_samples",
                                           "seed",   "level",    "datasets", "reference",  "lenient",
                                           "bins",   "thin",     "dump_samples", "chunk_size", "workers"};

bool safe_label(const std::string& label) {
  if (label.empty()) return false;
  return std::all_of(label.begin(), label.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

GeoBox parse_box(const Json& j) {
  return GeoBox{j.at("lat_min").get<double>(), j.at("lat_max").get<double>(), j.at("lon_min").get<double>(),
                j.at("lon_max").get<double>()};
}

// Into the [-180, 360) range the grid reader accepts.
double readable_lon(double lon) {
  if (lon < -180.0) return lon + 360.0;
  if (lon >= 360.0) return lon - 360.0;
  return lon;
}

Json box_json(const GeoBox& b) {
  return Json{{"lat_min", b.lat_min}, {"lat_max", b.lat_max}, {"lon_min", b.lon_min}, {"lon_max", b.lon_max}};
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Config, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) fail(ErrorKind::Config, "failed writing '" + path.string() + "'");
}

std::optional<std::string> created_stamp() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  if (epoch == nullptr || *epoch == '\0') return std::nullopt;
  char* end = nullptr;
  const long long secs = std::strtoll(epoch, &end, 10);
  if (*end != '\0') return std::nullopt;
  return format_timestamp(Timestamp{std::chrono::seconds{secs}});
}

TimeSeries ingest(const RunConfig& cfg, const DatasetSpec& d) {
  const CsvOptions opts{cfg.lenient};
  if (d.kind == "grid") return box_average(read_grid_csv(d.path, opts), *cfg.box, d.label);
  return read_timeseries_csv(d.path, d.label, opts);
}

DatasetResult fit_one(const RunConfig& cfg, const DatasetSpec& d, const ExecOptions& exec) {
  DatasetResult r;
  r.info.label = d.label;
  r.info.source = d.path.string();
  r.info.kind = d.kind;

  const TimeSeries series = filter_months(ingest(cfg, d), cfg.months);
  r.info.n_available = series.size();
  r.info.subsample_seed = derive_seed(cfg.seed, d.label, "subsample");
  r.info.sampler_seed = derive_seed(cfg.seed, d.label, "sample_joint");

  r.info.stats = compute_stats(subsample(series, cfg.n_subsample, r.info.subsample_seed));
  r.info.posterior = posterior_update(cfg.prior, r.info.stats);
  r.info.num_samples = cfg.num_samples;
  r.samples = sample_joint(r.info.posterior,
                           SamplerConfig{r.info.sampler_seed, cfg.num_samples, exec.chunk_size, exec.workers});
  r.info.summary = summarize(r.samples, d.label, cfg.level);
  return r;
}

}  // namespace

void validate(const RunConfig& c) {
  validate(c.prior);
  if (!(c.level > 0.0 && c.level < 1.0)) fail(ErrorKind::Config, "level must lie in (0, 1)");
  if (c.n_subsample < 2) fail(ErrorKind::Config, "n_subsample must be >= 2");
  if (c.num_samples < 1) fail(ErrorKind::Config, "num_samples must be >= 1");
  if (c.bins < 1) fail(ErrorKind::Config, "bins must be >= 1");
  if (c.datasets.empty()) fail(ErrorKind::Config, "no datasets configured");
  std::set<std::string> labels;
  for (const auto& d : c.datasets) {
    if (!safe_label(d.label))
      fail(ErrorKind::Config, "dataset label '" + d.label + "' must be non-empty and use [A-Za-z0-9_.-]");
    if (!labels.insert(d.label).second) fail(ErrorKind::Config, "duplicate dataset label '" + d.label + "'");
    if (d.kind != "timeseries" && d.kind != "grid")
      fail(ErrorKind::Config, "dataset '" + d.label + "' has unknown kind '" + d.kind + "'");
    if (d.kind == "grid" && !c.box) fail(ErrorKind::Config, "grid dataset '" + d.label + "' requires a box");
  }
  if (c.box) {
    try {
      validate(*c.box);
    } catch (const Error& e) {
      fail(ErrorKind::Config, e.what());
    }
  }
  if (!labels.count(c.reference))
    fail(ErrorKind::Config, "reference label '" + c.reference + "' is not among the datasets");
}

RunConfig parse_run_config(const Json& input, const fs::path& base_dir) {
  const Json& j = input.contains("config") && input.contains("datasets") ? input.at("config") : input;
  RunConfig c;
  try {
    if (!j.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
    for (const auto& [key, value] : j.items())
      if (!kConfigKeys.count(key)) fail(ErrorKind::Config, "unknown config key '" + key + "'");
    c.prior = j.at("prior").get<Prior>();
    if (j.contains("box") && !j["box"].is_null()) c.box = parse_box(j["box"]);
    for (const auto& m : j.value("months", Json::array()))
      c.months.push_back({m.at("year").get<int>(), m.at("month").get<unsigned>()});
    c.n_subsample = j.value("n_subsample", kDefaultSubsample);
    c.num_samples = j.value("num_samples", kDefaultNumSamples);
    c.seed = j.value("seed", std::uint64_t{0});
    c.level = j.value("level", kDefaultLevel);
    for (const auto& d : j.at("datasets")) {
      DatasetSpec spec;
      spec.label = d.at("label").get<std::string>();
      fs::path p = d.at("path").get<std::string>();
      spec.path = (p.is_absolute() ? p : fs::absolute(base_dir / p)).lexically_normal();
      spec.kind = d.value("kind", std::string{"timeseries"});
      c.datasets.push_back(std::move(spec));
    }
    c.reference = j.value("reference", c.datasets.empty() ? std::string{} : c.datasets.front().label);
    c.lenient = j.value("lenient", false);
    c.bins = j.value("bins", kDefaultBins);
    if (j.contains("thin") && !j["thin"].is_null()) c.thin = j["thin"].get<std::size_t>();
    c.dump_samples = j.value("dump_samples", false);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Config, std::string("invalid config: ") + e.what());
  }
  try {
    validate(c);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidPrior) fail(ErrorKind::Config, e.what());
    throw;
  }
  return c;
}

ExecOptions parse_exec_options(const Json& j) {
  ExecOptions e;
  e.chunk_size = j.value("chunk_size", kDefaultChunkSize);
  e.workers = j.value("workers", 1u);
  if (e.chunk_size == 0) fail(ErrorKind::Config, "chunk_size must be >= 1");
  return e;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["prior"] = c.prior;
  j["box"] = c.box ? box_json(*c.box) : Json(nullptr);
  Json months = Json::array();
  for (const auto& m : c.months) months.push_back(Json{{"year", m.year}, {"month", m.month}});
  j["months"] = months;
  j["n_subsample"] = c.n_subsample;
  j["num_samples"] = c.num_samples;
  j["seed"] = c.seed;
  j["level"] = c.level;
  Json ds = Json::array();
  for (const auto& d : c.datasets) ds.push_back(Json{{"label", d.label}, {"path", d.path.string()}, {"kind", d.kind}});
  j["datasets"] = ds;
  j["reference"] = c.reference;
  j["lenient"] = c.lenient;
  j["bins"] = c.bins;
  j["thin"] = c.thin ? Json(*c.thin) : Json(nullptr);
  j["dump_samples"] = c.dump_samples;
  return j;
}

const DatasetResult& FitResult::find(const std::string& label) const {
  for (const auto& d : datasets)
    if (d.info.label == label) return d;
  fail(ErrorKind::Config, "no dataset labelled '" + label + "'");
}

RunManifest FitResult::manifest() const {
  RunManifest m;
  m.prior = config.prior;
  m.level = config.level;
  m.created = created_stamp();
  m.config = to_json(config);
  for (const auto& d : datasets) m.datasets.push_back(d.info);
  return m;
}

FitResult run_fit(const RunConfig& config, const ExecOptions& exec) {
  validate(config);
  FitResult result;
  result.config = config;
  std::string errors;
  std::optional<ErrorKind> first_kind;
  for (const auto& d : config.datasets) {
    try {
      result.datasets.push_back(fit_one(config, d, exec));
    } catch (const Error& e) {
      if (!first_kind) first_kind = e.kind();
      errors += (errors.empty() ? "" : "; ") + std::string("dataset '") + d.label + "' (" + d.path.string() +
                "): " + e.what();
    }
  }
  if (first_kind) fail(*first_kind, errors);
  return result;
}

std::vector<fs::path> write_fit_artifacts(const FitResult& result, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text(out_dir / name, content);
    written.push_back(out_dir / name);
  };

  const RunConfig& cfg = result.config;
  const Json provenance{{"prior", cfg.prior},
                        {"seed", cfg.seed},
                        {"S", cfg.num_samples},
                        {"n_subsample", cfg.n_subsample},
                        {"reference", cfg.reference}};
  std::vector<PosteriorSummary> summaries;
  std::vector<std::string> labels;
  for (const auto& d : result.datasets) {
    summaries.push_back(d.info.summary);
    labels.push_back(d.info.label);
  }
  emit("summary.txt", render_summary_table(summaries, TableFormat::Text, provenance));
  emit("summary.json", render_summary_table(summaries, TableFormat::Json, provenance));
  emit("summary.csv", render_summary_table(summaries, TableFormat::Csv, provenance));

  const DatasetResult& ref = result.find(cfg.reference);
  const double ref_theta_mean = sample_mean(ref.samples.theta);
  std::vector<double> ref_precision(ref.samples.size());
  kernels::reciprocal(ref.samples.sigma_sq, ref_precision);
  const double ref_precision_mean = sample_mean(ref_precision);

  for (const auto& d : result.datasets) {
    const std::string& l = d.info.label;
    emit("joint_" + l + ".csv", render_joint_scatter(d.samples, l, cfg.thin));
    emit("marginal_theta_" + l + ".csv",
         render_marginal(d.samples, l, MarginalKind::Theta, cfg.bins, cfg.level, ref_theta_mean));
    emit("marginal_precision_" + l + ".csv",
         render_marginal(d.samples, l, MarginalKind::Precision, cfg.bins, cfg.level, ref_precision_mean));
    if (cfg.dump_samples) {
      emit("samples_" + l + ".csv", joint_samples_csv(d.samples));
      emit("samples_" + l + ".json", joint_samples_envelope(d.samples).dump(2) + "\n");
    }
  }
  emit("plot.gp", render_gnuplot_script(labels));
  emit("manifest.json", Json(result.manifest()).dump(2) + "\n");
  return written;
}

CompareReport run_compare(const RunManifest& manifest, const std::string& reference) {
  const ManifestDataset* ref = nullptr;
  std::string available;
  for (const auto& d : manifest.datasets) {
    available += (available.empty() ? "" : ", ") + d.label;
    if (d.label == reference) ref = &d;
  }
  if (ref == nullptr)
    fail(ErrorKind::Config, "unknown reference '" + reference + "'; available labels: " + available);

  CompareReport report;
  report.reference = reference;
  std::vector<PosteriorSummary> others;
  for (const auto& d : manifest.datasets)
    if (d.label != reference) others.push_back(d.summary);
  if (others.empty()) report.warnings.push_back("only the reference dataset is present; nothing to compare");
  report.results = compare(ref->summary, others);
  report.theta_ranking = rank_by_theta_overlap(report.results);
  report.sigma_ranking = rank_by_sigma_overlap(report.results);
  return report;
}

Json compare_to_json(const CompareReport& report) {
  return Json{{"reference", report.reference},
              {"results", report.results},
              {"theta_overlap_ranking", report.theta_ranking},
              {"sigma_sq_overlap_ranking", report.sigma_ranking},
              {"warnings", report.warnings}};
}

std::string render_compare_text(const CompareReport& report) {
  std::string out = "# reference: " + report.reference + "\n";
  for (const auto& w : report.warnings) out += "# warning: " + w + "\n";
  auto section = [&](const char* title, const std::vector<std::string>& ranking, bool theta) {
    out += std::string(title) + "\n";
    int rank = 1;
    for (const auto& label : ranking) {
      const auto it = std::find_if(report.results.begin(), report.results.end(),
                                   [&](const OverlapResult& r) { return r.other == label; });
      const double len = theta ? it->theta_overlap_len : it->sigma_overlap_len;
      const bool in = theta ? it->theta_contains_ref_mean : it->sigma_contains_ref_mean;
      out += fmt::format("{}. {}  overlap {}  contains reference mean: {}\n", rank++, label, format_2dp(len),
                         in ? "yes" : "no");
    }
  };
  section("theta overlap ranking:", report.theta_ranking, true);
  section("sigma_sq overlap ranking:", report.sigma_ranking, false);
  return out;
}

std::vector<fs::path> write_compare(const CompareReport& report, const fs::path& dir) {
  write_text(dir / "overlap.json", compare_to_json(report).dump(2) + "\n");
  write_text(dir / "overlap.txt", render_compare_text(report));
  return {dir / "overlap.json", dir / "overlap.txt"};
}

SynthSpec parse_synth_spec(const Json& j) {
  SynthSpec s;
  try {
    s.seed = j.value("seed", std::uint64_t{0});
    s.start = parse_timestamp(j.value("start", std::string{"2008-04-01T00:00:00Z"}));
    const double hours = j.value("step_hours", 3.0);
    if (!(hours > 0.0)) fail(ErrorKind::Config, "step_hours must be positive");
    s.step = std::chrono::seconds{static_cast<long long>(hours * 3600.0)};
    if (s.step.count() <= 0) fail(ErrorKind::Config, "step_hours must be at least one second");
    if (j.contains("box") && !j["box"].is_null()) s.box = parse_box(j["box"]);
    std::set<std::string> labels;
    for (const auto& d : j.at("datasets")) {
      SynthDataset sd;
      sd.label = d.at("label").get<std::string>();
      sd.mean = d.at("mean").get<double>();
      sd.variance = d.at("variance").get<double>();
      sd.steps = d.value("steps", std::size_t{720});
      if (d.contains("seed")) sd.seed = d["seed"].get<std::uint64_t>();
      sd.kind = d.value("kind", std::string{"timeseries"});
      if (!safe_label(sd.label)) fail(ErrorKind::Config, "invalid synth label '" + sd.label + "'");
      if (!labels.insert(sd.label).second) fail(ErrorKind::Config, "duplicate synth label '" + sd.label + "'");
      if (!std::isfinite(sd.mean)) fail(ErrorKind::Config, "synth mean must be finite");
      if (!(sd.variance >= 0.0) || !std::isfinite(sd.variance))
        fail(ErrorKind::Config, "synth variance must be non-negative");
      if (sd.steps == 0) fail(ErrorKind::Config, "synth steps must be positive");
      if (sd.kind != "timeseries" && sd.kind != "grid") fail(ErrorKind::Config, "unknown synth kind '" + sd.kind + "'");
      if (sd.kind == "grid" && !s.box) fail(ErrorKind::Config, "grid synth dataset requires a box");
      s.datasets.push_back(std::move(sd));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Config, std::string("invalid synth spec: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Config) fail(ErrorKind::Config, e.what());
    throw;
  }
  if (s.box) validate(*s.box);
  return s;
}

TimeSeries synth_series(const SynthSpec& spec, const SynthDataset& d) {
  TimeSeries ts;
  ts.label = d.label;
  ts.times.reserve(d.steps);
  ts.values.reserve(d.steps);
  PhiloxStream rng(derive_seed(d.seed.value_or(spec.seed), d.label, "synth"), 0);
  for (std::size_t i = 0; i < d.steps; ++i) {
    ts.times.push_back(spec.start + spec.step * static_cast<long long>(i));
    ts.values.push_back(d.variance > 0.0 ? sample_normal(d.mean, d.variance, rng) : d.mean);
  }
  return ts;
}

std::vector<fs::path> run_synth(const SynthSpec& spec, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  for (const auto& d : spec.datasets) {
    const TimeSeries ts = synth_series(spec, d);
    fmt::memory_buffer buf;
    auto out = std::back_inserter(buf);
    if (d.kind == "grid") {
      const GeoBox& b = *spec.box;
      fmt::format_to(out, "time,lat,lon,value\n");
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string t = format_timestamp(ts.times[i]);
        // 3x3 interior lattice carrying the value, four decoys outside.
        for (int a = 1; a <= 3; ++a)
          for (int c = 1; c <= 3; ++c)
            fmt::format_to(out, "{},{},{},{}\n", t, b.lat_min + a * (b.lat_max - b.lat_min) / 4.0,
                           b.lon_min + c * (b.lon_max - b.lon_min) / 4.0, ts.values[i]);
        // Decoys that would land inside a polar or full-circle box are dropped.
        const double decoy = ts.values[i] + 100.0;
        const bool lon_decoys = b.lon_max - b.lon_min < 359.0;
        if (b.lat_min - 0.5 >= -90.0) fmt::format_to(out, "{},{},{},{}\n", t, b.lat_min - 0.5, b.lon_min, decoy);
        if (b.lat_max + 0.5 <= 90.0) fmt::format_to(out, "{},{},{},{}\n", t, b.lat_max + 0.5, b.lon_max, decoy);
        if (lon_decoys) {
          fmt::format_to(out, "{},{},{},{}\n", t, b.lat_min, readable_lon(b.lon_min - 0.5), decoy);
          fmt::format_to(out, "{},{},{},{}\n", t, b.lat_max, readable_lon(b.lon_max + 0.5), decoy);
        }
      }
    } else {
      fmt::format_to(out, "time,value\n");
      for (std::size_t i = 0; i < ts.size(); ++i)
        fmt::format_to(out, "{},{}\n", format_timestamp(ts.times[i]), ts.values[i]);
    }
    const fs::path p = out_dir / (d.label + ".csv");
    write_text(p, fmt::to_string(buf));
    written.push_back(p);
  }
  return written;
}

}  // namespace postbench
