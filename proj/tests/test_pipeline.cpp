#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "postbench/error.hpp"
#include "postbench/pipeline.hpp"
#include "postbench/serialize.hpp"

using namespace postbench;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("postbench_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
  return out;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

Json four_way_synth() {
  return Json{{"seed", 2024},
              {"datasets",
               {{{"label", "ERAi"}, {"mean", 4.26}, {"variance", 9.9}},
                {{"label", "d01"}, {"mean", 4.80}, {"variance", 7.08}},
                {{"label", "d02"}, {"mean", 4.19}, {"variance", 8.04}},
                {{"label", "d03"}, {"mean", 4.56}, {"variance", 9.19}}}}};
}

Json four_way_config() {
  Json ds = Json::array();
  for (const char* l : {"ERAi", "d01", "d02", "d03"}) ds.push_back({{"label", l}, {"path", std::string(l) + ".csv"}});
  return Json{{"prior", {{"mu0", 7.48}, {"kappa0", 1}, {"nu0", 1}, {"sigma0_sq", 1.6129}}},
              {"seed", 99},
              {"num_samples", 4000},
              {"datasets", ds},
              {"reference", "ERAi"}};
}

// Synthesises the four series into `dir` and returns the parsed config.
RunConfig four_way(const fs::path& dir) {
  run_synth(parse_synth_spec(four_way_synth()), dir);
  return parse_run_config(four_way_config(), dir);
}

}  // namespace

TEST(RunConfigParse, DefaultsAndPaths) {
  const RunConfig c = parse_run_config(four_way_config(), "/data/in");
  EXPECT_EQ(c.n_subsample, 200u);
  EXPECT_EQ(c.level, 0.95);
  EXPECT_EQ(c.bins, 50u);
  EXPECT_EQ(c.datasets.size(), 4u);
  EXPECT_EQ(c.datasets[1].path, fs::path("/data/in/d01.csv"));
  EXPECT_EQ(c.datasets[1].kind, "timeseries");
  EXPECT_FALSE(c.thin);
  EXPECT_FALSE(c.box);
}

TEST(RunConfigParse, Errors) {
  auto with = [](auto mutate) {
    Json j = four_way_config();
    mutate(j);
    return kind_of([&] { parse_run_config(j, "/tmp"); });
  };
  EXPECT_EQ(with([](Json& j) { j["colour"] = "red"; }), ErrorKind::Config);
  EXPECT_EQ(with([](Json& j) { j.erase("prior"); }), ErrorKind::Config);
  EXPECT_EQ(with([](Json& j) { j["prior"]["kappa0"] = 0; }), ErrorKind::Config);
  EXPECT_EQ(with([](Json& j) { j["level"] = 1.0; }), ErrorKind::Config);
  EXPECT_EQ(with([](Json& j) { j["seed"] = "x"; }), ErrorKind::Config);
  EXPECT_EQ(with([](Json& j) { j["reference"] = "d09"; }), ErrorKind::Config);
  EXPECT_EQ(with([](Json& j) { j["datasets"][1]["label"] = "ERAi"; }), ErrorKind::Config);
  EXPECT_EQ(with([](Json& j) { j["datasets"][1]["label"] = "a/b"; }), ErrorKind::Config);
  EXPECT_EQ(with([](Json& j) { j["datasets"][1]["kind"] = "grid"; }), ErrorKind::Config);
  EXPECT_EQ(with([](Json& j) { j["datasets"] = Json::array(); }), ErrorKind::Config);
  EXPECT_EQ(with([](Json& j) { j["n_subsample"] = 1; }), ErrorKind::Config);
}

TEST(RunConfigParse, ToJsonRoundTrip) {
  Json j = four_way_config();
  j["box"] = {{"lat_min", 59.32}, {"lat_max", 61.5}, {"lon_min", 5.0}, {"lon_max", 7.9}};
  j["months"] = {{{"year", 2008}, {"month", 4}}};
  j["thin"] = 5;
  const RunConfig c = parse_run_config(j, "/d");
  const RunConfig back = parse_run_config(to_json(c), "/elsewhere");
  EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
}

TEST(ExecOptionsParse, DefaultsAndErrors) {
  EXPECT_EQ(parse_exec_options(Json::object()).chunk_size, kDefaultChunkSize);
  EXPECT_EQ(parse_exec_options(Json{{"workers", 3}}).workers, 3u);
  EXPECT_THROW(parse_exec_options(Json{{"chunk_size", 0}}), Error);
}

TEST(Fit, FourDatasetArtifacts) {
  const fs::path dir = fresh_dir("fit4");
  const FitResult r = run_fit(four_way(dir));
  ASSERT_EQ(r.datasets.size(), 4u);
  const auto written = write_fit_artifacts(r, dir / "out");
  EXPECT_EQ(written.size(), 17u);
  for (const char* f : {"summary.txt", "summary.json", "summary.csv", "manifest.json", "plot.gp",
                        "joint_d02.csv", "marginal_theta_ERAi.csv", "marginal_precision_d03.csv"})
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;

  for (const auto& d : r.datasets) {
    EXPECT_EQ(d.info.stats.n, 200);
    EXPECT_EQ(d.info.n_available, 720u);
    EXPECT_EQ(d.samples.size(), 4000u);
    EXPECT_EQ(d.info.posterior, posterior_update(r.config.prior, d.info.stats));
  }
  const auto rows = Json::parse(slurp(dir / "out" / "summary.json"))["rows"];
  EXPECT_EQ(rows[2]["label"], "d02");
  const std::string marginal = slurp(dir / "out" / "marginal_theta_d01.csv");
  EXPECT_NE(marginal.find("# reference_mean: " + format_full(sample_mean(r.find("ERAi").samples.theta))),
            std::string::npos);
}

TEST(Fit, OutputsIndependentOfScheduling) {
  const fs::path dir = fresh_dir("sched");
  const RunConfig cfg = four_way(dir);
  write_fit_artifacts(run_fit(cfg), dir / "a");
  write_fit_artifacts(run_fit(cfg, ExecOptions{7, 3}), dir / "b");
  write_fit_artifacts(run_fit(cfg, ExecOptions{1, 1}), dir / "c");
  const auto a = dir_contents(dir / "a");
  EXPECT_EQ(a, dir_contents(dir / "b"));
  EXPECT_EQ(a, dir_contents(dir / "c"));
}

TEST(Fit, CreatedStampFromSourceDateEpoch) {
  const fs::path dir = fresh_dir("created");
  const FitResult r = run_fit(four_way(dir));
  ::unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_FALSE(r.manifest().created);
  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  EXPECT_EQ(r.manifest().created, "2023-11-14T22:13:20Z");
  ::unsetenv("SOURCE_DATE_EPOCH");
}

TEST(Fit, SeedsDependOnLabelNotPosition) {
  const fs::path dir = fresh_dir("rename");
  const RunConfig cfg = four_way(dir);
  RunConfig renamed = cfg;
  renamed.datasets[3].label = "d04";
  std::swap(renamed.datasets[1], renamed.datasets[2]);
  const FitResult a = run_fit(cfg), b = run_fit(renamed);
  for (const char* l : {"ERAi", "d01", "d02"}) {
    EXPECT_EQ(a.find(l).samples.theta, b.find(l).samples.theta) << l;
    EXPECT_EQ(a.find(l).info.stats, b.find(l).info.stats) << l;
  }
  EXPECT_NE(a.find("d03").samples.theta, b.find("d04").samples.theta);
}

TEST(Fit, ManifestReproducesRun) {
  const fs::path dir = fresh_dir("rerun");
  write_fit_artifacts(run_fit(four_way(dir)), dir / "a");
  const Json manifest = Json::parse(slurp(dir / "a" / "manifest.json"));
  const RunConfig again = parse_run_config(manifest, dir / "a");
  write_fit_artifacts(run_fit(again), dir / "b");
  EXPECT_EQ(dir_contents(dir / "a"), dir_contents(dir / "b"));
}

TEST(Fit, AggregatesDatasetFailures) {
  const fs::path dir = fresh_dir("fail");
  RunConfig cfg = four_way(dir);
  cfg.datasets[1].path = dir / "missing1.csv";
  cfg.datasets[3].path = dir / "missing3.csv";
  const std::string msg = message_of([&] { run_fit(cfg); });
  EXPECT_NE(msg.find("d01"), std::string::npos) << msg;
  EXPECT_NE(msg.find("missing1.csv"), std::string::npos) << msg;
  EXPECT_NE(msg.find("d03"), std::string::npos) << msg;
  EXPECT_NE(msg.find("missing3.csv"), std::string::npos) << msg;
  EXPECT_EQ(kind_of([&] { run_fit(cfg); }), ErrorKind::Ingest);
}

TEST(Fit, SubsampleLargerThanSeriesFails) {
  const fs::path dir = fresh_dir("short");
  RunConfig cfg = four_way(dir);
  cfg.n_subsample = 721;
  const std::string msg = message_of([&] { run_fit(cfg); });
  EXPECT_NE(msg.find("721"), std::string::npos) << msg;
  EXPECT_NE(msg.find("720"), std::string::npos) << msg;
}

TEST(Fit, MonthFilter) {
  const fs::path dir = fresh_dir("months");
  Json spec = four_way_synth();
  spec["step_hours"] = 24;
  spec["start"] = "2008-03-01T00:00:00Z";
  for (auto& d : spec["datasets"]) d["steps"] = 92;  // March to May
  run_synth(parse_synth_spec(spec), dir);
  Json cj = four_way_config();
  cj["months"] = {{{"year", 2008}, {"month", 4}}};
  cj["n_subsample"] = 30;
  const FitResult r = run_fit(parse_run_config(cj, dir));
  EXPECT_EQ(r.find("d01").info.n_available, 30u);
  cj["n_subsample"] = 31;
  EXPECT_THROW(run_fit(parse_run_config(cj, dir)), Error);
}

TEST(Compare, FromSummaryFixtureManifest) {
  RunManifest m;
  for (const auto& s : fixtures::summary_fixture()) {
    ManifestDataset d;
    d.label = s.label;
    d.summary = s;
    m.datasets.push_back(d);
  }
  const CompareReport rep = run_compare(m, "ERAi");
  EXPECT_EQ(rep.theta_ranking, (std::vector<std::string>{"d02", "d03", "d01"}));
  EXPECT_TRUE(rep.warnings.empty());
  const std::string text = render_compare_text(rep);
  EXPECT_NE(text.find("1. d02  overlap 0.51  contains reference mean: yes"), std::string::npos) << text;
  EXPECT_NE(text.find("3. d01  overlap 0.09  contains reference mean: no"), std::string::npos) << text;
  const Json j = compare_to_json(rep);
  EXPECT_EQ(j["results"].size(), 3u);
  EXPECT_EQ(j["theta_overlap_ranking"][0], "d02");
}

TEST(Compare, SingleDatasetWarns) {
  RunManifest m;
  ManifestDataset d;
  d.label = "ERAi";
  d.summary = fixtures::summary_fixture()[0];
  m.datasets.push_back(d);
  const CompareReport rep = run_compare(m, "ERAi");
  EXPECT_TRUE(rep.results.empty());
  ASSERT_EQ(rep.warnings.size(), 1u);
  EXPECT_NE(render_compare_text(rep).find("# warning:"), std::string::npos);
}

TEST(Compare, UnknownReferenceListsLabels) {
  RunManifest m;
  for (const auto& s : fixtures::summary_fixture()) {
    ManifestDataset d;
    d.label = s.label;
    d.summary = s;
    m.datasets.push_back(d);
  }
  const std::string msg = message_of([&] { run_compare(m, "MERRA"); });
  EXPECT_NE(msg.find("MERRA"), std::string::npos);
  EXPECT_NE(msg.find("ERAi, d01, d02, d03"), std::string::npos) << msg;
}

TEST(Compare, EndToEndFromWrittenManifest) {
  const fs::path dir = fresh_dir("cmp");
  write_fit_artifacts(run_fit(four_way(dir)), dir / "out");
  const auto m = Json::parse(slurp(dir / "out" / "manifest.json")).get<RunManifest>();
  const CompareReport rep = run_compare(m, "ERAi");
  EXPECT_EQ(rep.results.size(), 3u);
  const auto files = write_compare(rep, dir / "out");
  EXPECT_TRUE(fs::exists(files[0]));
  EXPECT_TRUE(fs::exists(files[1]));
}

TEST(Synth, MeanWithinThreeStandardErrors) {
  const SynthSpec spec = parse_synth_spec(four_way_synth());
  for (const auto& d : spec.datasets) {
    const TimeSeries ts = synth_series(spec, d);
    ASSERT_EQ(ts.size(), 720u);
    EXPECT_LT(std::fabs(sample_mean(ts.values) - d.mean), 3 * std::sqrt(d.variance / 720)) << d.label;
    EXPECT_EQ(ts.times[1] - ts.times[0], std::chrono::hours(3));
  }
}

TEST(Synth, ZeroVarianceIsConstant) {
  const SynthSpec spec =
      parse_synth_spec(Json{{"datasets", {{{"label", "c"}, {"mean", 2.5}, {"variance", 0}, {"steps", 10}}}}});
  const TimeSeries ts = synth_series(spec, spec.datasets[0]);
  EXPECT_EQ(ts.values, std::vector<double>(10, 2.5));
  const SampleStats st = compute_stats(ts);
  EXPECT_EQ(*st.s_sq, 0.0);
}

TEST(Synth, DeterministicAndSeedOverride) {
  const fs::path dir = fresh_dir("synth");
  Json j = four_way_synth();
  run_synth(parse_synth_spec(j), dir / "a");
  run_synth(parse_synth_spec(j), dir / "b");
  EXPECT_EQ(dir_contents(dir / "a"), dir_contents(dir / "b"));
  j["datasets"][0]["seed"] = 7;
  run_synth(parse_synth_spec(j), dir / "c");
  const auto c = dir_contents(dir / "c");
  EXPECT_NE(c.at("ERAi.csv"), dir_contents(dir / "a").at("ERAi.csv"));
  EXPECT_EQ(c.at("d01.csv"), dir_contents(dir / "a").at("d01.csv"));
}

TEST(Synth, SpecErrors) {
  auto bad = [](Json j) { return kind_of([&] { parse_synth_spec(j); }); };
  EXPECT_EQ(bad(Json{{"datasets", {{{"label", "a"}, {"mean", 0}, {"variance", -1}}}}}), ErrorKind::Config);
  EXPECT_EQ(bad(Json{{"datasets", {{{"label", "a"}, {"mean", 0}, {"variance", 1}, {"kind", "grid"}}}}}),
            ErrorKind::Config);
  EXPECT_EQ(bad(Json{{"datasets", {{{"label", "a"}}}}}), ErrorKind::Config);
  EXPECT_EQ(bad(Json{{"step_hours", 0}, {"datasets", Json::array()}}), ErrorKind::Config);
}

TEST(Grid, BoxAverageMatchesSeries) {
  const Json box = {{"lat_min", 59.32}, {"lat_max", 61.5}, {"lon_min", 5.0}, {"lon_max", 7.9}};
  const fs::path dir = fresh_dir("grid");
  Json spec{{"seed", 5}, {"box", box}, {"datasets", {{{"label", "g"}, {"mean", 4.5}, {"variance", 8}}}}};
  run_synth(parse_synth_spec(spec), dir / "ts");
  spec["datasets"][0]["kind"] = "grid";
  run_synth(parse_synth_spec(spec), dir / "grid");

  Json cfg{{"prior", {{"mu0", 7.48}, {"kappa0", 1}, {"nu0", 1}, {"sigma0_sq", 1.6129}}},
           {"num_samples", 100},
           {"datasets", {{{"label", "g"}, {"path", "g.csv"}}}}};
  const FitResult a = run_fit(parse_run_config(cfg, dir / "ts"));
  cfg["box"] = box;
  cfg["datasets"][0]["kind"] = "grid";
  const FitResult b = run_fit(parse_run_config(cfg, dir / "grid"));
  const SampleStats& sa = a.datasets[0].info.stats;
  const SampleStats& sb = b.datasets[0].info.stats;
  EXPECT_EQ(sa.n, sb.n);
  EXPECT_NEAR(*sa.y_bar, *sb.y_bar, 1e-12);
  EXPECT_NEAR(*sa.s_sq, *sb.s_sq, 1e-10);
}

TEST(Grid, PolarAndFullCircleBoxesExcludeDecoys) {
  const fs::path dir = fresh_dir("polar");
  const Json box = {{"lat_min", -90}, {"lat_max", 90}, {"lon_min", -180}, {"lon_max", 180}};
  const SynthSpec spec = parse_synth_spec(
      Json{{"box", box}, {"datasets", {{{"label", "p"}, {"mean", 1}, {"variance", 0}, {"steps", 3}, {"kind", "grid"}}}}});
  run_synth(spec, dir);
  const TimeSeries avg = box_average(read_grid_csv(dir / "p.csv"), *spec.box, "p");
  EXPECT_EQ(avg.values, std::vector<double>(3, 1.0));
}
