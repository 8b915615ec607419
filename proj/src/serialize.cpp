#include "postbench/serialize.hpp"

#include <charconv>

#include <fmt/format.h>

#include "postbench/error.hpp"

namespace postbench {

void to_json(Json& j, const Prior& p) {
  j = Json{{"mu0", p.mu0}, {"kappa0", p.kappa0}, {"nu0", p.nu0}, {"sigma0_sq", p.sigma0_sq}};
}

void from_json(const Json& j, Prior& p) {
  p.mu0 = j.at("mu0").get<double>();
  p.kappa0 = j.value("kappa0", kDefaultKappa0);
  p.nu0 = j.value("nu0", kDefaultNu0);
  p.sigma0_sq = j.at("sigma0_sq").get<double>();
}

void to_json(Json& j, const SampleStats& s) {
  j = Json{{"n", s.n}};
  j["y_bar"] = s.y_bar ? Json(*s.y_bar) : Json(nullptr);
  j["s_sq"] = s.s_sq ? Json(*s.s_sq) : Json(nullptr);
}

void from_json(const Json& j, SampleStats& s) {
  s.n = j.at("n").get<std::int64_t>();
  s.y_bar = j.contains("y_bar") && !j["y_bar"].is_null() ? std::optional(j["y_bar"].get<double>()) : std::nullopt;
  s.s_sq = j.contains("s_sq") && !j["s_sq"].is_null() ? std::optional(j["s_sq"].get<double>()) : std::nullopt;
}

void to_json(Json& j, const Posterior& p) {
  j = Json{{"mu_n", p.mu_n}, {"kappa_n", p.kappa_n}, {"nu_n", p.nu_n}, {"sigma_n_sq", p.sigma_n_sq}};
}

void from_json(const Json& j, Posterior& p) {
  p.mu_n = j.at("mu_n").get<double>();
  p.kappa_n = j.at("kappa_n").get<double>();
  p.nu_n = j.at("nu_n").get<double>();
  p.sigma_n_sq = j.at("sigma_n_sq").get<double>();
}

void to_json(Json& j, const Interval& i) { j = Json{{"lo", i.lo}, {"hi", i.hi}, {"level", i.level}}; }

void from_json(const Json& j, Interval& i) {
  i = make_interval(j.at("lo").get<double>(), j.at("hi").get<double>(), j.at("level").get<double>());
}

void to_json(Json& j, const PosteriorSummary& s) {
  j = Json{{"label", s.label},
           {"theta_mean", s.theta_mean},
           {"theta_bound", s.theta_bound},
           {"sigma_sq_mean", s.sigma_sq_mean},
           {"sigma_sq_bound", s.sigma_sq_bound},
           {"S", s.num_samples},
           {"seed", s.seed}};
}

void from_json(const Json& j, PosteriorSummary& s) {
  s.label = j.at("label").get<std::string>();
  s.theta_mean = j.at("theta_mean").get<double>();
  s.theta_bound = j.at("theta_bound").get<Interval>();
  s.sigma_sq_mean = j.at("sigma_sq_mean").get<double>();
  s.sigma_sq_bound = j.at("sigma_sq_bound").get<Interval>();
  s.num_samples = j.value("S", std::size_t{0});
  s.seed = j.value("seed", std::uint64_t{0});
}

void to_json(Json& j, const OverlapResult& r) {
  j = Json{{"reference", r.reference},
           {"other", r.other},
           {"theta_overlap_len", r.theta_overlap_len},
           {"theta_overlap_norm", r.theta_overlap_norm ? Json(*r.theta_overlap_norm) : Json(nullptr)},
           {"theta_contains_ref_mean", r.theta_contains_ref_mean},
           {"sigma_sq_overlap_len", r.sigma_overlap_len},
           {"sigma_sq_overlap_norm", r.sigma_overlap_norm ? Json(*r.sigma_overlap_norm) : Json(nullptr)},
           {"sigma_sq_contains_ref_mean", r.sigma_contains_ref_mean}};
}

std::string format_full(double x) { return fmt::format("{}", x); }

std::string joint_samples_csv(const JointSamples& samples) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "index,theta,sigma_sq\n");
  for (std::size_t i = 0; i < samples.size(); ++i)
    fmt::format_to(std::back_inserter(buf), "{},{},{}\n", i, samples.theta[i], samples.sigma_sq[i]);
  return fmt::to_string(buf);
}

Json joint_samples_envelope(const JointSamples& samples) {
  return Json{{"format", "index,theta,sigma_sq"},
              {"seed", samples.seed},
              {"S", samples.size()},
              {"posterior", samples.posterior}};
}

JointSamples parse_joint_samples(std::string_view csv, const Json& envelope) {
  JointSamples out;
  out.seed = envelope.at("seed").get<std::uint64_t>();
  out.posterior = envelope.at("posterior").get<Posterior>();
  const auto expected = envelope.at("S").get<std::size_t>();

  std::size_t line_no = 0;
  bool header = true;
  while (!csv.empty()) {
    const std::size_t nl = csv.find('\n');
    std::string_view line = csv.substr(0, nl);
    csv.remove_prefix(nl == csv.npos ? csv.size() : nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      if (line != "index,theta,sigma_sq")
        fail(ErrorKind::Ingest, "joint samples: unexpected header '" + std::string(line) + "'");
      header = false;
      continue;
    }
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == line.npos ? line.npos : line.find(',', c1 + 1);
    if (c2 == line.npos) fail(ErrorKind::Ingest, "joint samples: malformed row at line " + std::to_string(line_no));
    double theta, sigma_sq;
    const auto a = line.substr(c1 + 1, c2 - c1 - 1), b = line.substr(c2 + 1);
    if (std::from_chars(a.data(), a.data() + a.size(), theta).ec != std::errc() ||
        std::from_chars(b.data(), b.data() + b.size(), sigma_sq).ec != std::errc() || !(sigma_sq > 0.0))
      fail(ErrorKind::Ingest, "joint samples: bad value at line " + std::to_string(line_no));
    out.theta.push_back(theta);
    out.sigma_sq.push_back(sigma_sq);
  }
  if (out.size() != expected)
    fail(ErrorKind::Ingest, "joint samples: envelope says S=" + std::to_string(expected) + " but CSV has " +
                                std::to_string(out.size()) + " rows");
  return out;
}

}  // namespace postbench
