#include "postbench/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "postbench/error.hpp"
#include "postbench/kernels.hpp"

namespace postbench {

namespace {

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) fail(ErrorKind::InvalidArgument, "probability must lie in (0, 1)");
}

std::vector<std::string> rank_by(const std::vector<OverlapResult>& results,
                                 double OverlapResult::*field) {
  std::vector<const OverlapResult*> order;
  for (const auto& r : results) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [field](const OverlapResult* a, const OverlapResult* b) {
    if (a->*field != b->*field) return a->*field > b->*field;
    return a->other < b->other;
  });
  std::vector<std::string> labels;
  for (const auto* r : order) labels.push_back(r->other);
  return labels;
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(ErrorKind::InvalidArgument, "quantile of an empty sample");
  require_probability(p);
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> samples, double p) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, p);
}

Interval posterior_bound(std::span<const double> samples, double level) {
  require_probability(level);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double tail = (1.0 - level) / 2.0;
  return make_interval(quantile_sorted(sorted, tail), quantile_sorted(sorted, 1.0 - tail), level);
}

double interval_overlap(const Interval& a, const Interval& b) {
  return std::max(0.0, std::min(a.hi, b.hi) - std::max(a.lo, b.lo));
}

bool contains(const Interval& a, double x) { return a.lo <= x && x <= a.hi; }

double sample_mean(std::span<const double> samples) {
  if (samples.empty()) fail(ErrorKind::InvalidArgument, "mean of an empty sample");
  const double shift = samples[0];
  return shift + kernels::centered_sums(samples, shift, 0.0).sum / static_cast<double>(samples.size());
}

DensitySummary density_summary(std::span<const double> samples, std::size_t bins) {
  if (samples.empty()) fail(ErrorKind::InvalidArgument, "density of an empty sample");
  if (bins == 0) fail(ErrorKind::InvalidArgument, "bin count must be >= 1");
  double lo, hi;
  kernels::min_max(samples, lo, hi);
  DensitySummary out;
  if (lo == hi) {
    out.width = 1.0;
    out.bins.push_back({lo, 1.0});
    return out;
  }
  out.width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double x : samples) {
    auto k = static_cast<std::size_t>((x - lo) / out.width);
    ++counts[std::min(k, bins - 1)];
  }
  const double scale = 1.0 / (static_cast<double>(samples.size()) * out.width);
  out.bins.reserve(bins);
  for (std::size_t k = 0; k < bins; ++k)
    out.bins.push_back({lo + (static_cast<double>(k) + 0.5) * out.width, static_cast<double>(counts[k]) * scale});
  return out;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) fail(ErrorKind::InvalidArgument, "KS statistic of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

PosteriorSummary summarize(const JointSamples& samples, std::string label, double level) {
  PosteriorSummary s;
  s.label = std::move(label);
  s.theta_mean = sample_mean(samples.theta);
  s.theta_bound = posterior_bound(samples.theta, level);
  s.sigma_sq_mean = sample_mean(samples.sigma_sq);
  s.sigma_sq_bound = posterior_bound(samples.sigma_sq, level);
  s.num_samples = samples.size();
  s.seed = samples.seed;
  return s;
}

std::vector<OverlapResult> compare(const PosteriorSummary& reference,
                                   const std::vector<PosteriorSummary>& others) {
  std::vector<OverlapResult> out;
  for (const PosteriorSummary& o : others) {
    if (o.theta_bound.level != reference.theta_bound.level ||
        o.sigma_sq_bound.level != reference.sigma_sq_bound.level)
      fail(ErrorKind::InvalidArgument,
           "summary '" + o.label + "' was built at a different credibility level than '" + reference.label + "'");
    OverlapResult r;
    r.reference = reference.label;
    r.other = o.label;
    r.theta_overlap_len = interval_overlap(reference.theta_bound, o.theta_bound);
    r.theta_contains_ref_mean = contains(o.theta_bound, reference.theta_mean);
    r.sigma_overlap_len = interval_overlap(reference.sigma_sq_bound, o.sigma_sq_bound);
    r.sigma_contains_ref_mean = contains(o.sigma_sq_bound, reference.sigma_sq_mean);
    if (reference.theta_bound.length() > 0.0)
      r.theta_overlap_norm = r.theta_overlap_len / reference.theta_bound.length();
    if (reference.sigma_sq_bound.length() > 0.0)
      r.sigma_overlap_norm = r.sigma_overlap_len / reference.sigma_sq_bound.length();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> rank_by_theta_overlap(const std::vector<OverlapResult>& results) {
  return rank_by(results, &OverlapResult::theta_overlap_len);
}

std::vector<std::string> rank_by_sigma_overlap(const std::vector<OverlapResult>& results) {
  return rank_by(results, &OverlapResult::sigma_overlap_len);
}

}  // namespace postbench
