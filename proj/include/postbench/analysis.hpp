#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "postbench/posterior.hpp"
#include "postbench/sampler.hpp"

namespace postbench {

// Name recorded in every report that carries quantiles.
inline constexpr const char* kQuantileConvention = "type7";

/// Type-7 quantile: linear interpolation between order statistics at
/// 0-based position p * (n - 1) of the sorted sample.
double quantile(std::span<const double> samples, double p);
/// Same, for input already sorted ascending.
double quantile_sorted(std::span<const double> sorted, double p);

/// Central quantile interval ((1 - level) / 2, 1 - (1 - level) / 2).
Interval posterior_bound(std::span<const double> samples, double level);

double interval_overlap(const Interval& a, const Interval& b);
bool contains(const Interval& a, double x);

double sample_mean(std::span<const double> samples);

struct DensityBin {
  double center;
  double density;
};

struct DensitySummary {
  double width = 0.0;
  std::vector<DensityBin> bins;
};

/// Equal-width histogram over [min, max] scaled so sum(density * width) = 1.
/// A constant sample gives a single bin of width 1 centred on the value.
DensitySummary density_summary(std::span<const double> samples, std::size_t bins);

/// Kolmogorov-Smirnov distance between the empirical CDF and `cdf`.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

struct PosteriorSummary {
  std::string label;
  double theta_mean = 0.0;
  Interval theta_bound;
  double sigma_sq_mean = 0.0;
  Interval sigma_sq_bound;
  std::size_t num_samples = 0;
  std::uint64_t seed = 0;
};

PosteriorSummary summarize(const JointSamples& samples, std::string label, double level);

struct OverlapResult {
  std::string reference;
  std::string other;
  double theta_overlap_len = 0.0;
  bool theta_contains_ref_mean = false;
  double sigma_overlap_len = 0.0;
  bool sigma_contains_ref_mean = false;
  // Overlap divided by the reference interval length; empty when that
  // length is zero.
  std::optional<double> theta_overlap_norm;
  std::optional<double> sigma_overlap_norm;
};

/// Overlap of each summary's bounds with the reference bounds, and whether
/// the reference posterior means fall inside each summary's bounds.
std::vector<OverlapResult> compare(const PosteriorSummary& reference,
                                   const std::vector<PosteriorSummary>& others);

/// Labels of `results` ordered by decreasing theta overlap (ties by label).
std::vector<std::string> rank_by_theta_overlap(const std::vector<OverlapResult>& results);
std::vector<std::string> rank_by_sigma_overlap(const std::vector<OverlapResult>& results);

}  // namespace postbench
