#pragma once

#include <cstdint>
#include <optional>

namespace postbench {

// Weakly informative defaults for the prior pseudo-counts; the mean and
// variance of the prior are always supplied by the caller.
inline constexpr double kDefaultKappa0 = 1.0;
inline constexpr double kDefaultNu0 = 1.0;

/// Normal-inverse-gamma prior on (theta, sigma^2).
struct Prior {
  double mu0 = 0.0;
  double kappa0 = kDefaultKappa0;
  double nu0 = kDefaultNu0;
  double sigma0_sq = 1.0;

  bool operator==(const Prior&) const = default;
};

/// Sufficient statistics of a sample. y_bar is required for n >= 1 and
/// s_sq (n-1 denominator) for n >= 2; s_sq must be absent when n == 1.
struct SampleStats {
  std::int64_t n = 0;
  std::optional<double> y_bar;
  std::optional<double> s_sq;

  bool operator==(const SampleStats&) const = default;
};

struct Posterior {
  double mu_n = 0.0;
  double kappa_n = 1.0;
  double nu_n = 1.0;
  double sigma_n_sq = 1.0;

  bool operator==(const Posterior&) const = default;
};

/// Closed interval [lo, hi] carrying the credibility level it was built at.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;

  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Normal parameters in (mean, variance) form.
struct NormalParams {
  double mean;
  double variance;
};

/// Gamma parameters in shape-rate form: density proportional to
/// x^(shape-1) exp(-rate x). Never shape-scale.
struct GammaShapeRate {
  double shape;
  double rate;
};

struct PosteriorExpectations {
  double e_theta;
  // Undefined (empty) when nu_n <= 2.
  std::optional<double> e_sigma_sq;
};

void validate(const Prior& prior);
void validate(const SampleStats& stats);
void validate(const Posterior& post);
Interval make_interval(double lo, double hi, double level);

/// Conjugate update of the prior with the sample's sufficient statistics.
/// With n == 0 the prior is returned unchanged, bit for bit.
Posterior posterior_update(const Prior& prior, const SampleStats& stats);

/// Parameters of theta | sigma^2, data: normal(mu_n, sigma^2 / kappa_n).
NormalParams theta_conditional_params(const Posterior& post, double sigma_sq);

/// Parameters of 1/sigma^2 | data: gamma(nu_n/2, nu_n sigma_n^2/2).
GammaShapeRate precision_marginal_params(const Posterior& post);

/// Analytic p-quantile of the Student-t marginal of theta:
/// mu_n + sqrt(sigma_n^2/kappa_n) * t_p(nu_n).
double theta_marginal_quantile(const Posterior& post, double p);

/// CDF of the same Student-t marginal.
double theta_marginal_cdf(const Posterior& post, double theta);

/// CDF of the gamma marginal of the precision.
double precision_marginal_cdf(const Posterior& post, double precision);

PosteriorExpectations posterior_expectations(const Posterior& post);

}  // namespace postbench
