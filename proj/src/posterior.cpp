#include "postbench/posterior.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "postbench/error.hpp"

namespace postbench {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void validate(const Prior& prior) {
  if (!std::isfinite(prior.mu0))
    fail(ErrorKind::InvalidPrior, "prior mu0 must be finite");
  if (!positive_finite(prior.kappa0))
    fail(ErrorKind::InvalidPrior, "prior kappa0 must be positive, got " + std::to_string(prior.kappa0));
  if (!positive_finite(prior.nu0))
    fail(ErrorKind::InvalidPrior, "prior nu0 must be positive, got " + std::to_string(prior.nu0));
  if (!positive_finite(prior.sigma0_sq))
    fail(ErrorKind::InvalidPrior,
         "prior sigma0_sq must be positive, got " + std::to_string(prior.sigma0_sq));
}

void validate(const SampleStats& stats) {
  if (stats.n < 0)
    fail(ErrorKind::InvalidStats, "sample size must be non-negative, got " + std::to_string(stats.n));
  if (stats.n == 0) return;
  if (!stats.y_bar || !std::isfinite(*stats.y_bar))
    fail(ErrorKind::InvalidStats, "sample mean is required when n >= 1");
  if (stats.n == 1) {
    if (stats.s_sq)
      fail(ErrorKind::InvalidStats, "sample variance is undefined for n == 1 and must be absent");
    return;
  }
  if (!stats.s_sq)
    fail(ErrorKind::InvalidStats, "sample variance is required when n >= 2");
  if (!std::isfinite(*stats.s_sq) || *stats.s_sq < 0.0)
    fail(ErrorKind::InvalidStats, "sample variance must be non-negative and finite");
}

void validate(const Posterior& post) {
  if (!std::isfinite(post.mu_n) || !positive_finite(post.kappa_n) || !positive_finite(post.nu_n) ||
      !positive_finite(post.sigma_n_sq))
    fail(ErrorKind::InvalidArgument, "invalid posterior parameters");
}

Interval make_interval(double lo, double hi, double level) {
  if (!(lo <= hi))
    fail(ErrorKind::InvalidArgument, "interval requires lo <= hi");
  if (!(level > 0.0 && level < 1.0))
    fail(ErrorKind::InvalidArgument, "credibility level must lie in (0, 1)");
  return Interval{lo, hi, level};
}

Posterior posterior_update(const Prior& prior, const SampleStats& stats) {
  validate(prior);
  validate(stats);
  if (stats.n == 0)
    return Posterior{prior.mu0, prior.kappa0, prior.nu0, prior.sigma0_sq};

  const double n = static_cast<double>(stats.n);
  const double y_bar = *stats.y_bar;
  const double ss = stats.n >= 2 ? (n - 1.0) * *stats.s_sq : 0.0;

  Posterior post;
  post.kappa_n = prior.kappa0 + n;
  post.nu_n = prior.nu0 + n;
  post.mu_n = (prior.kappa0 * prior.mu0 + n * y_bar) / post.kappa_n;
  const double dev = y_bar - prior.mu0;
  const double shrink = (prior.kappa0 * n / post.kappa_n) * dev * dev;
  post.sigma_n_sq = (prior.nu0 * prior.sigma0_sq + ss + shrink) / post.nu_n;
  return post;
}

NormalParams theta_conditional_params(const Posterior& post, double sigma_sq) {
  validate(post);
  if (!positive_finite(sigma_sq))
    fail(ErrorKind::InvalidArgument, "sigma_sq must be positive");
  return {post.mu_n, sigma_sq / post.kappa_n};
}

GammaShapeRate precision_marginal_params(const Posterior& post) {
  validate(post);
  return {post.nu_n / 2.0, post.nu_n * post.sigma_n_sq / 2.0};
}

double theta_marginal_quantile(const Posterior& post, double p) {
  validate(post);
  if (!(p > 0.0 && p < 1.0))
    fail(ErrorKind::InvalidArgument, "quantile probability must lie in (0, 1)");
  if (p == 0.5) return post.mu_n;
  const boost::math::students_t dist(post.nu_n);
  return post.mu_n + std::sqrt(post.sigma_n_sq / post.kappa_n) * boost::math::quantile(dist, p);
}

double theta_marginal_cdf(const Posterior& post, double theta) {
  validate(post);
  const boost::math::students_t dist(post.nu_n);
  const double t = (theta - post.mu_n) / std::sqrt(post.sigma_n_sq / post.kappa_n);
  return boost::math::cdf(dist, t);
}

double precision_marginal_cdf(const Posterior& post, double precision) {
  if (precision <= 0.0) return 0.0;
  const GammaShapeRate g = precision_marginal_params(post);
  const boost::math::gamma_distribution<double> dist(g.shape, 1.0 / g.rate);
  return boost::math::cdf(dist, precision);
}

PosteriorExpectations posterior_expectations(const Posterior& post) {
  validate(post);
  PosteriorExpectations e{post.mu_n, std::nullopt};
  if (post.nu_n > 2.0) e.e_sigma_sq = post.nu_n * post.sigma_n_sq / (post.nu_n - 2.0);
  return e;
}

}  // namespace postbench
