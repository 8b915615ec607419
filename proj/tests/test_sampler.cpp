#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "postbench/analysis.hpp"
#include "postbench/error.hpp"
#include "postbench/sampler.hpp"

using namespace postbench;

namespace {

Posterior d01_posterior() {
  return posterior_update(fixtures::station_prior(), SampleStats{200, 4.80, 7.08});
}

bool bit_identical(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(SampleJoint, MeansMatchAnalyticPosterior) {
  const Posterior post = d01_posterior();
  const JointSamples js = sample_joint(post, SamplerConfig{42, 200000});
  ASSERT_EQ(js.size(), 200000u);
  EXPECT_NEAR(sample_mean(js.theta), 4.81333, 0.01);
  EXPECT_NEAR(sample_mean(js.sigma_sq), *posterior_expectations(post).e_sigma_sq, 0.05);
  EXPECT_NEAR(sample_mean(js.sigma_sq), 7.12352, 0.05);
  for (double s : js.sigma_sq) ASSERT_GT(s, 0.0);
  EXPECT_EQ(js.seed, 42u);
  EXPECT_EQ(js.posterior, post);
}

TEST(SampleJoint, DeterministicAcrossRunsChunksAndWorkers) {
  const Posterior post = d01_posterior();
  const JointSamples base = sample_joint(post, SamplerConfig{42, 20000, 4096, 1});
  for (std::size_t chunk : {std::size_t{1}, std::size_t{7}, std::size_t{4096}}) {
    for (unsigned workers : {1u, 4u}) {
      const JointSamples other = sample_joint(post, SamplerConfig{42, 20000, chunk, workers});
      EXPECT_TRUE(bit_identical(base.theta, other.theta)) << chunk << "/" << workers;
      EXPECT_TRUE(bit_identical(base.sigma_sq, other.sigma_sq)) << chunk << "/" << workers;
    }
  }
}

TEST(SampleJoint, DifferentSeedsDiffer) {
  const Posterior post = d01_posterior();
  const JointSamples a = sample_joint(post, SamplerConfig{1, 100});
  const JointSamples b = sample_joint(post, SamplerConfig{2, 100});
  int equal = 0;
  for (std::size_t i = 0; i < 100; ++i) equal += a.theta[i] == b.theta[i];
  EXPECT_LT(equal, 100);
}

TEST(SampleJoint, PrefixStableWhenSIncreases) {
  const Posterior post = d01_posterior();
  const JointSamples small = sample_joint(post, SamplerConfig{5, 1000});
  const JointSamples large = sample_joint(post, SamplerConfig{5, 5000});
  for (std::size_t i = 0; i < 1000; ++i) ASSERT_EQ(small.theta[i], large.theta[i]);
}

TEST(SampleJoint, RejectsBadConfig) {
  const Posterior post = d01_posterior();
  EXPECT_THROW(sample_joint(post, SamplerConfig{1, 0}), Error);
  EXPECT_THROW(sample_joint(post, SamplerConfig{1, 10, 0}), Error);
  EXPECT_THROW(sample_joint(Posterior{0, 1, 1, -1}, SamplerConfig{1, 10}), Error);
}

TEST(SampleJointLaw, ThetaMarginalIsStudentT) {
  const Posterior post = d01_posterior();
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const JointSamples js = sample_joint(post, SamplerConfig{seed, 100000});
    const double d = ks_statistic(js.theta, [&](double x) { return theta_marginal_cdf(post, x); });
    EXPECT_LT(d, 1.63 / std::sqrt(100000.0)) << "seed " << seed;
  }
}

TEST(SampleJointLaw, PrecisionMarginalIsGamma) {
  const Posterior post = posterior_update(Prior{2.0, 1, 1, 1}, SampleStats{10, 3.0, 4.0});
  for (std::uint64_t seed : {21u, 22u}) {
    const JointSamples js = sample_joint(post, SamplerConfig{seed, 100000});
    std::vector<double> precision(js.size());
    for (std::size_t i = 0; i < js.size(); ++i) precision[i] = 1.0 / js.sigma_sq[i];
    const double d = ks_statistic(precision, [&](double x) { return precision_marginal_cdf(post, x); });
    EXPECT_LT(d, 1.63 / std::sqrt(100000.0)) << "seed " << seed;
  }
}

TEST(SampleJointLaw, ThetaMeanDoesNotDependOnSigmaSq) {
  const Posterior post = d01_posterior();
  const JointSamples js = sample_joint(post, SamplerConfig{31, 100000});
  const double n = static_cast<double>(js.size());
  const double mx = sample_mean(js.sigma_sq), my = sample_mean(js.theta);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < js.size(); ++i) {
    sxx += (js.sigma_sq[i] - mx) * (js.sigma_sq[i] - mx);
    sxy += (js.sigma_sq[i] - mx) * (js.theta[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < js.size(); ++i) {
    const double r = js.theta[i] - intercept - slope * js.sigma_sq[i];
    rss += r * r;
  }
  const double s2 = rss / (n - 2);
  const double se_slope = std::sqrt(s2 / sxx);
  const double se_intercept = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  EXPECT_LT(std::fabs(slope), 3 * se_slope);
  EXPECT_LT(std::fabs(intercept - post.mu_n), 3 * se_intercept);
}
