#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "postbench/posterior.hpp"

namespace postbench {

inline constexpr std::size_t kDefaultChunkSize = 4096;
inline constexpr std::size_t kDefaultNumSamples = 10000;

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::size_t num_samples = kDefaultNumSamples;
  // Work granularity only: draw s always comes from Philox stream (seed, s),
  // so neither chunk size nor worker count changes the output.
  std::size_t chunk_size = kDefaultChunkSize;
  unsigned workers = 1;
};

/// Paired draws (theta_s, sigma_sq_s) from the joint posterior.
struct JointSamples {
  std::vector<double> theta;
  std::vector<double> sigma_sq;
  std::uint64_t seed = 0;
  Posterior posterior;

  std::size_t size() const { return theta.size(); }
};

/// Direct Monte Carlo: sigma_sq_s ~ inv-gamma(nu_n/2, nu_n sigma_n^2/2), then
/// theta_s ~ normal(mu_n, sigma_sq_s / kappa_n), independently for each s.
JointSamples sample_joint(const Posterior& post, const SamplerConfig& config);

}  // namespace postbench
