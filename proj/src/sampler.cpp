#include "postbench/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <span>
#include <thread>

#include "postbench/distributions.hpp"
#include "postbench/error.hpp"
#include "postbench/kernels.hpp"

namespace postbench {

namespace {

// Sample s draws from Philox stream (seed, s), so the chunk layout only
// decides who computes a draw, never what it is.
void fill_range(const Posterior& post, const GammaShapeRate& g, std::uint64_t seed,
                std::size_t begin, std::size_t end, JointSamples& out) {
  const std::size_t count = end - begin;
  std::vector<double> precision(count), z(count);
  for (std::size_t s = begin; s < end; ++s) {
    PhiloxStream rng(seed, s);
    precision[s - begin] = sample_gamma(g.shape, g.rate, rng);
    z[s - begin] = standard_normal(rng);
  }
  kernels::joint_transform(precision, z, post.mu_n, post.kappa_n,
                           std::span<double>(out.sigma_sq.data() + begin, count),
                           std::span<double>(out.theta.data() + begin, count));
}

}  // namespace

JointSamples sample_joint(const Posterior& post, const SamplerConfig& config) {
  validate(post);
  if (config.num_samples == 0) fail(ErrorKind::InvalidArgument, "number of samples must be >= 1");
  if (config.chunk_size == 0) fail(ErrorKind::InvalidArgument, "chunk size must be >= 1");

  const GammaShapeRate g = precision_marginal_params(post);
  JointSamples out;
  out.seed = config.seed;
  out.posterior = post;
  out.theta.resize(config.num_samples);
  out.sigma_sq.resize(config.num_samples);

  const std::size_t n = config.num_samples;
  const std::size_t chunks = (n + config.chunk_size - 1) / config.chunk_size;
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::size_t>(config.workers == 0 ? 1 : config.workers, 1, chunks));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      const std::size_t begin = c * config.chunk_size;
      fill_range(post, g, config.seed, begin, std::min(n, begin + config.chunk_size), out);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

}  // namespace postbench
