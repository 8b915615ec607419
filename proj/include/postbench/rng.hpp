#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace postbench {

/// Philox2x64-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3", SC'11). Maps a 128-bit counter and 64-bit key to
/// 128 pseudo-random bits.
std::array<std::uint64_t, 2> philox2x64(std::array<std::uint64_t, 2> counter, std::uint64_t key);

/// Counter-based stream: key = seed, counter = (position, stream id).
/// Two streams with different ids never overlap, and the state is just the
/// position, so a substream can be reconstructed from (seed, id) anywhere.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;

  PhiloxStream(std::uint64_t seed, std::uint64_t stream_id) : key_(seed), stream_(stream_id) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    if (have_ == 0) {
      block_ = philox2x64({position_++, stream_}, key_);
      have_ = 2;
    }
    return block_[2 - have_--];
  }

  /// Uniform double on the open interval (0, 1) with 53 random bits.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unbiased integer in [0, bound) by Lemire's multiply-and-reject.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> block_{};
  int have_ = 0;
};

/// Seed for one stochastic step of one dataset, by hashing (master seed,
/// label, step name). Adding or renaming a dataset never shifts the seeds
/// of the others.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::string_view step);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace postbench
