#include "postbench/rng.hpp"

namespace postbench {

namespace {

constexpr std::uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kPhiloxW = 0x9E3779B97F4A7C15ULL;

inline std::array<std::uint64_t, 2> philox_round(std::array<std::uint64_t, 2> ctr, std::uint64_t key) {
  const unsigned __int128 product = static_cast<unsigned __int128>(kPhiloxM) * ctr[0];
  const auto hi = static_cast<std::uint64_t>(product >> 64);
  const auto lo = static_cast<std::uint64_t>(product);
  return {hi ^ key ^ ctr[1], lo};
}

}  // namespace

std::array<std::uint64_t, 2> philox2x64(std::array<std::uint64_t, 2> counter, std::uint64_t key) {
  counter = philox_round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key += kPhiloxW;
    counter = philox_round(counter, key);
  }
  return counter;
}

std::uint64_t PhiloxStream::next_below(std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::string_view step) {
  // FNV-1a over label, a separator byte, then the step name.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001B3ULL;
  };
  for (char c : label) mix(static_cast<unsigned char>(c));
  mix(0xFF);
  for (char c : step) mix(static_cast<unsigned char>(c));
  return splitmix64(splitmix64(master) ^ h);
}

}  // namespace postbench
