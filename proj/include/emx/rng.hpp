#pragma once

#include <cstdint>
#include <random>

namespace emx {

/// Stafford's SplitMix64 finaliser. Used to derive independent seed streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for child stream `stream` of `master`. Trials, towers and samplers
/// all derive their generators through this one function.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

/// mt19937_64's output sequence is fixed by the standard, so raw draws are
/// reproducible across platforms. std:: distributions are not; use
/// uniform_below instead.
using Rng = std::mt19937_64;

/// Unbiased integer in [0, bound) by rejection. bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
  for (;;) {
    std::uint64_t r = rng();
    if (r >= limit) return r % bound;
  }
}

}  // namespace emx
