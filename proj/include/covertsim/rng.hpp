#pragma once

#include <cstdint>
#include <random>

namespace covertsim {

/// SplitMix64 finalizer (Steele, Lea, Flood).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of substream `index` under master seed `seed`.
///
/// Two rounds of SplitMix64: the index is mixed first so consecutive
/// indices land far apart, then folded into the master seed.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index ^ 0xD1B54A32D192ED03ULL));
}

/// One independent random stream identified by (seed, substream).
class RandomStream {
 public:
  using Engine = std::mt19937_64;

  RandomStream(std::uint64_t seed, std::uint64_t substream)
      : seed_(seed), substream_(substream), engine_(substream_seed(seed, substream)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t substream() const { return substream_; }
  Engine& engine() { return engine_; }

  /// Exponential variate with the given mean.
  double exponential(double mean) {
    return mean * std::exponential_distribution<double>(1.0)(engine_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(engine_);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t substream_;
  Engine engine_;
};

}  // namespace covertsim
