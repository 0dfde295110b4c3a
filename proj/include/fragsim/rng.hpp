#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace fragsim {

/// SplitMix64 step; used to expand seeds and to derive independent streams.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** stream. Streams for replicas are derived from
/// (seed, stream index) so results never depend on execution order.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) { reseed(seed); }

  /// Independent stream number `index` under a master seed.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t mix = seed;
    std::uint64_t a = splitmix64(mix);
    std::uint64_t idx = index ^ 0xD1B54A32D192ED03ULL;
    std::uint64_t b = splitmix64(idx);
    return Rng(a ^ (b * 0x9E3779B97F4A7C15ULL) ^ (b >> 29));
  }

  /// A child stream; advances this generator by one draw.
  Rng split() { return Rng(next() ^ 0x5851F42D4C957F2DULL); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open0() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  /// Exponential with the given rate (> 0).
  double exponential(double rate) { return -std::log(uniform_open0()) / rate; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  void reseed(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  std::uint64_t s_[4]{};
};

}  // namespace fragsim
