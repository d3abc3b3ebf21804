#pragma once

// Counter-derived random streams: replication r of a run with master seed s
// draws from its own xoshiro256++ generator seeded from a 64-bit mix of
// (s, r). A replication's draws therefore never depend on which worker runs
// it or on what other replications did.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

namespace optstop {

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of replication `index`. Distinct indices give distinct seeds for a
/// fixed master seed, since both mixing stages are bijective.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return mix64(master_seed ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      word = mix64(x);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

/// Uniform on the open interval (0, 1), on a 2^-53 grid offset by half a step.
template <class Rng>
inline double uniform_open01(Rng& rng) noexcept {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Two independent standard normals from two uniforms.
template <class Rng>
inline std::pair<double, double> box_muller(Rng& rng) noexcept {
  const double u1 = uniform_open01(rng);
  const double u2 = uniform_open01(rng);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace optstop
