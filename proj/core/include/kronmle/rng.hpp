#ifndef KRONMLE_RNG_HPP
#define KRONMLE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace kronmle {

/// splitmix64 output function.  Used both to expand seeds into generator
/// state and to derive independent per-trial seeds.
inline std::uint64_t splitmix64_mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// xoshiro256++ with a splitmix64-seeded state and a Box-Muller normal
/// transform.  The whole stream is fixed by this implementation, so results
/// are bit-reproducible across platforms; the C++ standard library's
/// distributions are not, which is why none are used here.
class Xoshiro256pp {
public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in the open interval (0, 1).
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the Box-Muller transform; draws two uniforms per
  /// pair and caches the second variate.
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double cached_ = 0.0;
  bool have_cached_ = false;
};

/// Independent stream for one trial of a simulation: the base seed is
/// combined with a scrambled trial index so streams do not overlap.
inline Xoshiro256pp trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return Xoshiro256pp(seed ^ splitmix64_mix(trial));
}

}  // namespace kronmle

#endif
