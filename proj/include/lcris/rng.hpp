#pragma once

#include <cstdint>
#include <cmath>

#include "lcris/common.hpp"

namespace lcris {

/// Counter-based 64-bit generator (SplitMix64). The state advances by a fixed
/// increment and each output is a bijective hash of the state, so streams can
/// be forked deterministically without consuming draws from the parent.
///
/// Stream derivation used throughout the project:
///   child_state = mix(mix(state + GAMMA * (tag + 1)) + GAMMA * (index + 1))
/// which makes every (seed, tag, index) combination an independent stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Independent child stream; does not advance this generator.
  SplitMix64 fork(std::uint64_t tag, std::uint64_t index = 0) const {
    std::uint64_t s = mix(state_ + kGamma * (tag + 1));
    s = mix(s + kGamma * (index + 1));
    return SplitMix64(s);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(kTwoPi * u2);
    have_cached_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  /// Circularly-symmetric complex normal, unit variance: E|z|^2 = 1.
  cplx cnormal() {
    double re = normal();
    double im = normal();
    return cplx(re * 0.7071067811865476, im * 0.7071067811865476);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace lcris
