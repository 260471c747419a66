#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace fedbo {

// Counter-style deterministic RNG. A stream is defined entirely by its key,
// so forks taken from the same parent are independent of how many draws the
// parent has made. All distributions are generated from raw 64-bit words
// (no std::uniform_*_distribution), which keeps byte-identical replay
// independent of the standard library implementation.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(mix(seed ^ kStreamSalt)), state_(key_) {}

  RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> subkeys)
      : RngStream(seed) {
    for (std::uint64_t k : subkeys) {
      key_ = mix(key_ ^ mix(k + kForkSalt));
    }
    state_ = key_;
  }

  // Child stream derived from the construction-time key, not the draw position.
  [[nodiscard]] RngStream fork(std::uint64_t k) const {
    RngStream child(0);
    child.key_ = mix(key_ ^ mix(k + kForkSalt));
    child.state_ = child.key_;
    return child;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform on (lo, hi]: never returns lo exactly.
  double uniform_open_low(double lo, double hi) {
    return hi - (hi - lo) * uniform();
  }

  // Uniform integer on [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // Standard normal via Box-Muller; consumes two words per draw.
  double normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr std::uint64_t kStreamSalt = 0x5851f42d4c957f2dULL;
  static constexpr std::uint64_t kForkSalt = 0xda3e39cb94b95bdbULL;

  // splitmix64 finaliser.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t state_;
};

}  // namespace fedbo
