#pragma once

#include <cstdint>

namespace roughmild {

/// Counter-based pseudo-random generator built on the SplitMix64 output
/// function.  The n-th draw is a pure function of (key, n), so substreams
/// never interleave: two generators with distinct keys produce independent
/// streams regardless of how many values each one consumes.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Substream derivation: mixes a stream index into a base seed.  Used to
  /// give each driver component (and each Monte Carlo replica) its own key.
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    return mix(mix(seed) ^ (0x9e3779b97f4a7c15ULL + mix(stream)));
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform draw in the open interval (0,1); never returns an endpoint,
  /// so it is safe inside logarithms.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the spare value is cached.
  double next_gaussian();

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace roughmild
