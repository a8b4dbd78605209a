#pragma once

#include <cstdint>

namespace randshift {

/// SplitMix64 (Steele, Lea & Flood): a counter-based generator whose k-th
/// output is mix(seed + k * gamma). Outputs depend only on integer arithmetic,
/// so streams are bit-reproducible on every platform.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Independent child stream; used to hand a point its own bit source.
  SplitMix64 split() { return SplitMix64(mix(next() ^ 0x5851f42d4c957f2dULL)); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Per-sample stream derived from (master_seed, sample_index) only, so results
/// do not depend on how samples are distributed across workers.
inline SplitMix64 sample_stream(std::uint64_t master_seed, std::uint64_t sample_index) {
  const std::uint64_t key = SplitMix64::mix(master_seed ^ 0x243f6a8885a308d3ULL);
  return SplitMix64(SplitMix64::mix(key + (sample_index + 1) * 0xd1b54a32d192ed03ULL));
}

}  // namespace randshift
