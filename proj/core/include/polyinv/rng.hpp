#pragma once

#include <cstdint>

namespace polyinv {

/// SplitMix64 (Steele, Lea, Flood 2014). State advances by the golden-ratio
/// increment; output is the standard 64-bit finalizer. Identical streams on
/// every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Independent stream for item `index` of a run seeded with `root`:
/// seeded with mix(root) ^ mix(index + 1) so that neither the root nor the
/// index alone determines the stream.
inline SplitMix64 split_stream(std::uint64_t root, std::uint64_t index) noexcept {
  return SplitMix64(SplitMix64::mix(root) ^
                    SplitMix64::mix(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace polyinv
