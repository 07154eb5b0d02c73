#pragma once

#include <cstdint>

namespace fairdisc {

// Deterministic counter-mode generator built on the SplitMix64 finalizer
// (Stafford mix13, as in Steele/Lea/Vigna's SplitMix). Pure 64-bit integer
// arithmetic, so streams are reproducible across platforms and independent
// of evaluation order.
//
// Stream splitting: substream `s` of a seed starts from
//   base(s) = mix13(seed + (s+1) * GAMMA2)
// and its i-th value is
//   at(s, i) = mix13(base(s) + (i+1) * GAMMA).
// Every generator in this library documents its stream layout; the usual
// convention is one substream per set / agent / restart / trial index,
// with the counter running over elements or items.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t at(std::uint64_t stream, std::uint64_t counter) const {
    const std::uint64_t base = mix13(seed_ + (stream + 1) * kGamma2);
    return mix13(base + (counter + 1) * kGamma);
  }

  // Fair coin: the top bit of the mixed word.
  bool coin(std::uint64_t stream, std::uint64_t counter) const {
    return (at(stream, counter) >> 63) != 0;
  }

  // Uniform draw from [0, bound) via the 128-bit multiply-shift reduction.
  // Bias is below bound / 2^64, which is negligible for the small bounds
  // used here and keeps the draw a single deterministic word.
  std::uint64_t below(std::uint64_t stream, std::uint64_t counter,
                      std::uint64_t bound) const {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(at(stream, counter)) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  // Uniform double in [0, 1) with 53 random mantissa bits.
  double unit(std::uint64_t stream, std::uint64_t counter) const {
    return static_cast<double>(at(stream, counter) >> 11) * 0x1.0p-53;
  }

  static std::uint64_t mix13(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kGamma2 = 0xC2B2AE3D27D4EB4FULL;

  std::uint64_t seed_;
};

}  // namespace fairdisc
