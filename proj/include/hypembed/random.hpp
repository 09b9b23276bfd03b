#pragma once

#include <cstdint>

namespace hypembed {

/// Stateless counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so draws can be produced in any order or in
/// parallel and still be bit-reproducible.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ mix(stream + kGolden))) {}

  /// A derived generator with an independent key.
  constexpr CounterRng split(std::uint64_t stream) const noexcept {
    CounterRng child(0);
    child.key_ = mix(key_ ^ mix(stream + 2 * kGolden));
    return child;
  }

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ + counter * kGolden);
  }

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const noexcept;

  /// Standard normal via Box-Muller; consumes counters 2c and 2c+1.
  double normal(std::uint64_t counter) const noexcept;

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  // SplitMix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace hypembed
