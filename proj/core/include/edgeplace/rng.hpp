#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace edgeplace {

/// Deterministic SplitMix64 stream.
///
/// Streams are keyed by a tuple (seed, iteration, particle, tag) so every
/// random draw is a pure function of its position in the run; evaluation
/// order and thread count cannot change results. Bounded draws are computed
/// here rather than with <random> distributions, whose output is not
/// specified across standard library implementations.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  /// Independent stream for a keyed position in a run.
  static Rng stream(std::uint64_t seed, std::uint64_t iteration, std::uint64_t slot,
                    std::uint64_t tag) noexcept {
    std::uint64_t h = mix(seed ^ 0x243F6A8885A308D3ULL);
    h = mix(h ^ iteration);
    h = mix(h ^ (slot * 0x9E3779B97F4A7C15ULL));
    h = mix(h ^ (tag + 0xB7E151628AED2A6BULL));
    return Rng(h);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n must be positive.
  std::size_t below(std::size_t n) noexcept {
    // Lemire's multiply-shift with rejection.
    const std::uint64_t bound = n;
    __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::size_t>(m >> 64);
  }

private:
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

} // namespace edgeplace
