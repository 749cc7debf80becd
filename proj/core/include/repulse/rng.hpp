#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace repulse {

/// SplitMix64 finalizer; maps (master, stream) to an independent-looking seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Seeded random source with platform-independent bounded draws.
///
/// std::uniform_int_distribution and friends are implementation-defined, so the
/// bounded and real-valued draws here are written out to keep every sampler a
/// pure function of its seed on any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (no cached second value).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace repulse
