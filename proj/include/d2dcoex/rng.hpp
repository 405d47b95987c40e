#pragma once

#include <cstdint>
#include <random>

namespace d2dcoex {

/// SplitMix64 finaliser; used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for substream `stream` (and optional `substream`) of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t substream = 0) noexcept;

// Thin wrapper over mt19937_64. The conversions to floating point are done here
// rather than through <random> distributions so that draws are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace d2dcoex
