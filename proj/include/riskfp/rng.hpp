#pragma once

#include <cstdint>
#include <random>

namespace riskfp {

/// SplitMix64 finalizer; used to derive independent per-trial streams.
std::uint64_t splitmix64(std::uint64_t z) noexcept;

/// hash(master_seed, index): seed of the stream owned by trial `index`.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// mt19937_64 with distributions written out explicitly, so a given seed
/// yields the same draws on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_pos();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, no cached second draw).
  double normal();
  /// Exponential with rate 1.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

}  // namespace riskfp
