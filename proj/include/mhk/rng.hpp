#pragma once

#include <cstdint>
#include <random>

namespace mhk {

/// Independent sub-streams derived from one master seed.
enum class Stream : std::uint64_t {
  points = 1,
  replacement = 2,
  shifts = 3,
  monte_carlo = 4,
  trials = 5,
};

/// Seedable 64-bit generator (mt19937_64) with portable conversions to
/// doubles and bounded integers, so streams are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream `stream` of master seed `seed`.
  Rng(std::uint64_t seed, Stream stream);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive sub-stream and trial seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Seed for the i-th derived child of a master seed.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t i);

}  // namespace mhk
