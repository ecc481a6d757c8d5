#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ocsp {

/// Seeded generator used everywhere randomness is drawn. Bounded draws use
/// rejection sampling on the raw 64-bit stream so results do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, bound); bound must be positive.
  std::uint64_t uniform(std::uint64_t bound);

  /// True with probability exactly num/den.
  bool bernoulli(std::uint64_t num, std::uint64_t den) { return uniform(den) < num; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[uniform(i)]);
    }
  }

  /// Child stream seed: a splitmix64 mix of (seed, stream). Used to give each
  /// trial/matching its own reproducible generator independent of scheduling.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept;

 private:
  std::mt19937_64 engine_;
};

}  // namespace ocsp
