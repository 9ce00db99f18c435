#pragma once

#include <cstdint>
#include <random>

namespace proxflow {

/// Deterministic random stream: mt19937_64 with an explicit bit-to-double
/// mapping, so runs with the same 64-bit seed reproduce exactly on any
/// standard library (std distributions are not bit-portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  /// Uniform in [0, 1), 53 mantissa bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace proxflow
