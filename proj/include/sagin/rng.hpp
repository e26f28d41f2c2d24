#pragma once

#include <cstdint>
#include <random>

#include "sagin/types.hpp"

namespace sagin {

// Seeded RNG with explicit sampling transforms. The mt19937_64 core is fully
// specified by the standard and the transforms below avoid the
// implementation-defined state handling of std::*_distribution, so a seed
// produces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the sine mate is cached.
  double normal();

  // Gamma(shape, scale) via Marsaglia-Tsang squeeze, boosted for shape < 1.
  double gamma(double shape, double scale);

  // Circularly symmetric complex Gaussian with E|z|^2 = variance.
  Complex circular_gaussian(double variance);

 private:
  std::mt19937_64 gen_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

// Decorrelated per-stream seed derivation (splitmix64 over master ^ stream).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace sagin
