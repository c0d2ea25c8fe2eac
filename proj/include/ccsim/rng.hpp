// SPDX-License-Identifier: Apache-2.0
//
// Seeded randomness with fully pinned-down bit streams: the uniform and
// Gaussian mappings are implemented here (not via std::*_distribution) so
// that identical seeds give identical draws on every platform.
#pragma once

#include <cstdint>
#include <random>

#include "ccsim/linalg.hpp"

namespace ccsim {

// splitmix64 finalizer, used both to condition seeds and to combine them.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
  return mix_seed(mix_seed(a, b), c);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

  double uniform01() {  // in [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Uniform over {0, ..., n-1} by rejection.
  int uniform_int(int n) {
    const std::uint64_t bound = ~0ull - (~0ull % static_cast<std::uint64_t>(n));
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= bound);
    return static_cast<int>(x % static_cast<std::uint64_t>(n));
  }

  double gaussian() {  // N(0, 1), Box-Muller
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  // Circularly symmetric complex Gaussian, zero mean, unit total variance.
  cplx cgaussian() {
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-std::log(u1));
    const double ph = 2.0 * 3.141592653589793238462643383279502884 * u2;
    return cplx{r * std::cos(ph), r * std::sin(ph)};
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ccsim
