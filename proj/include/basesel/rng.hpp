#ifndef BASESEL_RNG_HPP
#define BASESEL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace basesel {

// All seeded behavior in this library runs on std::mt19937_64 (a standardized,
// platform-independent generator) with the hand-rolled draws below, because the
// standard <random> distributions are implementation-defined and would break
// bit-reproducibility across toolchains.

using Rng = std::mt19937_64;

/// Uniform integer in [0, n), unbiased via rejection sampling.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

/// Uniform double in [0, 1) with 53-bit resolution.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller.
inline double standard_normal(Rng& rng) {
  double u1 = uniform_unit(rng);
  while (u1 <= 0.0) u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

/// k distinct indices from [0, n), Fisher-Yates partial shuffle.
inline std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t pick = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(pool[i], pool[pick]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace basesel

#endif
