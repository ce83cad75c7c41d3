#pragma once

#include <cmath>
#include <cstdint>

namespace orbbuf {

// SplitMix64. Used everywhere randomness is needed so that results are
// reproducible across platforms; the standard <random> distributions are
// implementation-defined and would break byte-for-byte determinism.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Rejection sampling keeps the draw unbiased.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t v = next();
    while (v > limit) v = next();
    return v % n;
  }

  // Standard normal via Box-Muller.
  double next_gaussian() {
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }
};

// Deterministic fan-out: derive an independent stream seed from a root seed
// and a stream tag.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag) {
  SplitMix64 mix(root ^ (0x6C62272E07BB0142ull + tag * 0x5851F42D4C957F2Dull));
  return mix.next();
}

// FNV-1a, used for run ids and for compact regression fixtures over CSV text.
inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace orbbuf
