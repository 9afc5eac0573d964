#pragma once

#include <cstdint>
#include <random>

#include "ssma/types.hpp"

namespace ssma {

/// SplitMix64 finalizer. Used to mix seeds and to derive independent
/// stream seeds from (base, stream-id) pairs.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base ^ mix64(stream + 0x632be59bd9b4e019ull));
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b) {
  return derive_seed(derive_seed(base, a), b);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                    std::uint64_t b, std::uint64_t c) {
  return derive_seed(derive_seed(base, a, b), c);
}

/// Deterministic random stream. Conversions from raw engine output are
/// done by hand so results do not depend on the standard library's
/// distribution implementations (mt19937_64 output itself is pinned by
/// the standard).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53-bit resolution.
  Real uniform01() {
    return static_cast<Real>(engine_() >> 11) * 0x1.0p-53;
  }

  Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n), exact via rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  /// Standard normal via Box-Muller.
  Real normal01() {
    Real u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const Real u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Sample an index from a probability vector by CDF walk. The vector
  /// must be non-negative and sum to ~1; rounding overshoot falls back
  /// to the last index.
  template <typename Derived>
  int categorical(const Eigen::MatrixBase<Derived>& probs) {
    const Real u = uniform01();
    Real cum = 0.0;
    const int n = static_cast<int>(probs.size());
    for (int i = 0; i < n; ++i) {
      cum += probs(i);
      if (u < cum) return i;
    }
    return n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ssma
