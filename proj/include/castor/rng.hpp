#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace castor {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent substream seed from a master seed and a key path,
// e.g. derive_seed(seed, {rep, group, shapelet, exponent}). Folding is
// h <- mix64(h ^ key) starting from h = mix64(seed).
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h{mix64(seed)};
  for (const std::uint64_t key : keys) {
    h = mix64(h ^ key);
  }
  return h;
}

// mt19937_64 with bounded draws defined here rather than through
// std::uniform_int_distribution, whose algorithm is library-specific.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_{seed} {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound); Lemire's multiply-and-reject. bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 product{static_cast<unsigned __int128>(next()) * bound};
    auto low{static_cast<std::uint64_t>(product)};
    if (low < bound) {
      const std::uint64_t threshold{(0 - bound) % bound};
      while (low < threshold) {
        product = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  // Uniform in the closed range [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller, one variate per call.
  double normal() {
    const double u1{1.0 - uniform()};
    const double u2{uniform()};
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i{items.size()}; i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace castor
