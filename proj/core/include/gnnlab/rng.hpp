#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace gnnlab {

// Counter-based random streams. A stream is a pure function of its key
// words and a draw counter, so draws are order-independent across nodes
// and iterations, and streams can be opened concurrently.

namespace detail {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer (Stafford mix13).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Domain tags keep independent uses of the same seed from colliding.
enum class RngDomain : std::uint64_t {
  generator = 1,   // graph generators
  split = 2,       // train/test split
  init = 3,        // model parameter init
  batch = 4,       // batch draw per iteration
  neighbors = 5,   // neighbor sampling per (iteration, node)
  virtual_rows = 6 // per-node virtual sampling for the distance cost
};

class RngStream {
public:
  RngStream(std::uint64_t seed, RngDomain domain, std::uint64_t a = 0,
            std::uint64_t b = 0)
      : key_(detail::mix64(detail::mix64(detail::mix64(detail::mix64(
                 seed + detail::kGolden) ^ static_cast<std::uint64_t>(domain)) +
                 a * detail::kGolden) ^ b)) {}

  std::uint64_t next_u64() { return detail::mix64(key_ + (++counter_) * detail::kGolden); }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) {
    // Lemire's multiply-shift with rejection for exact uniformity.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      std::uint64_t threshold = -bound % bound;
      while (lo < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via Box-Muller; written out so results do not depend
  /// on the standard library's distribution internals.
  double next_normal() {
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[next_below(i)]);
    }
  }

  /// First k entries of a uniform random permutation of `items`,
  /// in draw order. A longer draw extends a shorter one, which is what
  /// makes nested batches prefixes of each other.
  template <typename T>
  std::vector<T> sample_prefix(std::vector<T> items, std::size_t k) {
    k = std::min(k, items.size());
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(next_below(items.size() - i));
      std::swap(items[i], items[j]);
    }
    items.resize(k);
    return items;
  }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace gnnlab
