#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace rulegraph {

/// SplitMix64 finalizer. Stable across platforms; used for all sub-seed
/// derivation so that parallel runs reproduce serial ones bit for bit.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// hash64(master, p0, p1, ...) = fold of mix64(h ^ mix64(p)) starting from
/// h = mix64(master).
constexpr std::uint64_t sub_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = mix64(master);
  for (std::uint64_t p : parts) h = mix64(h ^ mix64(p));
  return h;
}

/// Seeded random source. Wraps mt19937_64 (whose output sequence is fixed by
/// the standard) and draws integers and reals with its own reductions, since
/// the std:: distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  /// Uniform in [lo, hi], inclusive.
  std::size_t uniform_int(std::size_t lo, std::size_t hi) {
    return lo + uniform_index(hi - lo + 1);
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Index drawn with probability proportional to weights[i]. Returns
  /// weights.size() if every weight is zero.
  std::size_t weighted_index(std::span<const double> weights);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rulegraph
