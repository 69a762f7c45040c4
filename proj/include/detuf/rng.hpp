#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace detuf {

/// Deterministic 64-bit generator (SplitMix64).
///
/// Every derived quantity (bounded integers, doubles, Bernoulli draws) is
/// computed with integer arithmetic only, so a given seed yields the same
/// stream on every platform and standard library. std::*_distribution is
/// intentionally never used.
///
/// `split` derives an independent child generator from the *seed* (not the
/// current state), so sub-experiments labelled the same way are reproducible
/// regardless of how much of the parent stream was consumed.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept : seed_(seed), state_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  Rng split(std::string_view label) const noexcept;
  Rng split(std::uint64_t index) const noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next(); }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

/// Fisher–Yates, driven solely by `rng`.
template <class T>
void shuffle_in_place(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace detuf
