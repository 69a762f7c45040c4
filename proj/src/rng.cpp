#include "detuf/rng.hpp"

namespace detuf {
namespace {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
  return z ^ (z >> 33);
}

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t Rng::uniform_below(std::uint64_t bound) noexcept {
  // Rejection sampling: accept x >= 2^64 mod bound so that x % bound is exact.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

Rng Rng::split(std::string_view label) const noexcept {
  return Rng(mix64(seed_ ^ mix64(fnv1a(label))));
}

Rng Rng::split(std::uint64_t index) const noexcept {
  return Rng(mix64(seed_ + 0x9e3779b97f4a7c15ULL * (index + 1)) ^ 0x5851f42d4c957f2dULL);
}

}  // namespace detuf
