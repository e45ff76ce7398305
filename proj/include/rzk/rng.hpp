#pragma once

#include <cstdint>

namespace rzk {

/// splitmix64; the standard-library distributions are not byte-stable across
/// platforms, so suites draw from this directly.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }
  bool coin() { return (next() & 1) != 0; }
  Rng fork(std::uint64_t salt) { return Rng(next() ^ (salt * 0x9e3779b97f4a7c15ull)); }
};

}  // namespace rzk
