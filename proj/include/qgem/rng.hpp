#pragma once

#include <cstdint>
#include <random>

namespace qgem {

// splitmix64 finalizer; good avalanche, used to derive independent
// per-(repetition, unit) streams from one user seed so results do not
// depend on scheduling order.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t repetition,
                                   std::uint64_t unit) {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc908ull) + mix64(repetition + 1) +
               0x9e3779b97f4a7c15ull * mix64(unit + 1));
}

inline std::mt19937_64 make_rng(std::uint64_t stream_seed) {
  return std::mt19937_64(stream_seed);
}

}  // namespace qgem
