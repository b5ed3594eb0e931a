#pragma once

// Seed-space partitioning for reproducible Monte Carlo.
//
// Every sample i of a run with base seed S draws from its own engine seeded
// with derive_seed(S, i). Sample streams therefore do not depend on how
// samples are distributed over workers.

#include <cstdint>
#include <random>

namespace lls {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` under base seed `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index ^ 0x6a09e667f3bcc909ULL));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Uniform on the open interval (0, 1).
inline double uniform_open(Engine& eng) {
  // 53 random bits, shifted by half an ulp so that 0 is never returned.
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace lls
