#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace plurality {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a path of
/// indices. Pure function: identical inputs always give identical seeds.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(master);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

// Stream tags keep the RNG streams of one replica disjoint.
namespace stream {
inline constexpr std::uint64_t pattern = 1;
inline constexpr std::uint64_t protocol = 2;
inline constexpr std::uint64_t assignment = 3;
inline constexpr std::uint64_t walk = 4;
inline constexpr std::uint64_t graph = 5;
inline constexpr std::uint64_t mixing = 6;
}  // namespace stream

}  // namespace plurality
