#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dynmatch {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed split: derives an independent child seed from a parent
/// seed and a path of counters, e.g. derive_seed(master, {cell, trial}).
constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t s = mix64(parent);
  for (std::uint64_t c : path) s = mix64(s ^ mix64(c + 0x632be59bd9b4e019ULL));
  return s;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{mix64(seed)}; }

// Domain tags keep the seed streams of different consumers apart.
namespace seed_domain {
inline constexpr std::uint64_t kLeftSubset = 0x11;
inline constexpr std::uint64_t kSampler = 0x22;
inline constexpr std::uint64_t kStream = 0x33;
inline constexpr std::uint64_t kHardGlobal = 0x44;
inline constexpr std::uint64_t kHardLocal = 0x55;
inline constexpr std::uint64_t kGraph = 0x66;
}  // namespace seed_domain

}  // namespace dynmatch
