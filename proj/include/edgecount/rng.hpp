#pragma once

#include <cstdint>
#include <random>

namespace edgecount {

// All randomness uses std::mt19937_64. Independent streams are obtained by
// hashing (base_seed, stream index) through SplitMix64 so that trial k's
// stream does not depend on how many trials ran before it or on which
// thread runs it.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return splitmix64(base ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t base, std::uint64_t index) {
  return Rng(derive_seed(base, index));
}

}  // namespace edgecount
