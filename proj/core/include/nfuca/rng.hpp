// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>

namespace nfuca {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-style seed derivation: the result depends only on the key values,
/// never on the order in which streams are requested.
inline constexpr std::uint64_t derive_seed(
    std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t state = splitmix64(master);
  for (std::uint64_t k : keys) state = splitmix64(state ^ splitmix64(k));
  return state;
}

inline std::uint64_t seed_key(double value) {
  // +0.0 and -0.0 are the same sweep point.
  return std::bit_cast<std::uint64_t>(value == 0.0 ? 0.0 : value);
}

}  // namespace nfuca
