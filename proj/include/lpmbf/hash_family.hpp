#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace lpmbf {

struct HashSeed {
  std::uint64_t a = 0;
  std::uint64_t b = 0;

  bool operator==(const HashSeed&) const = default;
};

inline constexpr HashSeed kDefaultSeed{0x9e3779b97f4a7c15ull,
                                       0xc2b2ae3d27d4eb4full};

// One hashing event per key; the k indexed functions are derived from it by
// double hashing. h_b is forced odd so derived indices cycle through all
// residues for power-of-two m.
struct BaseHash {
  std::uint64_t h_a = 0;
  std::uint64_t h_b = 1;
};

// MurmurHash3 x64 128-bit core over the key bytes, seeded by (seed.a, seed.b).
BaseHash base_hash(std::span<const std::uint8_t> key, const HashSeed& seed);

// Bit index of hash function `ordinal` (1-based): (h_a + (ordinal-1)*h_b) mod m.
inline std::uint64_t index_for(const BaseHash& base, unsigned ordinal,
                               std::uint64_t m) {
  if (ordinal < 1) throw std::invalid_argument("hash ordinal must be >= 1");
  if (m < 1) throw std::invalid_argument("bit vector size must be >= 1");
  return (base.h_a + std::uint64_t{ordinal - 1} * base.h_b) % m;
}

}  // namespace lpmbf
