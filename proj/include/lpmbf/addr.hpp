#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "lpmbf/error.hpp"

namespace lpmbf {

// Fixed-width address value. width is 32 or 128; for width 32 only the low
// 32 bits of `lo` are used. Value is kept in host integers, MSB-first
// semantics (bit 0 of the prefix is the top bit of hi/lo).
struct Address {
  unsigned width = 32;
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  bool operator==(const Address&) const = default;
};

struct Prefix {
  Address addr;
  unsigned plen = 0;

  bool operator==(const Prefix&) const = default;
};

// Wire key for the hash family: masked address in network byte order
// followed by one byte holding plen. 5 bytes for IPv4, 17 for IPv6.
struct EncodedKey {
  std::array<std::uint8_t, 17> bytes{};
  std::uint8_t size = 0;

  std::span<const std::uint8_t> view() const { return {bytes.data(), size}; }

  bool operator==(const EncodedKey& o) const {
    if (size != o.size) return false;
    for (unsigned i = 0; i < size; ++i)
      if (bytes[i] != o.bytes[i]) return false;
    return true;
  }
};

// Zero all but the plen most significant bits.
Address mask_address(const Address& a, unsigned plen);

// True iff a == mask_address(a, plen).
bool is_canonical(const Address& a, unsigned plen);

// Requires a already masked to plen.
EncodedKey encode_key(const Address& a, unsigned plen);

// Inverse of encode_key (test/trace helper).
Prefix decode_key(const EncodedKey& key, unsigned width);

struct ParsedPrefix {
  Prefix prefix;
  bool was_canonical = true;  // false when low bits had to be forced to zero
};

// "a.b.c.d/len" or "x:y::z/len". width selects the notation.
ParsedPrefix parse_prefix(std::string_view text, unsigned width);

Address parse_address(std::string_view text, unsigned width);

std::string format_address(const Address& a);
std::string format_prefix(const Prefix& p);

}  // namespace lpmbf
