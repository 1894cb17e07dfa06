#include "lpmbf/addr.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <cstring>

namespace lpmbf {

namespace {

void check_width(unsigned width) {
  if (width != 32 && width != 128)
    throw std::invalid_argument("address width must be 32 or 128");
}

// Top-n-bits mask of a 64-bit word; n in [0, 64].
std::uint64_t mask64(unsigned n) {
  if (n == 0) return 0;
  return ~std::uint64_t{0} << (64 - n);
}

}  // namespace

Address mask_address(const Address& a, unsigned plen) {
  check_width(a.width);
  if (plen > a.width)
    throw std::invalid_argument("plen " + std::to_string(plen) +
                                " exceeds width " + std::to_string(a.width));
  Address out = a;
  if (a.width == 32) {
    std::uint64_t m = plen == 0 ? 0 : (mask64(plen) >> 32);
    out.lo = a.lo & m;
    out.hi = 0;
  } else {
    if (plen <= 64) {
      out.hi = a.hi & mask64(plen);
      out.lo = 0;
    } else {
      out.lo = a.lo & mask64(plen - 64);
    }
  }
  return out;
}

bool is_canonical(const Address& a, unsigned plen) {
  return mask_address(a, plen) == a;
}

EncodedKey encode_key(const Address& a, unsigned plen) {
  if (!is_canonical(a, plen))
    throw std::invalid_argument("address has bits set below plen " +
                                std::to_string(plen));
  EncodedKey key;
  if (a.width == 32) {
    std::uint32_t v = static_cast<std::uint32_t>(a.lo);
    key.bytes[0] = static_cast<std::uint8_t>(v >> 24);
    key.bytes[1] = static_cast<std::uint8_t>(v >> 16);
    key.bytes[2] = static_cast<std::uint8_t>(v >> 8);
    key.bytes[3] = static_cast<std::uint8_t>(v);
    key.bytes[4] = static_cast<std::uint8_t>(plen);
    key.size = 5;
  } else {
    for (int i = 0; i < 8; ++i) {
      key.bytes[i] = static_cast<std::uint8_t>(a.hi >> (56 - 8 * i));
      key.bytes[8 + i] = static_cast<std::uint8_t>(a.lo >> (56 - 8 * i));
    }
    key.bytes[16] = static_cast<std::uint8_t>(plen);
    key.size = 17;
  }
  return key;
}

Prefix decode_key(const EncodedKey& key, unsigned width) {
  check_width(width);
  Prefix p;
  p.addr.width = width;
  if (width == 32) {
    if (key.size != 5) throw std::invalid_argument("bad key size for width 32");
    p.addr.lo = (std::uint64_t{key.bytes[0]} << 24) |
                (std::uint64_t{key.bytes[1]} << 16) |
                (std::uint64_t{key.bytes[2]} << 8) | key.bytes[3];
    p.plen = key.bytes[4];
  } else {
    if (key.size != 17)
      throw std::invalid_argument("bad key size for width 128");
    for (int i = 0; i < 8; ++i) {
      p.addr.hi = (p.addr.hi << 8) | key.bytes[i];
      p.addr.lo = (p.addr.lo << 8) | key.bytes[8 + i];
    }
    p.plen = key.bytes[16];
  }
  return p;
}

Address parse_address(std::string_view text, unsigned width) {
  check_width(width);
  std::string s(text);
  Address a;
  a.width = width;
  if (width == 32) {
    in_addr v4{};
    if (inet_pton(AF_INET, s.c_str(), &v4) != 1)
      throw ParseError("bad IPv4 address: '" + s + "'");
    a.lo = ntohl(v4.s_addr);
  } else {
    in6_addr v6{};
    if (inet_pton(AF_INET6, s.c_str(), &v6) != 1)
      throw ParseError("bad IPv6 address: '" + s + "'");
    for (int i = 0; i < 8; ++i) {
      a.hi = (a.hi << 8) | v6.s6_addr[i];
      a.lo = (a.lo << 8) | v6.s6_addr[8 + i];
    }
  }
  return a;
}

ParsedPrefix parse_prefix(std::string_view text, unsigned width) {
  auto slash = text.rfind('/');
  if (slash == std::string_view::npos)
    throw ParseError("missing '/len' in prefix: '" + std::string(text) + "'");
  unsigned plen = 0;
  auto len_str = text.substr(slash + 1);
  auto [ptr, ec] =
      std::from_chars(len_str.data(), len_str.data() + len_str.size(), plen);
  if (ec != std::errc{} || ptr != len_str.data() + len_str.size())
    throw ParseError("bad prefix length in '" + std::string(text) + "'");
  if (plen > width)
    throw ParseError("prefix length " + std::to_string(plen) +
                     " out of range in '" + std::string(text) + "'");
  Address a = parse_address(text.substr(0, slash), width);
  Address masked = mask_address(a, plen);
  ParsedPrefix out;
  out.prefix = Prefix{masked, plen};
  out.was_canonical = (masked == a);
  return out;
}

std::string format_address(const Address& a) {
  char buf[INET6_ADDRSTRLEN];
  if (a.width == 32) {
    in_addr v4{};
    v4.s_addr = htonl(static_cast<std::uint32_t>(a.lo));
    inet_ntop(AF_INET, &v4, buf, sizeof(buf));
  } else {
    in6_addr v6{};
    for (int i = 0; i < 8; ++i) {
      v6.s6_addr[i] = static_cast<std::uint8_t>(a.hi >> (56 - 8 * i));
      v6.s6_addr[8 + i] = static_cast<std::uint8_t>(a.lo >> (56 - 8 * i));
    }
    inet_ntop(AF_INET6, &v6, buf, sizeof(buf));
  }
  return buf;
}

std::string format_prefix(const Prefix& p) {
  return format_address(p.addr) + "/" + std::to_string(p.plen);
}

}  // namespace lpmbf
