#pragma once

// Test-only helpers: an independent trie oracle, synthetic table builders,
// and filter-size calibration. Kept out of the library on purpose.

#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "lpmbf/fib_store.hpp"
#include "lpmbf/lpm_engine.hpp"

namespace lpmbf::testsupport {

// Bitwise binary trie, coded independently of FibTable::naive_lmp.
class TrieOracle {
 public:
  explicit TrieOracle(unsigned width) : width_(width), nodes_(1) {}

  void insert(const Prefix& p, std::uint32_t nexthop) {
    std::size_t cur = 0;
    for (unsigned i = 0; i < p.plen; ++i) {
      int b = bit(p.addr, i);
      if (nodes_[cur].child[b] == 0) {
        nodes_[cur].child[b] = nodes_.size();
        nodes_.emplace_back();
      }
      cur = nodes_[cur].child[b];
    }
    nodes_[cur].terminal = true;
    nodes_[cur].plen = p.plen;
    nodes_[cur].nexthop = nexthop;
  }

  struct Match {
    bool found = false;
    unsigned plen = 0;
    std::uint32_t nexthop = 0;
  };

  Match lmp(const Address& a) const {
    Match best;
    std::size_t cur = 0;
    if (nodes_[0].terminal && nodes_[0].plen > 0) {
      best.found = true;
      best.plen = nodes_[0].plen;
      best.nexthop = nodes_[0].nexthop;
    }
    for (unsigned i = 0; i < width_; ++i) {
      std::size_t next = nodes_[cur].child[bit(a, i)];
      if (next == 0) break;
      cur = next;
      if (nodes_[cur].terminal && nodes_[cur].plen > 0) {
        best.found = true;
        best.plen = nodes_[cur].plen;
        best.nexthop = nodes_[cur].nexthop;
      }
    }
    return best;
  }

 private:
  struct Node {
    std::size_t child[2] = {0, 0};
    bool terminal = false;
    unsigned plen = 0;
    std::uint32_t nexthop = 0;
  };

  int bit(const Address& a, unsigned pos) const {
    unsigned from_bottom = width_ - 1 - pos;
    if (from_bottom >= 64) return (a.hi >> (from_bottom - 64)) & 1;
    return (a.lo >> from_bottom) & 1;
  }

  unsigned width_;
  std::vector<Node> nodes_;
};

inline TrieOracle trie_of(const FibTable& table) {
  TrieOracle trie(table.width());
  for (const auto& e : table.entries()) trie.insert(e.prefix, e.nexthop);
  return trie;
}

inline Address random_address(std::mt19937_64& rng, unsigned width) {
  Address a;
  a.width = width;
  if (width == 32) {
    a.lo = rng() & 0xFFFFFFFFull;
  } else {
    a.hi = rng();
    a.lo = rng();
  }
  return a;
}

// Random table with lengths drawn from [min_len, max_len]; a handful of
// next hops; optional default route.
inline FibTable random_table(std::mt19937_64& rng, unsigned width,
                             std::size_t count, unsigned min_len,
                             unsigned max_len, bool with_default = true) {
  FibTable table(width);
  if (with_default)
    table.insert(Prefix{Address{width, 0, 0}, 0}, "default-gw");
  std::size_t inserted = 0;
  while (inserted < count) {
    unsigned plen = min_len + static_cast<unsigned>(
                                  rng() % (max_len - min_len + 1));
    Address a = mask_address(random_address(rng, width), plen);
    Prefix p{a, plen};
    if (table.contains(p)) continue;
    table.insert(p, "if" + std::to_string(rng() % 40));
    ++inserted;
  }
  return table;
}

// Synthetic IPv4 table shaped like a backbone BGP snapshot: /24-heavy, with
// every longer prefix nested inside one of 170 stored /8 blocks (real tables
// are hierarchical: more-specifics ride inside announced aggregates). The
// /8 anchors alone cover 170/256 ~ 66% of the space. scale = 1.0 gives
// ~115k entries.
inline FibTable backbone_v4_table(std::mt19937_64& rng, double scale = 1.0) {
  FibTable table(32);
  table.insert(Prefix{Address{32, 0, 0}, 0}, "default-gw");

  std::vector<std::uint32_t> anchors(256);
  for (unsigned i = 0; i < 256; ++i) anchors[i] = i;
  for (unsigned i = 255; i > 0; --i)
    std::swap(anchors[i], anchors[rng() % (i + 1)]);
  anchors.resize(170);
  for (std::uint32_t top : anchors)
    table.insert(Prefix{Address{32, 0, top << 24}, 8},
                 "if" + std::to_string(rng() % 200));

  struct Row {
    unsigned plen;
    std::size_t count;
  };
  const Row rows[] = {
      {9, 70},    {10, 120},  {11, 170},  {12, 230},  {13, 300},
      {14, 420},  {15, 500},  {16, 3200}, {17, 1400}, {18, 2400},
      {19, 4300}, {20, 5200}, {21, 5900}, {22, 10200}, {23, 9100},
      {24, 66000}, {25, 900}, {26, 800},  {27, 600},  {28, 500},
      {29, 700},  {30, 400},  {31, 120},  {32, 300},
  };
  for (const Row& row : rows) {
    std::size_t want = static_cast<std::size_t>(
        std::llround(static_cast<double>(row.count) * scale));
    std::size_t added = 0;
    while (added < want) {
      std::uint32_t top = anchors[rng() % anchors.size()];
      std::uint32_t value = (top << 24) | (rng() & 0x00FFFFFF);
      Prefix p{mask_address(Address{32, 0, value}, row.plen), row.plen};
      if (table.contains(p)) continue;
      table.insert(p, "if" + std::to_string(rng() % 200));
      ++added;
    }
  }
  return table;
}

// Non-overlapping cover of [0, limit) by aligned blocks; one prefix per set
// bit of limit, each with a distinct length.
inline FibTable interval_cover_table(std::uint64_t limit) {
  FibTable table(32);
  table.insert(Prefix{Address{32, 0, 0}, 0}, "default-gw");
  std::uint64_t base = 0;
  for (int bitpos = 32; bitpos >= 0; --bitpos) {
    std::uint64_t block = std::uint64_t{1} << bitpos;
    if (limit & block) {
      unsigned plen = static_cast<unsigned>(32 - bitpos);
      if (plen >= 1) {
        Prefix p{Address{32, 0, base}, plen};
        table.insert(p, "if" + std::to_string(plen));
      }
      base += block;
    }
  }
  return table;
}

// Build once at a pilot size to count effective bit-write attempts, then
// solve 1 - e^{-W/m} = target for m.
inline std::uint64_t calibrate_m(const FibTable& table,
                                 const EngineOptions& base,
                                 double target_fill) {
  EngineOptions pilot = base;
  pilot.params.m = std::max<std::uint64_t>(
      1000, static_cast<std::uint64_t>(table.size()) * base.params.k * 4);
  Engine e = Engine::build(table, pilot);
  double fill = e.filter().fill_ratio();
  double attempts = -static_cast<double>(pilot.params.m) * std::log1p(-fill);
  return static_cast<std::uint64_t>(
      std::ceil(attempts / -std::log1p(-target_fill)));
}

}  // namespace lpmbf::testsupport
