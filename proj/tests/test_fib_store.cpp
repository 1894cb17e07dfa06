#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "lpmbf/error.hpp"
#include "lpmbf/fib_store.hpp"
#include "support/synth.hpp"

using namespace lpmbf;
using namespace lpmbf::testsupport;

namespace {

Prefix v4p(std::uint32_t value, unsigned plen) {
  return Prefix{mask_address(Address{32, 0, value}, plen), plen};
}

}  // namespace

TEST_CASE("insert interns next hops and overwrites on reinsertion") {
  FibTable t(32);
  std::uint32_t a = t.insert(v4p(0x0A000000, 8), "ge-0/0/1");
  std::uint32_t b = t.insert(v4p(0x0B000000, 8), "ge-0/0/2");
  std::uint32_t a2 = t.insert(v4p(0x0C000000, 8), "ge-0/0/1");
  CHECK(a == a2);
  CHECK(a != b);
  CHECK(t.size() == 3);
  CHECK(t.nexthop_count() == 2);
  CHECK(t.nexthop_name(a) == "ge-0/0/1");

  // overwrite keeps size, moves the mapping
  t.insert(v4p(0x0A000000, 8), "ge-0/0/2");
  CHECK(t.size() == 3);
  CHECK(t.nexthop_index(v4p(0x0A000000, 8)) == b);
}

TEST_CASE("contains tracks a shadow set over random prefixes") {
  std::mt19937_64 rng(19);
  FibTable t(32);
  std::set<std::pair<std::uint32_t, unsigned>> shadow;
  for (int i = 0; i < 100000; ++i) {
    unsigned plen = 8 + static_cast<unsigned>(rng() % 25);
    Prefix p = v4p(static_cast<std::uint32_t>(rng()), plen);
    t.insert(p, "x");
    shadow.emplace(static_cast<std::uint32_t>(p.addr.lo), plen);
  }
  CHECK(t.size() == shadow.size());
  std::mt19937_64 rng2(99);
  for (int i = 0; i < 20000; ++i) {
    unsigned plen = 8 + static_cast<unsigned>(rng2() % 25);
    Prefix p = v4p(static_cast<std::uint32_t>(rng2()), plen);
    bool expect = shadow.count(
        {static_cast<std::uint32_t>(p.addr.lo), plen});
    CHECK(t.contains(p) == expect);
  }
}

TEST_CASE("contains counts fib_lookups") {
  FibTable t(32);
  t.insert(v4p(0x0A000000, 8), "a");
  LookupStats stats;
  t.contains(v4p(0x0A000000, 8), &stats);
  t.contains(v4p(0x0B000000, 8), &stats);
  CHECK(stats.fib_lookups == 2);
}

TEST_CASE("distinct_lengths and default route") {
  FibTable t(32);
  CHECK(t.distinct_lengths().empty());
  CHECK_FALSE(t.default_nexthop().has_value());
  t.insert(v4p(0, 0), "gw");
  t.insert(v4p(0x0A000000, 8), "a");
  t.insert(v4p(0x0A010000, 16), "b");
  t.insert(v4p(0x0A020000, 16), "c");
  CHECK(t.distinct_lengths() == std::vector<unsigned>{0, 8, 16});
  CHECK(t.default_nexthop().has_value());
  CHECK(t.nexthop_name(*t.default_nexthop()) == "gw");
}

TEST_CASE("naive_lmp textbook cases") {
  FibTable t(32);
  t.insert(v4p(0x0A000000, 8), "coarse");
  t.insert(v4p(0x0A010000, 16), "fine");

  auto m = t.naive_lmp(Address{32, 0, 0x0A010203});  // 10.1.2.3
  REQUIRE(m.found);
  CHECK(m.prefix.plen == 16);
  CHECK(t.nexthop_name(m.nexthop) == "fine");

  m = t.naive_lmp(Address{32, 0, 0x0A800001});  // 10.128.0.1
  REQUIRE(m.found);
  CHECK(m.prefix.plen == 8);

  m = t.naive_lmp(Address{32, 0, 0x0B000001});  // 11.0.0.1
  CHECK_FALSE(m.found);

  // with a default route, unmatched still reports found=false but the
  // stored default next hop is reachable separately
  t.insert(v4p(0, 0), "gw");
  m = t.naive_lmp(Address{32, 0, 0x0B000001});
  CHECK_FALSE(m.found);
  CHECK(t.nexthop_name(*t.default_nexthop()) == "gw");
}

TEST_CASE("naive_lmp agrees with an independent trie") {
  std::mt19937_64 rng(23);
  FibTable t = random_table(rng, 32, 4000, 4, 32);
  TrieOracle trie = trie_of(t);
  for (int i = 0; i < 20000; ++i) {
    Address a = random_address(rng, 32);
    auto mine = t.naive_lmp(a);
    auto theirs = trie.lmp(a);
    CHECK(mine.found == theirs.found);
    if (mine.found) {
      CHECK(mine.prefix.plen == theirs.plen);
      CHECK(mine.nexthop == theirs.nexthop);
    }
  }
}

TEST_CASE("naive_lmp agrees with the trie on IPv6") {
  std::mt19937_64 rng(29);
  FibTable t = random_table(rng, 128, 2000, 16, 64);
  TrieOracle trie = trie_of(t);
  for (int i = 0; i < 5000; ++i) {
    Address a = random_address(rng, 128);
    auto mine = t.naive_lmp(a);
    auto theirs = trie.lmp(a);
    CHECK(mine.found == theirs.found);
    if (mine.found) CHECK(mine.prefix.plen == theirs.plen);
  }
}

TEST_CASE("load_stream parses the table format") {
  std::istringstream in(
      "# backbone slice\n"
      "10.0.0.0/8 core1\n"
      "\n"
      "10.1.0.0/16 edge7\n"
      "192.168.1.1/24\n"          // host bits set; name defaults to if24
      "0.0.0.0/0 gw\n");
  FibTable::LoadReport report;
  FibTable t = FibTable::load_stream(in, 32, &report);
  CHECK(report.lines == 6);
  CHECK(report.entries == 4);
  CHECK(report.non_canonical == 1);
  CHECK(t.size() == 4);
  CHECK(t.contains(v4p(0xC0A80100, 24)));
  auto idx = t.nexthop_index(v4p(0xC0A80100, 24));
  REQUIRE(idx.has_value());
  CHECK(t.nexthop_name(*idx) == "if24");
  CHECK(t.default_nexthop().has_value());
}

TEST_CASE("load_stream rejects malformed lines") {
  std::istringstream bad("10.0.0.0/8 a\nnot-a-prefix b\n");
  CHECK_THROWS_AS(FibTable::load_stream(bad, 32), ParseError);
}

TEST_CASE("next-hop cache round-trips every stored prefix") {
  std::mt19937_64 rng(31);
  FibTable t = random_table(rng, 32, 20000, 8, 32);
  FibFilterParams params{};
  params.w_bits = 9;  // 200-ish next hops fit well under 2^9 - 2
  params.k = params.w_bits + 10;
  // fallback needs a near-clean window: every zero window bit must stay
  // zero, so the fill has to sit around half a percent
  params.m = static_cast<std::uint64_t>(t.size()) * params.k * 150;
  FibFilter ff = FibFilter::build(t, params, kDefaultSeed);

  LookupStats stats;
  for (const auto& e : t.entries()) {
    if (e.prefix.plen == 0) continue;
    CHECK(ff.lookup(t, e.prefix, stats) == e.nexthop);
  }
  // at this low fill nearly all answers come straight from the filter
  double fallback_rate =
      static_cast<double>(stats.defaulted) / static_cast<double>(t.size());
  CHECK(fallback_rate < 0.05);
}

TEST_CASE("next-hop cache always agrees with the map even when crowded") {
  std::mt19937_64 rng(37);
  FibTable t = random_table(rng, 32, 5000, 8, 32);
  FibFilterParams params{};
  params.w_bits = 9;
  params.k = params.w_bits + 10;
  params.m = static_cast<std::uint64_t>(t.size()) * params.k;  // heavy fill
  FibFilter ff = FibFilter::build(t, params, kDefaultSeed);
  CHECK(ff.filter().fill_ratio() > 0.3);

  LookupStats stats;
  for (const auto& e : t.entries()) {
    if (e.prefix.plen == 0) continue;
    CHECK(ff.lookup(t, e.prefix, stats) == e.nexthop);
  }
  CHECK(stats.defaulted > 0);  // corruption happened and was caught
}

TEST_CASE("next-hop cache rejects too-small windows and absent prefixes") {
  FibTable t(32);
  t.insert(v4p(0x0A000000, 8), "a");
  t.insert(v4p(0x0B000000, 8), "b");
  t.insert(v4p(0x0C000000, 8), "c");
  FibFilterParams params{};
  params.w_bits = 2;  // capacity 2^2 - 2 = 2 < 3 next hops
  params.k = 12;
  params.m = 4096;
  CHECK_THROWS_AS(FibFilter::build(t, params, kDefaultSeed), CapacityError);

  params.w_bits = 3;
  FibFilter ff = FibFilter::build(t, params, kDefaultSeed);
  LookupStats stats;
  CHECK_THROWS_AS(ff.lookup(t, v4p(0x0D000000, 8), stats), std::out_of_range);
}
