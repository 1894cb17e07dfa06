#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lpmbf/addr.hpp"
#include "lpmbf/guided_bloom.hpp"
#include "lpmbf/stats.hpp"

namespace lpmbf {

// Exact prefix -> next-hop store. Next-hop descriptors are interned into a
// compact array; the map is the definitive membership authority behind the
// probabilistic filters.
class FibTable {
 public:
  explicit FibTable(unsigned width);

  // Interns the descriptor and records the mapping; reinserting a prefix
  // overwrites its next hop. Returns the next-hop index.
  std::uint32_t insert(const Prefix& p, std::string_view nexthop);

  bool contains(const Prefix& p, LookupStats* stats = nullptr) const;
  std::optional<std::uint32_t> nexthop_index(const Prefix& p) const;

  unsigned width() const { return width_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t nexthop_count() const { return nexthops_.size(); }
  const std::string& nexthop_name(std::uint32_t idx) const {
    return nexthops_.at(idx);
  }

  struct Entry {
    Prefix prefix;
    std::uint32_t nexthop = 0;
  };
  const std::vector<Entry>& entries() const { return entries_; }

  // Ascending distinct prefix lengths (including 0 if a default route is
  // stored).
  std::vector<unsigned> distinct_lengths() const;

  // Next hop of the length-0 entry, if any.
  std::optional<std::uint32_t> default_nexthop() const;

  struct Match {
    bool found = false;
    Prefix prefix{};
    std::uint32_t nexthop = 0;
  };
  // Verification oracle: full scan for the longest matching prefix.
  Match naive_lmp(const Address& a) const;

  struct LoadReport {
    std::size_t lines = 0;
    std::size_t entries = 0;
    std::size_t non_canonical = 0;  // inputs whose host bits were masked off
  };
  // One entry per line: "<prefix>/<len> <nexthop-name>"; '#' comments and
  // blank lines ignored; missing name defaults to "if<plen>".
  static FibTable load_stream(std::istream& in, unsigned width,
                              LoadReport* report = nullptr);
  static FibTable load_file(const std::string& path, unsigned width,
                            LoadReport* report = nullptr);

 private:
  unsigned width_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::uint32_t> by_key_;  // key bytes -> entry
  std::vector<std::string> nexthops_;
  std::unordered_map<std::string, std::uint32_t> interned_;
};

struct FibFilterParams {
  std::uint64_t m = 0;
  unsigned k = 0;       // total hash functions
  unsigned w_bits = 0;  // next-hop index window width
};

// Experimental next-hop cache: the window of the prefix key stores
// nexthop_index + 1; verification hashes bind (prefix, index) so a corrupted
// window fails verification and falls back to the exact map.
class FibFilter {
 public:
  static FibFilter build(const FibTable& table, const FibFilterParams& params,
                         HashSeed seed);

  // Always agrees with the exact map; falls back to it (counted in
  // stats.defaulted) when the window reads 0, all-ones, or verification
  // fails. Throws ConfigError-free std::out_of_range when p is absent.
  std::uint32_t lookup(const FibTable& table, const Prefix& p,
                       LookupStats& stats) const;

  const GuidedFilter& filter() const { return filter_; }
  unsigned w_bits() const { return w_bits_; }

 private:
  FibFilter(FilterParams fp, HashSeed seed, unsigned w_bits)
      : filter_(fp, seed), w_bits_(w_bits) {}

  GuidedFilter filter_;
  unsigned w_bits_;
};

}  // namespace lpmbf
