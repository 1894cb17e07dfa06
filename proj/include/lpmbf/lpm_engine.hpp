#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpmbf/fib_store.hpp"
#include "lpmbf/guided_bloom.hpp"
#include "lpmbf/plen_tree.hpp"
#include "lpmbf/stats.hpp"

namespace lpmbf {

enum class SearchScheme { guided, linear };
enum class TreeKind { balanced, optimal };

struct EngineOptions {
  SearchScheme scheme = SearchScheme::guided;
  FilterParams params;
  HashSeed seed = kDefaultSeed;
  TreeKind tree = TreeKind::balanced;
  std::vector<double> weights;  // per nonzero length, for TreeKind::optimal
  bool all_lengths = false;     // paper-literal linear loop over every length
};

struct LookupResult {
  enum class Path { default_route, sentinel, decoded, fallback, linear };
  Path path = Path::default_route;
  bool is_default = true;
  unsigned plen = 0;
  std::optional<std::uint32_t> nexthop;
};

using TraceLog = std::vector<std::string>;

// Orchestrates the guided-filter build, the guided tree search with linear
// fallback, and the pure linear baseline. Immutable once built.
class Engine {
 public:
  static Engine build(FibTable fib, const EngineOptions& opt);

  // Rebuild bookkeeping around a previously saved filter bit vector.
  static Engine adopt(FibTable fib, const EngineOptions& opt,
                      std::vector<std::uint64_t> words,
                      std::uint64_t set_count);

  static unsigned required_k(const LengthTree& tree, unsigned n_bits) {
    return traverse_height(tree) + n_bits;
  }

  LookupResult lookup(const Address& a, LookupStats& stats,
                      TraceLog* trace = nullptr) const;
  LookupResult guided_lookup(const Address& a, LookupStats& stats,
                             TraceLog* trace = nullptr) const;
  LookupResult linear_lookup(const Address& a, unsigned from_plen,
                             LookupStats& stats,
                             TraceLog* trace = nullptr) const;

  SearchScheme scheme() const { return scheme_; }
  const FibTable& fib() const { return fib_; }
  const GuidedFilter& filter() const { return filter_; }
  const LengthTree& tree() const { return tree_; }
  const LengthIndex& index() const { return idx_; }
  bool all_lengths() const { return all_lengths_; }

 private:
  Engine(FibTable fib, const EngineOptions& opt);

  struct KeyCache;

  void insert_guided(const Prefix& pref);
  LookupResult guided_impl(const Address& a, unsigned cap_plen,
                           LookupStats& stats, TraceLog* trace) const;
  LookupResult linear_scan(const Address& a, unsigned from_plen,
                           LookupStats& stats, KeyCache& cache,
                           TraceLog* trace) const;
  LookupResult default_result() const;
  LookupResult match_result(LookupResult::Path path, const Prefix& p) const;

  unsigned width_;
  SearchScheme scheme_;
  bool all_lengths_;
  FibTable fib_;
  LengthIndex idx_;
  LengthTree tree_;
  GuidedFilter filter_;
  std::optional<std::uint32_t> default_nexthop_;
};

}  // namespace lpmbf
