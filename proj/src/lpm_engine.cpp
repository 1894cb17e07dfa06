#include "lpmbf/lpm_engine.hpp"

#include <algorithm>

#include "lpmbf/error.hpp"

namespace lpmbf {

// Per-lookup memo of base hashes: keys within one lookup differ only by
// prefix length, so the length identifies the key.
struct Engine::KeyCache {
  struct Slot {
    unsigned plen;
    BaseHash base;
  };
  std::vector<Slot> slots;

  BaseHash get(const Engine& e, const Address& a, unsigned plen,
               LookupStats& stats) {
    for (const Slot& s : slots)
      if (s.plen == plen) return s.base;
    Address masked = mask_address(a, plen);
    BaseHash base = e.filter_.hash_key(encode_key(masked, plen), &stats);
    slots.push_back({plen, base});
    return base;
  }
};

Engine::Engine(FibTable fib, const EngineOptions& opt)
    : width_(fib.width()),
      scheme_(opt.scheme),
      all_lengths_(opt.all_lengths),
      fib_(std::move(fib)),
      idx_(),
      tree_(),
      filter_(opt.params, opt.seed) {
  std::vector<unsigned> lengths = fib_.distinct_lengths();
  idx_ = build_length_index(std::span<const unsigned>(lengths),
                            opt.params.n_bits);
  if (idx_.nonzero_count() > 0) {
    tree_ = opt.tree == TreeKind::balanced
                ? build_balanced(idx_)
                : build_optimal(idx_, opt.weights);
  }
  if (scheme_ == SearchScheme::guided && tree_.root >= 0) {
    unsigned req = required_k(tree_, opt.params.n_bits);
    if (opt.params.k < req)
      throw ConfigError("k >= " + std::to_string(req) +
                        " required (tree height " +
                        std::to_string(traverse_height(tree_)) + " + n_bits " +
                        std::to_string(opt.params.n_bits) + "), got k = " +
                        std::to_string(opt.params.k));
  }
  default_nexthop_ = fib_.default_nexthop();
}

Engine Engine::build(FibTable fib, const EngineOptions& opt) {
  Engine e(std::move(fib), opt);
  // ascending length order; equal lengths keep input order
  std::vector<const FibTable::Entry*> order;
  order.reserve(e.fib_.size());
  for (const auto& entry : e.fib_.entries()) order.push_back(&entry);
  std::stable_sort(order.begin(), order.end(),
                   [](const FibTable::Entry* a, const FibTable::Entry* b) {
                     return a->prefix.plen < b->prefix.plen;
                   });
  const unsigned k = opt.params.k;
  for (const FibTable::Entry* entry : order) {
    if (entry->prefix.plen == 0) continue;  // default route stays out of the BF
    if (e.scheme_ == SearchScheme::guided) {
      e.insert_guided(entry->prefix);
    } else {
      e.filter_.insert_hashes(
          encode_key(entry->prefix.addr, entry->prefix.plen), 1, k);
    }
  }
  return e;
}

Engine Engine::adopt(FibTable fib, const EngineOptions& opt,
                     std::vector<std::uint64_t> words,
                     std::uint64_t set_count) {
  Engine e(std::move(fib), opt);
  e.filter_.restore(std::move(words), set_count);
  return e;
}

void Engine::insert_guided(const Prefix& pref) {
  // best match among strictly shorter, already inserted prefixes
  LookupStats scratch;
  LookupResult bmp = guided_impl(pref.addr, pref.plen, scratch, nullptr);
  unsigned bmp_ix = 0;
  if (!bmp.is_default) bmp_ix = *idx_.index_of(bmp.plen);

  const unsigned k = filter_.params().k;
  const unsigned n = filter_.params().n_bits;
  int node = tree_.root;
  unsigned count_hit = 0;
  while (node >= 0) {
    unsigned node_plen = tree_.nodes[node].plen;
    if (node_plen > pref.plen) {
      node = tree_.nodes[node].left;
    } else if (node_plen == pref.plen) {
      filter_.insert_hashes(encode_key(pref.addr, pref.plen), 1, k);
      break;
    } else {
      Address masked = mask_address(pref.addr, node_plen);
      BaseHash base = filter_.hash_key(encode_key(masked, node_plen));
      filter_.insert_range(base, 1, 1);  // signal right
      ++count_hit;
      filter_.encode_window(base, count_hit, n, bmp_ix);
      node = tree_.nodes[node].right;
    }
  }
}

LookupResult Engine::default_result() const {
  LookupResult r;
  r.path = LookupResult::Path::default_route;
  r.is_default = true;
  r.plen = 0;
  r.nexthop = default_nexthop_;
  return r;
}

LookupResult Engine::match_result(LookupResult::Path path,
                                  const Prefix& p) const {
  LookupResult r;
  r.path = path;
  r.is_default = false;
  r.plen = p.plen;
  r.nexthop = fib_.nexthop_index(p);
  return r;
}

LookupResult Engine::lookup(const Address& a, LookupStats& stats,
                            TraceLog* trace) const {
  if (scheme_ == SearchScheme::guided) return guided_lookup(a, stats, trace);
  return linear_lookup(a, width_, stats, trace);
}

LookupResult Engine::guided_lookup(const Address& a, LookupStats& stats,
                                   TraceLog* trace) const {
  if (scheme_ != SearchScheme::guided)
    throw std::logic_error("engine was built for linear search");
  return guided_impl(a, 0, stats, trace);
}

// cap_plen > 0 restricts the search to lengths strictly below cap_plen
// (used by the build to find the bmp of the prefix being inserted).
LookupResult Engine::guided_impl(const Address& a, unsigned cap_plen,
                                 LookupStats& stats, TraceLog* trace) const {
  KeyCache cache;
  const unsigned k = filter_.params().k;
  const unsigned n = filter_.params().n_bits;

  int node = tree_.root;
  int last_hit = -1;
  unsigned count_hit = 0;
  BaseHash last_base;
  while (node >= 0) {
    unsigned plen = tree_.nodes[node].plen;
    if (cap_plen > 0 && plen >= cap_plen) {
      node = tree_.nodes[node].left;
      continue;
    }
    BaseHash base = cache.get(*this, a, plen, stats);
    bool hit = filter_.probe_range(base, 1, 1, stats);
    if (trace)
      trace->push_back("node /" + std::to_string(plen) +
                       (hit ? ": signal hit -> right" : ": miss -> left"));
    if (hit) {
      ++count_hit;
      last_hit = static_cast<int>(plen);
      last_base = base;
      node = tree_.nodes[node].right;
    } else {
      node = tree_.nodes[node].left;
    }
  }

  if (last_hit < 0) {
    if (trace) trace->push_back("no signal hit: default route");
    return default_result();
  }

  std::uint64_t ix = filter_.decode_window(last_base, count_hit, n, stats);
  const std::uint64_t all_ones = (std::uint64_t{1} << n) - 1;
  if (trace)
    trace->push_back("decode window start=" + std::to_string(count_hit) +
                     " -> ix=" + std::to_string(ix));

  if (ix == all_ones) {
    // the prefix at last_hit itself should be a member
    if (filter_.probe_range(last_base, count_hit + n, k, stats)) {
      Prefix cand{mask_address(a, static_cast<unsigned>(last_hit)),
                  static_cast<unsigned>(last_hit)};
      if (fib_.contains(cand, &stats)) {
        if (trace)
          trace->push_back("sentinel verified: /" + std::to_string(last_hit));
        return match_result(LookupResult::Path::sentinel, cand);
      }
    }
  } else if (ix > 0 && ix < idx_.plens.size() &&
             idx_.plens[ix] < static_cast<unsigned>(last_hit)) {
    unsigned c = idx_.plens[ix];
    BaseHash base_c = cache.get(*this, a, c, stats);
    if (filter_.probe_range(base_c, count_hit + n, k, stats)) {
      Prefix cand{mask_address(a, c), c};
      if (fib_.contains(cand, &stats)) {
        if (trace)
          trace->push_back("decoded bmp verified: /" + std::to_string(c));
        return match_result(LookupResult::Path::decoded, cand);
      }
    }
  }

  // dead end: fall back to the linear scheme below the last hit
  ++stats.defaulted;
  if (trace)
    trace->push_back("dead end: linear fallback below /" +
                     std::to_string(last_hit));
  LookupResult r = linear_scan(a, static_cast<unsigned>(last_hit) - 1, stats,
                               cache, trace);
  r.path = LookupResult::Path::fallback;
  return r;
}

LookupResult Engine::linear_lookup(const Address& a, unsigned from_plen,
                                   LookupStats& stats, TraceLog* trace) const {
  if (from_plen > width_)
    throw std::invalid_argument("from_plen exceeds address width");
  KeyCache cache;
  LookupResult r = linear_scan(a, from_plen, stats, cache, trace);
  if (!r.is_default) r.path = LookupResult::Path::linear;
  return r;
}

LookupResult Engine::linear_scan(const Address& a, unsigned from_plen,
                                 LookupStats& stats, KeyCache& cache,
                                 TraceLog* trace) const {
  const unsigned k = filter_.params().k;
  auto try_length = [&](unsigned c) -> std::optional<LookupResult> {
    BaseHash base = cache.get(*this, a, c, stats);
    if (!filter_.probe_range(base, 1, k, stats)) return std::nullopt;
    Prefix cand{mask_address(a, c), c};
    if (!fib_.contains(cand, &stats)) return std::nullopt;
    if (trace) trace->push_back("linear match: /" + std::to_string(c));
    return match_result(LookupResult::Path::linear, cand);
  };

  if (all_lengths_) {
    for (unsigned c = from_plen; c >= 1; --c)
      if (auto r = try_length(c)) return *r;
  } else {
    const auto& plens = idx_.plens;
    for (auto it = plens.rbegin(); it != plens.rend(); ++it) {
      if (*it == 0 || *it > from_plen) continue;
      if (auto r = try_length(*it)) return *r;
    }
  }
  if (trace) trace->push_back("linear scan exhausted: default route");
  return default_result();
}

}  // namespace lpmbf
