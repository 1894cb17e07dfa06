#pragma once

#include <cstdint>

namespace lpmbf {

// Per-lookup cost counters, accumulated across packets by the bench harness.
// hash_evals counts base-hash events: one per distinct key hashed within a
// lookup (all k indices derive from that one event). defaulted counts
// packets whose guided search fell back to the linear scan.
struct LookupStats {
  std::uint64_t bit_probes = 0;
  std::uint64_t hash_evals = 0;
  std::uint64_t fib_lookups = 0;
  std::uint64_t defaulted = 0;

  void merge(const LookupStats& o) {
    bit_probes += o.bit_probes;
    hash_evals += o.hash_evals;
    fib_lookups += o.fib_lookups;
    defaulted += o.defaulted;
  }
};

}  // namespace lpmbf
