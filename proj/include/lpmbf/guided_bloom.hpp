#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lpmbf/addr.hpp"
#include "lpmbf/hash_family.hpp"
#include "lpmbf/stats.hpp"

namespace lpmbf {

struct FilterParams {
  std::uint64_t m = 0;   // bit vector length
  unsigned k = 0;        // number of hash functions
  unsigned n_bits = 0;   // decode-window width

  void validate() const;
};

// Bit vector with k indexed hash functions. Hash ordinal 1 doubles as the
// tree-steering signal; a run of n_bits ordinals forms the decode window
// that encodes a best-match index (least-significant bit first).
class GuidedFilter {
 public:
  GuidedFilter(FilterParams params, HashSeed seed);

  const FilterParams& params() const { return params_; }
  HashSeed seed() const { return seed_; }
  std::uint64_t set_count() const { return set_count_; }
  double fill_ratio() const {
    return static_cast<double>(set_count_) / static_cast<double>(params_.m);
  }

  // Hashes the key bytes; counts one hashing event when stats is given.
  BaseHash hash_key(std::span<const std::uint8_t> key,
                    LookupStats* stats = nullptr) const {
    if (stats) ++stats->hash_evals;
    return base_hash(key, seed_);
  }
  BaseHash hash_key(const EncodedKey& key, LookupStats* stats = nullptr) const {
    return hash_key(key.view(), stats);
  }

  // Set the bits of hash ordinals [first, last]; first > last is a no-op.
  void insert_range(const BaseHash& base, unsigned first, unsigned last);
  void insert_hashes(const EncodedKey& key, unsigned first, unsigned last) {
    insert_range(hash_key(key), first, last);
  }

  // True iff every listed bit is set. Probes in order, short-circuits on the
  // first zero bit; each bit actually tested counts one bit probe.
  bool probe_range(const BaseHash& base, unsigned first, unsigned last,
                   LookupStats& stats) const;
  bool probe_hashes(const EncodedKey& key, unsigned first, unsigned last,
                    LookupStats& stats) const {
    return probe_range(hash_key(key, &stats), first, last, stats);
  }

  // Set the window bits for the 1-bits of value; 0-bits leave the filter
  // untouched.
  void encode_window(const BaseHash& base, unsigned start, unsigned n,
                     std::uint64_t value);

  // Read the n window bits back; always exactly n probes.
  std::uint64_t decode_window(const BaseHash& base, unsigned start, unsigned n,
                              LookupStats& stats) const;

  bool test_bit(std::uint64_t idx) const {
    return (words_[idx >> 6] >> (idx & 63)) & 1;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  // Adopt a previously saved bit vector (snapshot load path).
  void restore(std::vector<std::uint64_t> words, std::uint64_t set_count);

 private:
  void set_bit(std::uint64_t idx) {
    std::uint64_t& w = words_[idx >> 6];
    std::uint64_t bit = std::uint64_t{1} << (idx & 63);
    set_count_ += !(w & bit);
    w |= bit;
  }
  void check_range(unsigned first, unsigned last) const;

  FilterParams params_;
  HashSeed seed_;
  std::vector<std::uint64_t> words_;
  std::uint64_t set_count_ = 0;
};

}  // namespace lpmbf
