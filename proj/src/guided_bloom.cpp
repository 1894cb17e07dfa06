#include "lpmbf/guided_bloom.hpp"

#include <bit>

#include "lpmbf/error.hpp"

namespace lpmbf {

void FilterParams::validate() const {
  if (m < 1 || m > (std::uint64_t{1} << 40))
    throw std::invalid_argument("filter size m out of range [1, 2^40]");
  if (k < 1) throw std::invalid_argument("hash count k must be >= 1");
  if (n_bits < 1 || n_bits >= k)
    throw std::invalid_argument("decode-window width must satisfy 1 <= n < k");
}

GuidedFilter::GuidedFilter(FilterParams params, HashSeed seed)
    : params_(params), seed_(seed) {
  params_.validate();  // before sizing the bit vector
  words_.assign((params.m + 63) / 64, 0);
}

void GuidedFilter::check_range(unsigned first, unsigned last) const {
  if (first < 1 || last > params_.k)
    throw std::invalid_argument("hash ordinal range [" +
                                std::to_string(first) + ", " +
                                std::to_string(last) + "] outside [1, k]");
}

void GuidedFilter::insert_range(const BaseHash& base, unsigned first,
                                unsigned last) {
  if (first > last) return;  // empty subset
  check_range(first, last);
  for (unsigned i = first; i <= last; ++i)
    set_bit(index_for(base, i, params_.m));
}

bool GuidedFilter::probe_range(const BaseHash& base, unsigned first,
                               unsigned last, LookupStats& stats) const {
  if (first > last) return true;
  check_range(first, last);
  for (unsigned i = first; i <= last; ++i) {
    ++stats.bit_probes;
    if (!test_bit(index_for(base, i, params_.m))) return false;
  }
  return true;
}

void GuidedFilter::encode_window(const BaseHash& base, unsigned start,
                                 unsigned n, std::uint64_t value) {
  if (n < 1 || start < 1 || start + n - 1 > params_.k)
    throw std::invalid_argument("encode window exceeds k");
  if (value >> n)
    throw std::invalid_argument("window value needs more than n bits");
  for (unsigned j = 0; j < n; ++j)
    if ((value >> j) & 1) set_bit(index_for(base, start + j, params_.m));
}

std::uint64_t GuidedFilter::decode_window(const BaseHash& base, unsigned start,
                                          unsigned n,
                                          LookupStats& stats) const {
  if (n < 1 || start < 1 || start + n - 1 > params_.k)
    throw std::invalid_argument("decode window exceeds k");
  std::uint64_t value = 0;
  for (unsigned j = 0; j < n; ++j) {
    ++stats.bit_probes;
    if (test_bit(index_for(base, start + j, params_.m)))
      value |= std::uint64_t{1} << j;
  }
  return value;
}

void GuidedFilter::restore(std::vector<std::uint64_t> words,
                           std::uint64_t set_count) {
  if (words.size() != (params_.m + 63) / 64)
    throw std::invalid_argument("snapshot word count does not match m");
  std::uint64_t pop = 0;
  for (std::uint64_t w : words) pop += std::popcount(w);
  if (pop != set_count)
    throw std::invalid_argument("snapshot set_count does not match popcount");
  words_ = std::move(words);
  set_count_ = set_count;
}

}  // namespace lpmbf
