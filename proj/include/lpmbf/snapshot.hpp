#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpmbf/guided_bloom.hpp"
#include "lpmbf/lpm_engine.hpp"

namespace lpmbf {

// Binary filter snapshot, little-endian throughout:
//   magic "GBFSNP01" | u32 version | u32 width | u64 m | u32 k | u32 n_bits
//   | u64 seed_a | u64 seed_b | u32 scheme (0 guided, 1 linear) | u32 pad
//   | u64 set_count | raw bit vector (m bits, 64-bit words)
struct Snapshot {
  unsigned width = 32;
  FilterParams params;
  HashSeed seed;
  SearchScheme scheme = SearchScheme::guided;
  std::uint64_t set_count = 0;
  std::vector<std::uint64_t> words;
};

void save_snapshot(const std::string& path, const Engine& engine,
                   unsigned width);
Snapshot load_snapshot(const std::string& path);

}  // namespace lpmbf
