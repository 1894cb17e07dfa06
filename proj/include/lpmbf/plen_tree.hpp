#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpmbf/addr.hpp"

namespace lpmbf {

// Ascending array of distinct prefix lengths; index 0 is the default route
// (length 0), the all-ones n_bits value is reserved as the sentinel.
struct LengthIndex {
  std::vector<unsigned> plens;  // plens[0] == 0
  unsigned n_bits = 0;

  std::size_t nonzero_count() const { return plens.size() - 1; }

  // Position of plen in plens, or nullopt.
  std::optional<unsigned> index_of(unsigned plen) const;
};

LengthIndex build_length_index(std::span<const Prefix> prefixes,
                               unsigned n_bits);
LengthIndex build_length_index(std::span<const unsigned> lengths,
                               unsigned n_bits);

// Smallest n with 2^n - 1 >= count of distinct nonzero lengths.
unsigned auto_n_bits(std::size_t distinct_nonzero);

// BST over the nonzero lengths; nodes referenced by index, -1 = none.
struct LengthTree {
  struct Node {
    unsigned plen = 0;
    int left = -1;
    int right = -1;
  };
  std::vector<Node> nodes;
  int root = -1;
};

LengthTree build_balanced(const LengthIndex& idx);

// Knuth O(n^2) optimal BST minimizing sum of w_i * depth(i); ties broken
// toward the smaller root index.
LengthTree build_optimal(const LengthIndex& idx,
                         std::span<const double> weights);

// Max node count on any root-to-leaf path.
unsigned traverse_height(const LengthTree& tree);

std::vector<unsigned> in_order(const LengthTree& tree);

std::string render_text(const LengthTree& tree);
std::string render_dot(const LengthTree& tree);

}  // namespace lpmbf
