#include "lpmbf/plen_tree.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>

#include "lpmbf/error.hpp"

namespace lpmbf {

std::optional<unsigned> LengthIndex::index_of(unsigned plen) const {
  auto it = std::lower_bound(plens.begin(), plens.end(), plen);
  if (it == plens.end() || *it != plen) return std::nullopt;
  return static_cast<unsigned>(it - plens.begin());
}

unsigned auto_n_bits(std::size_t distinct_nonzero) {
  unsigned n = 1;
  while (((std::uint64_t{1} << n) - 1) < distinct_nonzero + 1) ++n;
  return n;
}

LengthIndex build_length_index(std::span<const unsigned> lengths,
                               unsigned n_bits) {
  std::vector<unsigned> distinct(lengths.begin(), lengths.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  if (!distinct.empty() && distinct.front() == 0)
    distinct.erase(distinct.begin());
  // index 0 and the all-ones value are both reserved
  std::uint64_t capacity = (std::uint64_t{1} << n_bits) - 2;
  if (distinct.size() > capacity)
    throw CapacityError(std::to_string(distinct.size()) +
                        " distinct nonzero lengths exceed capacity " +
                        std::to_string(capacity) + " of a " +
                        std::to_string(n_bits) + "-bit index");
  LengthIndex idx;
  idx.n_bits = n_bits;
  idx.plens.reserve(distinct.size() + 1);
  idx.plens.push_back(0);
  idx.plens.insert(idx.plens.end(), distinct.begin(), distinct.end());
  return idx;
}

LengthIndex build_length_index(std::span<const Prefix> prefixes,
                               unsigned n_bits) {
  std::vector<unsigned> lengths;
  lengths.reserve(prefixes.size());
  for (const Prefix& p : prefixes) lengths.push_back(p.plen);
  return build_length_index(std::span<const unsigned>(lengths), n_bits);
}

LengthTree build_balanced(const LengthIndex& idx) {
  if (idx.nonzero_count() == 0)
    throw std::invalid_argument("no nonzero prefix lengths to build tree");
  LengthTree tree;
  // midpoint recursion over the nonzero lengths
  std::function<int(int, int)> rec = [&](int lo, int hi) -> int {
    if (lo > hi) return -1;
    int mid = (lo + hi) / 2;
    int node = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({idx.plens[static_cast<std::size_t>(mid) + 1]});
    tree.nodes[node].left = rec(lo, mid - 1);
    tree.nodes[node].right = rec(mid + 1, hi);
    return node;
  };
  tree.root = rec(0, static_cast<int>(idx.nonzero_count()) - 1);
  return tree;
}

LengthTree build_optimal(const LengthIndex& idx,
                         std::span<const double> weights) {
  const int n = static_cast<int>(idx.nonzero_count());
  if (n == 0)
    throw std::invalid_argument("no nonzero prefix lengths to build tree");
  if (static_cast<int>(weights.size()) != n)
    throw std::invalid_argument("weight count does not match length count");
  double total = 0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("negative weight");
    total += w;
  }
  if (total == 0) throw std::invalid_argument("weights are all zero");

  // prefix sums, 1-based
  std::vector<double> wsum(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 1; i <= n; ++i) wsum[i] = wsum[i - 1] + weights[i - 1];
  auto W = [&](int i, int j) { return wsum[j] - wsum[i - 1]; };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(
      static_cast<std::size_t>(n) + 2,
      std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
  std::vector<std::vector<int>> root(
      static_cast<std::size_t>(n) + 2,
      std::vector<int>(static_cast<std::size_t>(n) + 1, 0));

  for (int i = 1; i <= n; ++i) {
    cost[i][i] = W(i, i);
    root[i][i] = i;
  }
  for (int len = 2; len <= n; ++len) {
    for (int i = 1; i + len - 1 <= n; ++i) {
      int j = i + len - 1;
      double best = inf;
      int best_r = i;
      int lo = root[i][j - 1];
      int hi = root[i + 1][j];
      for (int r = lo; r <= hi; ++r) {
        double left = r > i ? cost[i][r - 1] : 0.0;
        double right = r < j ? cost[r + 1][j] : 0.0;
        double c = left + right;
        if (c < best) {
          best = c;
          best_r = r;
        }
      }
      cost[i][j] = best + W(i, j);
      root[i][j] = best_r;
    }
  }

  LengthTree tree;
  std::function<int(int, int)> rec = [&](int i, int j) -> int {
    if (i > j) return -1;
    int r = root[i][j];
    int node = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({idx.plens[static_cast<std::size_t>(r)]});
    tree.nodes[node].left = rec(i, r - 1);
    tree.nodes[node].right = rec(r + 1, j);
    return node;
  };
  tree.root = rec(1, n);
  return tree;
}

unsigned traverse_height(const LengthTree& tree) {
  std::function<unsigned(int)> rec = [&](int node) -> unsigned {
    if (node < 0) return 0;
    return 1 + std::max(rec(tree.nodes[node].left),
                        rec(tree.nodes[node].right));
  };
  return rec(tree.root);
}

std::vector<unsigned> in_order(const LengthTree& tree) {
  std::vector<unsigned> out;
  std::function<void(int)> rec = [&](int node) {
    if (node < 0) return;
    rec(tree.nodes[node].left);
    out.push_back(tree.nodes[node].plen);
    rec(tree.nodes[node].right);
  };
  rec(tree.root);
  return out;
}

std::string render_text(const LengthTree& tree) {
  std::ostringstream os;
  std::function<void(int, int)> rec = [&](int node, int depth) {
    if (node < 0) return;
    rec(tree.nodes[node].right, depth + 1);
    for (int i = 0; i < depth; ++i) os << "    ";
    os << "/" << tree.nodes[node].plen << "\n";
    rec(tree.nodes[node].left, depth + 1);
  };
  rec(tree.root, 0);
  return os.str();
}

std::string render_dot(const LengthTree& tree) {
  std::ostringstream os;
  os << "digraph plen_tree {\n  node [shape=circle];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i)
    os << "  n" << i << " [label=\"/" << tree.nodes[i].plen << "\"];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.nodes[i].left >= 0)
      os << "  n" << i << " -> n" << tree.nodes[i].left << " [label=\"L\"];\n";
    if (tree.nodes[i].right >= 0)
      os << "  n" << i << " -> n" << tree.nodes[i].right
         << " [label=\"R\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace lpmbf
