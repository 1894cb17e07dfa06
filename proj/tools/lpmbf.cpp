// Command-line front end: build, lookup, bench, traffic, tree-dump,
// fpp-curve. Exit codes: 0 success, 1 usage/data error, 2 constraint
// violation.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lpmbf/error.hpp"
#include "lpmbf/metrics_bench.hpp"
#include "lpmbf/snapshot.hpp"

using namespace lpmbf;

namespace {

std::uint64_t env_seed() {
  if (const char* s = std::getenv("LPMBF_SEED")) {
    return std::strtoull(s, nullptr, 0);
  }
  return kDefaultSeed.a;
}

struct CommonOpts {
  unsigned width = 32;
  std::uint64_t seed_a = env_seed();
  std::uint64_t seed_b = kDefaultSeed.b;

  HashSeed seed() const { return {seed_a, seed_b}; }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--width", c.width, "address width in bits (32 or 128)")
      ->check(CLI::IsMember({32, 128}))
      ->capture_default_str();
  cmd->add_option("--seed-a", c.seed_a,
                  "hash seed a (default: $LPMBF_SEED or fixed constant)")
      ->capture_default_str();
  cmd->add_option("--seed-b", c.seed_b, "hash seed b")->capture_default_str();
}

struct FilterOpts {
  double bits_per_key = 28.75;  // paper-scale guided default
  std::uint64_t m = 0;          // wins over bits_per_key when set
  unsigned k = 0;               // 0 = auto
  unsigned n_bits = 0;          // 0 = auto from distinct lengths
  double fpp = 1e-4;            // linear baseline sizing target
};

void add_filter(CLI::App* cmd, FilterOpts& f) {
  cmd->add_option("--m", f.m, "bit vector size in bits (overrides "
                              "--bits-per-key)");
  cmd->add_option("--bits-per-key", f.bits_per_key,
                  "bit vector size per table entry")
      ->capture_default_str();
  cmd->add_option("--k", f.k, "hash function count (default: minimum for "
                              "guided, fpp-optimal for linear)");
  cmd->add_option("--n-bits", f.n_bits,
                  "decode-window width (default: smallest n with 2^n-1 >= "
                  "distinct nonzero lengths)");
  cmd->add_option("--fpp", f.fpp,
                  "false-positive target sizing the linear baseline")
      ->capture_default_str();
}

struct TreeOpts {
  std::string kind = "balanced";
  double alpha = 0.5;
  std::string traffic = "frequency";  // traffic mix feeding optimal weights
};

void add_tree(CLI::App* cmd, TreeOpts& t) {
  cmd->add_option("--tree", t.kind, "search tree shape")
      ->check(CLI::IsMember({"balanced", "optimal"}))
      ->capture_default_str();
  cmd->add_option("--alpha", t.alpha,
                  "optimal-tree blend: alpha*traffic share + (1-alpha)/N")
      ->capture_default_str();
  cmd->add_option("--tree-traffic", t.traffic,
                  "traffic mix assumed for optimal-tree weights")
      ->check(CLI::IsMember({"random", "address-space", "frequency"}))
      ->capture_default_str();
}

std::vector<double> tree_weights(const FibTable& table, const LengthIndex& idx,
                                 const TreeOpts& t) {
  std::vector<double> counts(idx.nonzero_count(), 0.0);
  for (const auto& e : table.entries()) {
    if (e.prefix.plen == 0) continue;
    auto pos = idx.index_of(e.prefix.plen);
    counts[*pos - 1] += 1.0;
  }
  double total = 0;
  std::vector<double> share(counts.size(), 0.0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    share[i] = counts[i];
    if (t.traffic != "frequency")
      share[i] *= std::exp2(-static_cast<double>(idx.plens[i + 1]));
    total += share[i];
  }
  std::vector<double> w(counts.size(), 0.0);
  double uniform = 1.0 / static_cast<double>(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    w[i] = t.alpha * (share[i] / total) + (1.0 - t.alpha) * uniform;
  return w;
}

// Resolve the effective engine options for one scheme against a table.
EngineOptions resolve(const FibTable& table, SearchScheme scheme,
                      const FilterOpts& f, const TreeOpts& t,
                      const CommonOpts& c, bool all_lengths) {
  EngineOptions opt;
  opt.scheme = scheme;
  opt.seed = c.seed();
  opt.all_lengths = all_lengths;

  auto lengths = table.distinct_lengths();
  std::size_t nonzero = lengths.size();
  if (!lengths.empty() && lengths.front() == 0) --nonzero;
  unsigned n_bits = f.n_bits ? f.n_bits : auto_n_bits(nonzero);
  opt.params.n_bits = n_bits;

  LengthIndex idx =
      build_length_index(std::span<const unsigned>(lengths), n_bits);
  opt.tree = t.kind == "balanced" ? TreeKind::balanced : TreeKind::optimal;
  if (opt.tree == TreeKind::optimal) opt.weights = tree_weights(table, idx, t);

  if (scheme == SearchScheme::guided) {
    LengthTree tree = opt.tree == TreeKind::balanced
                          ? build_balanced(idx)
                          : build_optimal(idx, opt.weights);
    unsigned req = Engine::required_k(tree, n_bits);
    opt.params.k = f.k ? f.k : req;
    opt.params.m =
        f.m ? f.m
            : static_cast<std::uint64_t>(
                  std::ceil(f.bits_per_key * static_cast<double>(table.size())));
  } else {
    BfSizing s = optimal_bf_params(table.size(), f.fpp);
    opt.params.k = f.k ? f.k : s.k;
    opt.params.m = f.m ? f.m : s.m;
    if (opt.params.n_bits >= opt.params.k)
      opt.params.n_bits = opt.params.k - 1;  // window unused by linear search
  }
  return opt;
}

void echo_config(const EngineOptions& opt, const FibTable& table) {
  std::cout << "# scheme=" << (opt.scheme == SearchScheme::guided ? "guided"
                                                                  : "linear")
            << " width=" << table.width() << " entries=" << table.size()
            << " m=" << opt.params.m << " k=" << opt.params.k
            << " n_bits=" << opt.params.n_bits << " seed_a=" << opt.seed.a
            << " seed_b=" << opt.seed.b
            << " tree=" << (opt.tree == TreeKind::balanced ? "balanced"
                                                           : "optimal")
            << " all_lengths=" << (opt.all_lengths ? 1 : 0) << "\n";
}

int cmd_build(const std::string& table_path, const CommonOpts& c,
              const FilterOpts& f, const TreeOpts& t,
              const std::string& scheme_name, const std::string& out,
              bool fib_filter) {
  FibTable::LoadReport rep;
  FibTable table = FibTable::load_file(table_path, c.width, &rep);
  if (rep.non_canonical)
    std::cerr << "warning: " << rep.non_canonical
              << " non-canonical prefixes were masked\n";
  SearchScheme scheme = scheme_name == "guided" ? SearchScheme::guided
                                                : SearchScheme::linear;
  EngineOptions opt = resolve(table, scheme, f, t, c, false);
  echo_config(opt, table);
  Engine engine = Engine::build(table, opt);

  unsigned height = traverse_height(engine.tree());
  std::cout << "height=" << height
            << " required_k=" << height + opt.params.n_bits
            << " fill=" << engine.filter().fill_ratio() << " size_mb="
            << static_cast<double>(opt.params.m) / 8.0 / 1e6 << "\n";

  if (fib_filter) {
    unsigned w_bits = 1;
    while (((std::uint64_t{1} << w_bits) - 2) < table.nexthop_count())
      ++w_bits;
    FibFilterParams fp{opt.params.m, w_bits + 10, w_bits};
    FibFilter ff = FibFilter::build(table, fp, c.seed());
    std::cout << "fib_filter: w_bits=" << w_bits << " k=" << fp.k
              << " fill=" << ff.filter().fill_ratio() << "\n";
  }

  if (!out.empty()) {
    save_snapshot(out, engine, c.width);
    std::cout << "snapshot written: " << out << "\n";
  }
  return 0;
}

int cmd_lookup(const std::string& table_path, const CommonOpts& c,
               const FilterOpts& f, const TreeOpts& t,
               const std::string& scheme_name, const std::string& snapshot,
               const std::string& addr_text) {
  FibTable table = FibTable::load_file(table_path, c.width);
  SearchScheme scheme = scheme_name == "guided" ? SearchScheme::guided
                                                : SearchScheme::linear;
  Address a = parse_address(addr_text, c.width);

  EngineOptions opt = resolve(table, scheme, f, t, c, false);
  Engine engine = [&] {
    if (snapshot.empty()) return Engine::build(table, opt);
    Snapshot s = load_snapshot(snapshot);
    if (s.width != c.width)
      throw ConfigError("snapshot width does not match --width");
    opt.params = s.params;
    opt.seed = s.seed;
    opt.scheme = s.scheme;
    return Engine::adopt(table, opt, std::move(s.words), s.set_count);
  }();
  echo_config(opt, table);

  LookupStats stats;
  TraceLog trace;
  LookupResult r = engine.lookup(a, stats, &trace);
  for (const auto& line : trace) std::cout << "  " << line << "\n";
  if (r.is_default) {
    std::cout << format_address(a) << " -> default";
  } else {
    Prefix p{mask_address(a, r.plen), r.plen};
    std::cout << format_address(a) << " -> " << format_prefix(p);
  }
  if (r.nexthop)
    std::cout << " via " << engine.fib().nexthop_name(*r.nexthop);
  std::cout << "\nstats: bit_probes=" << stats.bit_probes
            << " hash_evals=" << stats.hash_evals
            << " fib_lookups=" << stats.fib_lookups
            << " defaulted=" << stats.defaulted << "\n";
  return 0;
}

int cmd_bench(const std::string& table_path, const CommonOpts& c,
              const FilterOpts& f, const TreeOpts& t,
              std::vector<std::string> schemes,
              std::vector<std::string> patterns, std::uint64_t count,
              std::uint64_t seed, bool all_lengths, bool hosts_zero,
              const std::string& out) {
  FibTable table = FibTable::load_file(table_path, c.width);
  std::ostringstream rows;
  for (const std::string& scheme_name : schemes) {
    SearchScheme scheme = scheme_name == "guided" ? SearchScheme::guided
                                                  : SearchScheme::linear;
    EngineOptions opt = resolve(table, scheme, f, t, c, all_lengths);
    echo_config(opt, table);
    for (const std::string& pat : patterns) {
      TrafficSpec spec;
      spec.pattern = parse_pattern(pat);
      spec.count = count;
      spec.seed = seed;
      spec.width = c.width;
      spec.hosts_zero = hosts_zero;
      Report r = run_experiment(table, opt, spec);
      rows << r.csv_row() << "\n";
      std::cout << r.csv_row() << "\n";
    }
  }
  if (!out.empty()) {
    bool fresh = !std::ifstream(out).good();
    std::ofstream os(out, std::ios::app);
    if (!os) throw ParseError("cannot open CSV output: " + out);
    if (fresh) os << Report::csv_header() << "\n";
    os << rows.str();
  }
  return 0;
}

int cmd_traffic(const std::string& table_path, const CommonOpts& c,
                const std::string& pattern, std::uint64_t count,
                std::uint64_t seed, bool hosts_zero, const std::string& out) {
  TrafficSpec spec;
  spec.pattern = parse_pattern(pattern);
  spec.count = count;
  spec.seed = seed;
  spec.width = c.width;
  spec.hosts_zero = hosts_zero;
  std::optional<FibTable> table;
  if (spec.pattern != TrafficPattern::random)
    table = FibTable::load_file(table_path, c.width);
  TrafficGen gen(spec, table ? &*table : nullptr);
  std::cout << "# pattern=" << pattern << " count=" << count
            << " seed=" << seed << " width=" << c.width << "\n";
  if (out.empty()) {
    for (std::uint64_t i = 0; i < count; ++i)
      std::cout << format_address(gen.next()) << "\n";
  } else {
    write_traffic(out, gen, count);
  }
  return 0;
}

int cmd_tree_dump(const std::string& table_path, const CommonOpts& c,
                  const FilterOpts& f, const TreeOpts& t, bool dot) {
  FibTable table = FibTable::load_file(table_path, c.width);
  auto lengths = table.distinct_lengths();
  std::size_t nonzero = lengths.size();
  if (!lengths.empty() && lengths.front() == 0) --nonzero;
  unsigned n_bits = f.n_bits ? f.n_bits : auto_n_bits(nonzero);
  LengthIndex idx =
      build_length_index(std::span<const unsigned>(lengths), n_bits);
  LengthTree tree = t.kind == "balanced"
                        ? build_balanced(idx)
                        : build_optimal(idx, tree_weights(table, idx, t));
  std::cout << (dot ? render_dot(tree) : render_text(tree));
  std::cout << (dot ? "" : "height=" + std::to_string(traverse_height(tree)) +
                               "\n");
  return 0;
}

int cmd_fpp_curve(std::uint64_t n, std::uint64_t m, double fpp, unsigned k_min,
                  unsigned k_max, std::uint64_t probes, std::uint64_t seed) {
  if (m == 0) m = optimal_bf_params(n, fpp).m;
  std::vector<unsigned> ks;
  for (unsigned k = k_min; k <= k_max; ++k) ks.push_back(k);
  auto rows = fpp_curve(n, m, ks, probes, seed);
  std::cout << "k,theoretical_fpp,empirical_fpp,fill\n";
  for (const auto& r : rows)
    std::cout << r.k << ',' << r.theoretical << ',' << r.empirical << ','
              << r.fill << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guided Bloom filter longest-prefix-match engine"};
  app.require_subcommand(1);

  CommonOpts common;
  FilterOpts filter;
  TreeOpts tree;

  // build
  auto* build = app.add_subcommand("build", "build a filter from a table");
  std::string table_path, out_path, scheme_name = "guided";
  bool fib_filter = false;
  build->add_option("--table", table_path, "FIB table file")->required();
  build->add_option("--scheme", scheme_name, "search scheme")
      ->check(CLI::IsMember({"guided", "linear"}))
      ->capture_default_str();
  build->add_option("--out", out_path, "snapshot output path");
  build->add_flag("--fib-filter", fib_filter,
                  "also build the experimental next-hop filter");
  add_common(build, common);
  add_filter(build, filter);
  add_tree(build, tree);

  // lookup
  auto* lookup = app.add_subcommand("lookup", "trace a single address");
  std::string lookup_table, lookup_snapshot, lookup_scheme = "guided";
  std::string addr_text;
  lookup->add_option("--table", lookup_table, "FIB table file")->required();
  lookup->add_option("--snapshot", lookup_snapshot,
                     "reuse a previously built filter");
  lookup->add_option("--scheme", lookup_scheme, "search scheme")
      ->check(CLI::IsMember({"guided", "linear"}))
      ->capture_default_str();
  lookup->add_option("address", addr_text, "destination address")->required();
  add_common(lookup, common);
  add_filter(lookup, filter);
  add_tree(lookup, tree);

  // bench
  auto* bench = app.add_subcommand("bench", "run the experiment matrix");
  std::string bench_table, bench_out;
  std::vector<std::string> bench_schemes{"guided", "linear"};
  std::vector<std::string> bench_patterns{"random", "address-space",
                                          "frequency"};
  std::uint64_t bench_count = 100000, bench_seed = 1;
  bool bench_all_lengths = false, bench_hosts_zero = false;
  bench->add_option("--table", bench_table, "FIB table file")->required();
  bench->add_option("--schemes", bench_schemes, "schemes to run")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--traffic", bench_patterns, "traffic patterns to run")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--count", bench_count, "packets per experiment")
      ->capture_default_str();
  bench->add_option("--seed", bench_seed, "traffic seed")
      ->capture_default_str();
  bench->add_flag("--all-lengths", bench_all_lengths,
                  "paper-literal linear loop over every integer length");
  bench->add_flag("--hosts-zero", bench_hosts_zero,
                  "emit prefixes themselves as traffic (no host bits)");
  bench->add_option("--out", bench_out, "CSV file to append rows to");
  add_common(bench, common);
  add_filter(bench, filter);
  add_tree(bench, tree);

  // traffic
  auto* traffic = app.add_subcommand("traffic", "generate a traffic file");
  std::string traffic_table, traffic_out, traffic_pattern = "random";
  std::uint64_t traffic_count = 100000, traffic_seed = 1;
  bool traffic_hosts_zero = false;
  traffic->add_option("--table", traffic_table,
                      "FIB table file (patterns 2 and 3)");
  traffic->add_option("--pattern", traffic_pattern, "traffic pattern")
      ->check(CLI::IsMember({"random", "address-space", "frequency"}))
      ->capture_default_str();
  traffic->add_option("--count", traffic_count, "addresses to generate")
      ->capture_default_str();
  traffic->add_option("--seed", traffic_seed, "stream seed")
      ->capture_default_str();
  traffic->add_flag("--hosts-zero", traffic_hosts_zero,
                    "emit prefixes themselves (no host bits)");
  traffic->add_option("--out", traffic_out, "output file (default stdout)");
  add_common(traffic, common);

  // tree-dump
  auto* tree_dump = app.add_subcommand("tree-dump",
                                       "render the prefix-length tree");
  std::string tree_table;
  bool tree_dot = false;
  tree_dump->add_option("--table", tree_table, "FIB table file")->required();
  tree_dump->add_flag("--dot", tree_dot, "emit DOT instead of text");
  add_common(tree_dump, common);
  add_filter(tree_dump, filter);
  add_tree(tree_dump, tree);

  // fpp-curve
  auto* fpp = app.add_subcommand("fpp-curve",
                                 "theoretical vs empirical false positives");
  std::uint64_t fpp_n = 749362, fpp_m = 0, fpp_probes = 100000, fpp_seed = 1;
  double fpp_target = 1e-4;
  unsigned fpp_kmin = 4, fpp_kmax = 16;
  fpp->add_option("--n", fpp_n, "element count")->capture_default_str();
  fpp->add_option("--m", fpp_m, "bit vector size (default: optimal for "
                                "--fpp)");
  fpp->add_option("--fpp", fpp_target, "false-positive target sizing m")
      ->capture_default_str();
  fpp->add_option("--k-min", fpp_kmin, "")->capture_default_str();
  fpp->add_option("--k-max", fpp_kmax, "")->capture_default_str();
  fpp->add_option("--probes", fpp_probes, "Monte Carlo probe count")
      ->capture_default_str();
  fpp->add_option("--seed", fpp_seed, "")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed())
      return cmd_build(table_path, common, filter, tree, scheme_name,
                       out_path, fib_filter);
    if (lookup->parsed())
      return cmd_lookup(lookup_table, common, filter, tree, lookup_scheme,
                        lookup_snapshot, addr_text);
    if (bench->parsed())
      return cmd_bench(bench_table, common, filter, tree, bench_schemes,
                       bench_patterns, bench_count, bench_seed,
                       bench_all_lengths, bench_hosts_zero, bench_out);
    if (traffic->parsed())
      return cmd_traffic(traffic_table, common, traffic_pattern, traffic_count,
                         traffic_seed, traffic_hosts_zero, traffic_out);
    if (tree_dump->parsed())
      return cmd_tree_dump(tree_table, common, filter, tree, tree_dot);
    if (fpp->parsed())
      return cmd_fpp_curve(fpp_n, fpp_m, fpp_target, fpp_kmin, fpp_kmax,
                           fpp_probes, fpp_seed);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
