#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lpmbf/lpm_engine.hpp"
#include "lpmbf/traffic_gen.hpp"

namespace lpmbf {

// Per-packet means of the lookup counters plus a full config echo; one CSV
// row per experiment.
struct Report {
  std::string scheme;
  std::string traffic;
  std::uint64_t m_bits = 0;
  unsigned k = 0;
  unsigned n_bits = 0;
  double fill = 0;
  double bit_probes_pp = 0;
  double hash_evals_pp = 0;
  double fib_lookups_pp = 0;
  double default_rate = 0;
  std::uint64_t packets = 0;
  std::uint64_t seed = 0;

  static std::string csv_header();
  std::string csv_row() const;

  // paper-style decimal megabytes of the bit vector
  double size_mb() const { return static_cast<double>(m_bits) / 8.0 / 1e6; }
};

// Builds the engine once, streams the traffic, accumulates the counters.
Report run_experiment(const FibTable& table, const EngineOptions& opt,
                      const TrafficSpec& traffic);

// One report per filter size m, same scheme/traffic otherwise.
std::vector<Report> utilization_sweep(const FibTable& table,
                                      const EngineOptions& base,
                                      std::span<const std::uint64_t> sizes,
                                      const TrafficSpec& traffic);

// Optimal standard-BF sizing for a false-positive target:
// m = ceil(n ln(1/p) / ln^2 2), k = ceil(log2(1/p)).
struct BfSizing {
  std::uint64_t m = 0;
  unsigned k = 0;
};
BfSizing optimal_bf_params(std::uint64_t n_elems, double fpp);

// Theoretical (1 - e^{-kn/m})^k vs measured false-positive rate from
// inserting n_elems random keys and probing disjoint random keys.
struct FppRow {
  unsigned k = 0;
  double theoretical = 0;
  double empirical = 0;
  double fill = 0;
};
std::vector<FppRow> fpp_curve(std::uint64_t n_elems, std::uint64_t m,
                              std::span<const unsigned> ks,
                              std::uint64_t probe_count, std::uint64_t seed);

}  // namespace lpmbf
