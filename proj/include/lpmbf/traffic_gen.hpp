#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lpmbf/addr.hpp"
#include "lpmbf/fib_store.hpp"

namespace lpmbf {

enum class TrafficPattern { random, address_space, frequency };

struct TrafficSpec {
  TrafficPattern pattern = TrafficPattern::random;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  unsigned width = 32;
  bool hosts_zero = false;  // emit the prefixes themselves (no host bits)
};

TrafficPattern parse_pattern(const std::string& name);
std::string pattern_name(TrafficPattern p);

// Seeded sequential address stream. Patterns 2 and 3 pick a length class by
// its analytic weight, then a prefix within the class by single-pass
// size-1 reservoir sampling, then fill host bits uniformly.
class TrafficGen {
 public:
  // table may be null for TrafficPattern::random.
  TrafficGen(TrafficSpec spec, const FibTable* table);

  Address next();
  const TrafficSpec& spec() const { return spec_; }

 private:
  std::uint64_t bits64() { return rng_(); }
  std::uint64_t bounded(std::uint64_t n);
  double unit();

  TrafficSpec spec_;
  std::mt19937_64 rng_;
  struct Class {
    unsigned plen;
    std::vector<const Prefix*> prefixes;
  };
  std::vector<Class> classes_;
  std::vector<double> cumulative_;  // normalized cumulative class weights
};

void write_traffic(const std::string& path, TrafficGen& gen,
                   std::uint64_t count);
std::vector<Address> read_traffic(const std::string& path, unsigned width);

}  // namespace lpmbf
