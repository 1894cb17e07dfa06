#include "lpmbf/traffic_gen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lpmbf/error.hpp"

namespace lpmbf {

TrafficPattern parse_pattern(const std::string& name) {
  if (name == "random") return TrafficPattern::random;
  if (name == "address-space" || name == "space")
    return TrafficPattern::address_space;
  if (name == "frequency" || name == "freq") return TrafficPattern::frequency;
  throw ParseError("unknown traffic pattern: '" + name + "'");
}

std::string pattern_name(TrafficPattern p) {
  switch (p) {
    case TrafficPattern::random: return "random";
    case TrafficPattern::address_space: return "address-space";
    case TrafficPattern::frequency: return "frequency";
  }
  return "?";
}

TrafficGen::TrafficGen(TrafficSpec spec, const FibTable* table)
    : spec_(spec), rng_(spec.seed) {
  if (spec_.pattern == TrafficPattern::random) return;
  if (!table || table->size() == 0)
    throw std::invalid_argument("table-driven traffic needs a non-empty table");
  if (table->width() != spec_.width)
    throw std::invalid_argument("traffic width does not match table width");

  for (const FibTable::Entry& e : table->entries()) {
    if (e.prefix.plen == 0) continue;  // default route spans no class
    auto it = std::find_if(classes_.begin(), classes_.end(),
                           [&](const Class& c) {
                             return c.plen == e.prefix.plen;
                           });
    if (it == classes_.end()) {
      classes_.push_back({e.prefix.plen, {}});
      it = classes_.end() - 1;
    }
    it->prefixes.push_back(&e.prefix);
  }
  if (classes_.empty())
    throw std::invalid_argument("table has no nonzero-length prefixes");
  std::sort(classes_.begin(), classes_.end(),
            [](const Class& a, const Class& b) { return a.plen < b.plen; });

  // address_space: count * 2^(width - plen); frequency: count. Overlaps are
  // not corrected; weights use raw per-length aggregates.
  long double total = 0;
  std::vector<long double> weights;
  for (const Class& c : classes_) {
    long double w = static_cast<long double>(c.prefixes.size());
    if (spec_.pattern == TrafficPattern::address_space)
      w *= std::exp2l(-static_cast<long double>(c.plen));
    weights.push_back(w);
    total += w;
  }
  long double acc = 0;
  for (long double w : weights) {
    acc += w / total;
    cumulative_.push_back(static_cast<double>(acc));
  }
  cumulative_.back() = 1.0;
}

std::uint64_t TrafficGen::bounded(std::uint64_t n) {
  // rejection sampling keeps the draw unbiased and the stream portable
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = rng_();
  } while (v >= limit);
  return v % n;
}

double TrafficGen::unit() { return (rng_() >> 11) * 0x1.0p-53; }

Address TrafficGen::next() {
  Address a;
  a.width = spec_.width;
  if (spec_.pattern == TrafficPattern::random) {
    if (spec_.width == 32) {
      a.lo = rng_() & 0xFFFFFFFFull;
    } else {
      a.hi = rng_();
      a.lo = rng_();
    }
    return a;
  }

  double u = unit();
  std::size_t ci = static_cast<std::size_t>(
      std::lower_bound(cumulative_.begin(), cumulative_.end(), u) -
      cumulative_.begin());
  const Class& cls = classes_[ci];

  // size-1 reservoir over the class stream
  const Prefix* chosen = cls.prefixes[0];
  for (std::uint64_t i = 2; i <= cls.prefixes.size(); ++i)
    if (bounded(i) == 0) chosen = cls.prefixes[i - 1];

  a = chosen->addr;
  if (!spec_.hosts_zero) {
    unsigned host_bits = spec_.width - chosen->plen;
    if (spec_.width == 32) {
      if (host_bits > 0)
        a.lo |= rng_() & ((std::uint64_t{1} << host_bits) - 1);
    } else {
      if (host_bits > 64) {
        a.lo = rng_();
        a.hi |= rng_() & ((std::uint64_t{1} << (host_bits - 64)) - 1);
      } else if (host_bits > 0) {
        std::uint64_t m = host_bits == 64
                              ? ~std::uint64_t{0}
                              : (std::uint64_t{1} << host_bits) - 1;
        a.lo |= rng_() & m;
      }
    }
  }
  return a;
}

void write_traffic(const std::string& path, TrafficGen& gen,
                   std::uint64_t count) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open traffic file for write: " + path);
  for (std::uint64_t i = 0; i < count; ++i)
    out << format_address(gen.next()) << "\n";
}

std::vector<Address> read_traffic(const std::string& path, unsigned width) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open traffic file: " + path);
  std::vector<Address> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(parse_address(line, width));
  }
  return out;
}

}  // namespace lpmbf
