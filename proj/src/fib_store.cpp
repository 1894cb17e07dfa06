#include "lpmbf/fib_store.hpp"

#include <fstream>
#include <sstream>

#include "lpmbf/error.hpp"

namespace lpmbf {

namespace {

std::string key_string(const Prefix& p) {
  EncodedKey key = encode_key(p.addr, p.plen);
  return std::string(reinterpret_cast<const char*>(key.bytes.data()),
                     key.size);
}

// Verification key binding (prefix, next-hop index) for the FIB filter.
std::vector<std::uint8_t> pair_key(const Prefix& p, std::uint32_t index) {
  EncodedKey key = encode_key(p.addr, p.plen);
  std::vector<std::uint8_t> out(key.bytes.begin(),
                                key.bytes.begin() + key.size);
  out.push_back(0xF1);
  out.push_back(static_cast<std::uint8_t>(index));
  out.push_back(static_cast<std::uint8_t>(index >> 8));
  return out;
}

}  // namespace

FibTable::FibTable(unsigned width) : width_(width) {
  if (width != 32 && width != 128)
    throw std::invalid_argument("address width must be 32 or 128");
}

std::uint32_t FibTable::insert(const Prefix& p, std::string_view nexthop) {
  if (p.addr.width != width_)
    throw std::invalid_argument("prefix width does not match table width");
  if (!is_canonical(p.addr, p.plen))
    throw std::invalid_argument("prefix not canonical: " + format_prefix(p));

  std::uint32_t nh;
  std::string name(nexthop);
  auto it = interned_.find(name);
  if (it != interned_.end()) {
    nh = it->second;
  } else {
    nh = static_cast<std::uint32_t>(nexthops_.size());
    nexthops_.push_back(name);
    interned_.emplace(std::move(name), nh);
  }

  std::string key = key_string(p);
  auto [pos, inserted] =
      by_key_.try_emplace(std::move(key),
                          static_cast<std::uint32_t>(entries_.size()));
  if (inserted) {
    entries_.push_back({p, nh});
  } else {
    entries_[pos->second].nexthop = nh;
  }
  return nh;
}

bool FibTable::contains(const Prefix& p, LookupStats* stats) const {
  if (stats) ++stats->fib_lookups;
  return by_key_.count(key_string(p)) != 0;
}

std::optional<std::uint32_t> FibTable::nexthop_index(const Prefix& p) const {
  auto it = by_key_.find(key_string(p));
  if (it == by_key_.end()) return std::nullopt;
  return entries_[it->second].nexthop;
}

std::vector<unsigned> FibTable::distinct_lengths() const {
  std::vector<bool> seen(width_ + 1, false);
  for (const Entry& e : entries_) seen[e.prefix.plen] = true;
  std::vector<unsigned> out;
  for (unsigned l = 0; l <= width_; ++l)
    if (seen[l]) out.push_back(l);
  return out;
}

std::optional<std::uint32_t> FibTable::default_nexthop() const {
  Prefix def{Address{width_, 0, 0}, 0};
  return nexthop_index(def);
}

FibTable::Match FibTable::naive_lmp(const Address& a) const {
  Match best;
  unsigned best_len = 0;
  for (const Entry& e : entries_) {
    if (e.prefix.plen == 0) continue;  // default route handled below
    if (best.found && e.prefix.plen <= best_len) continue;
    if (mask_address(a, e.prefix.plen) == e.prefix.addr) {
      best_len = e.prefix.plen;
      best.found = true;
      best.prefix = e.prefix;
      best.nexthop = e.nexthop;
    }
  }
  if (!best.found) {
    if (auto nh = default_nexthop()) best.nexthop = *nh;
    best.prefix = Prefix{Address{width_, 0, 0}, 0};
  }
  return best;
}

FibTable FibTable::load_stream(std::istream& in, unsigned width,
                               LoadReport* report) {
  FibTable table(width);
  LoadReport rep;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    ++rep.lines;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string pfx, nh;
    if (!(ls >> pfx)) continue;  // blank
    ls >> nh;
    ParsedPrefix parsed;
    try {
      parsed = parse_prefix(pfx, width);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!parsed.was_canonical) ++rep.non_canonical;
    if (nh.empty()) nh = "if" + std::to_string(parsed.prefix.plen);
    table.insert(parsed.prefix, nh);
    ++rep.entries;
  }
  if (report) *report = rep;
  return table;
}

FibTable FibTable::load_file(const std::string& path, unsigned width,
                             LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open table file: " + path);
  return load_stream(in, width, report);
}

FibFilter FibFilter::build(const FibTable& table, const FibFilterParams& params,
                           HashSeed seed) {
  if (params.w_bits < 1 || params.w_bits + 1 > params.k)
    throw std::invalid_argument(
        "fib filter needs w_bits >= 1 and at least one verification hash");
  std::uint64_t capacity = (std::uint64_t{1} << params.w_bits) - 2;
  if (table.nexthop_count() > capacity)
    throw CapacityError(std::to_string(table.nexthop_count()) +
                        " next hops exceed capacity " +
                        std::to_string(capacity) + " of a " +
                        std::to_string(params.w_bits) + "-bit window");

  FibFilter ff(FilterParams{params.m, params.k, params.w_bits}, seed,
               params.w_bits);
  for (const FibTable::Entry& e : table.entries()) {
    EncodedKey key = encode_key(e.prefix.addr, e.prefix.plen);
    BaseHash base = ff.filter_.hash_key(key);
    // stored plus-one so a never-written (all-zero) window reads as absent
    ff.filter_.encode_window(base, 1, params.w_bits, e.nexthop + 1);
    auto vkey = pair_key(e.prefix, e.nexthop);
    ff.filter_.insert_range(ff.filter_.hash_key(vkey), params.w_bits + 1,
                            params.k);
  }
  return ff;
}

std::uint32_t FibFilter::lookup(const FibTable& table, const Prefix& p,
                                LookupStats& stats) const {
  EncodedKey key = encode_key(p.addr, p.plen);
  BaseHash base = filter_.hash_key(key, &stats);
  std::uint64_t decoded = filter_.decode_window(base, 1, w_bits_, stats);
  std::uint64_t all_ones = (std::uint64_t{1} << w_bits_) - 1;

  if (decoded != 0 && decoded != all_ones) {
    std::uint32_t candidate = static_cast<std::uint32_t>(decoded - 1);
    if (candidate < table.nexthop_count()) {
      auto vkey = pair_key(p, candidate);
      if (filter_.probe_range(filter_.hash_key(vkey, &stats), w_bits_ + 1,
                              filter_.params().k, stats))
        return candidate;
    }
  }

  ++stats.defaulted;  // window unusable, ask the exact map
  ++stats.fib_lookups;
  auto exact = table.nexthop_index(p);
  if (!exact) throw std::out_of_range("prefix not in FIB: " + format_prefix(p));
  return *exact;
}

}  // namespace lpmbf
