#include "lpmbf/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "lpmbf/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot layout assumes a little-endian host");

namespace lpmbf {

namespace {

constexpr char kMagic[8] = {'G', 'B', 'F', 'S', 'N', 'P', '0', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw ParseError("truncated snapshot");
  return v;
}

}  // namespace

void save_snapshot(const std::string& path, const Engine& engine,
                   unsigned width) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open snapshot file for write: " + path);
  const GuidedFilter& f = engine.filter();
  out.write(kMagic, 8);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, width);
  put<std::uint64_t>(out, f.params().m);
  put<std::uint32_t>(out, f.params().k);
  put<std::uint32_t>(out, f.params().n_bits);
  put<std::uint64_t>(out, f.seed().a);
  put<std::uint64_t>(out, f.seed().b);
  put<std::uint32_t>(out, engine.scheme() == SearchScheme::guided ? 0 : 1);
  put<std::uint32_t>(out, 0);
  put<std::uint64_t>(out, f.set_count());
  out.write(reinterpret_cast<const char*>(f.words().data()),
            static_cast<std::streamsize>(f.words().size() * 8));
  if (!out) throw ParseError("short write to snapshot file: " + path);
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open snapshot file: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw ParseError("not a filter snapshot: " + path);
  if (get<std::uint32_t>(in) != kVersion)
    throw ParseError("unsupported snapshot version in " + path);
  Snapshot s;
  s.width = get<std::uint32_t>(in);
  s.params.m = get<std::uint64_t>(in);
  s.params.k = get<std::uint32_t>(in);
  s.params.n_bits = get<std::uint32_t>(in);
  s.seed.a = get<std::uint64_t>(in);
  s.seed.b = get<std::uint64_t>(in);
  s.scheme = get<std::uint32_t>(in) == 0 ? SearchScheme::guided
                                         : SearchScheme::linear;
  get<std::uint32_t>(in);  // pad
  s.set_count = get<std::uint64_t>(in);
  std::size_t words = (s.params.m + 63) / 64;
  s.words.resize(words);
  in.read(reinterpret_cast<char*>(s.words.data()),
          static_cast<std::streamsize>(words * 8));
  if (!in) throw ParseError("truncated snapshot: " + path);
  return s;
}

}  // namespace lpmbf
