#include "gbzk/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "gbzk/config.hpp"
#include "gbzk/error.hpp"

namespace gbzk {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 3 * 4 + 4 * 8;

template <class T>
void put_le(std::string& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(const std::string& in, std::size_t& pos) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

std::string encode_snapshot(const Snapshot& s) {
  const GridSpec& g = s.field.grid;
  if (s.field.samples.size() != g.size()) throw SizeMismatch("snapshot: sample count does not match the grid");
  std::string out;
  out.reserve(kHeaderBytes + 8 * g.size());
  out.append("GBZK", 4);
  put_le<std::uint32_t>(out, kSnapshotVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny()));
  put_le<double>(out, g.lx());
  put_le<double>(out, g.ly());
  put_le<double>(out, s.a);
  put_le<double>(out, s.t);
  for (double v : s.field.samples) put_le<double>(out, v);
  return out;
}

Snapshot decode_snapshot(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes) throw FormatError("snapshot: truncated header");
  if (bytes.compare(0, 4, "GBZK") != 0) throw FormatError("snapshot: bad magic");
  std::size_t pos = 4;
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kSnapshotVersion) throw FormatError("snapshot: unsupported version " + std::to_string(version));
  const auto nx = get_le<std::uint32_t>(bytes, pos);
  const auto ny = get_le<std::uint32_t>(bytes, pos);
  const double lx = get_le<double>(bytes, pos);
  const double ly = get_le<double>(bytes, pos);
  Snapshot s;
  s.a = get_le<double>(bytes, pos);
  s.t = get_le<double>(bytes, pos);
  GridSpec g;
  try {
    g = make_grid(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("snapshot: invalid grid in header: ") + e.what());
  }
  const std::size_t need = kHeaderBytes + 8 * g.size();
  if (bytes.size() < need) throw FormatError("snapshot: truncated payload");
  if (bytes.size() > need) throw FormatError("snapshot: trailing bytes after payload");
  s.field = RealField2D(g);
  for (double& v : s.field.samples) v = get_le<double>(bytes, pos);
  return s;
}

void write_snapshot(const std::string& path, const Snapshot& s) { write_text_file(path, encode_snapshot(s)); }

Snapshot read_snapshot(const std::string& path) { return decode_snapshot(read_text_file(path)); }

}  // namespace gbzk
