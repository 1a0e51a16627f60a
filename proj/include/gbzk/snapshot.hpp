#pragma once

#include <cstdint>
#include <string>

#include "gbzk/field.hpp"

namespace gbzk {

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Header: "GBZK", u32 version, u32 nx, u32 ny, then f64 lx, ly, a, t; payload is
/// nx * ny f64 samples, y outer. Everything little-endian.
struct Snapshot {
  RealField2D field;
  double a = 0.0;
  double t = 0.0;
};

std::string encode_snapshot(const Snapshot& s);
Snapshot decode_snapshot(const std::string& bytes);

void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

}  // namespace gbzk
