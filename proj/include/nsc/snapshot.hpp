#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "nsc/field.hpp"

namespace nsc {

/// Flat binary velocity snapshot:
///   "NSCF1" | n1 n2 n3 (u32 LE) | L t (f64 LE) | u1 u2 u3 (f64 LE, x1 fastest)
struct Snapshot {
  VectorField velocity;
  double t = 0.0;
};

inline constexpr std::array<char, 5> snapshot_magic{'N', 'S', 'C', 'F', '1'};

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
                     char((v >> 24) & 0xff)};
  os.write(b, 4);
}

inline void put_f64(std::ostream& os, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = char((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw InvalidArgument("snapshot truncated");
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
         std::uint32_t(b[3]) << 24;
}

inline double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw InvalidArgument("snapshot truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace detail

inline void write_snapshot(std::ostream& os, const VectorField& u, double t) {
  os.write(snapshot_magic.data(), snapshot_magic.size());
  detail::put_u32(os, std::uint32_t(u.grid.n1));
  detail::put_u32(os, std::uint32_t(u.grid.n2));
  detail::put_u32(os, std::uint32_t(u.grid.n3));
  detail::put_f64(os, u.grid.length);
  detail::put_f64(os, t);
  for (const auto& c : u.components)
    for (double v : c.samples) detail::put_f64(os, v);
}

inline void write_snapshot(const std::string& path, const VectorField& u, double t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open snapshot for writing: " + path);
  write_snapshot(os, u, t);
}

/// Reads a snapshot; rejects bad magic, invalid grids, short files and non-finite samples.
inline Snapshot read_snapshot(std::istream& is) {
  std::array<char, 5> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != snapshot_magic) throw InvalidArgument("not an NSCF1 snapshot");
  GridSpec g;
  g.n1 = int(detail::get_u32(is));
  g.n2 = int(detail::get_u32(is));
  g.n3 = int(detail::get_u32(is));
  g.length = detail::get_f64(is);
  const double t = detail::get_f64(is);
  g.validate();
  require(g.n1 <= 4096 && g.n2 <= 4096 && g.n3 <= 4096, "snapshot grid is implausibly large");
  Snapshot snap{VectorField(g), t};
  for (auto& c : snap.velocity.components)
    for (double& v : c.samples) v = detail::get_f64(is);
  require(snap.velocity.finite(), "snapshot contains non-finite samples");
  return snap;
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open snapshot: " + path);
  return read_snapshot(is);
}

}  // namespace nsc
