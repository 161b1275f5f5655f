#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace gourds {

// Axial coordinate of a hexagonal cell. The plane embedding is
// position(q, r) = q * (1, 0) + r * (1/2, sqrt(3)/2).
struct HexCoord {
  int q = 0;
  int r = 0;

  friend constexpr auto operator<=>(const HexCoord&, const HexCoord&) = default;

  constexpr HexCoord operator+(const HexCoord& o) const { return {q + o.q, r + o.r}; }
  constexpr HexCoord operator-(const HexCoord& o) const { return {q - o.q, r - o.r}; }
};

inline std::ostream& operator<<(std::ostream& os, const HexCoord& c) {
  return os << '(' << c.q << ',' << c.r << ')';
}

// Neighbour offsets, in the fixed order used everywhere.
inline constexpr std::array<HexCoord, 6> kNeighborOffsets{{
    {+1, 0}, {-1, 0}, {0, +1}, {0, -1}, {+1, -1}, {-1, +1}}};

// The same six offsets in counterclockwise angular order (0, 60, ..., 300 degrees).
inline constexpr std::array<HexCoord, 6> kAngularOffsets{{
    {+1, 0}, {0, +1}, {-1, +1}, {-1, 0}, {0, -1}, {+1, -1}}};

constexpr std::array<HexCoord, 6> neighbors(HexCoord c) {
  std::array<HexCoord, 6> out{};
  for (std::size_t i = 0; i < 6; ++i) out[i] = c + kNeighborOffsets[i];
  return out;
}

constexpr bool is_unit_offset(HexCoord d) {
  for (const auto& n : kNeighborOffsets)
    if (n == d) return true;
  return false;
}

constexpr bool adjacent(HexCoord a, HexCoord b) { return is_unit_offset(b - a); }

// Hex (graph) distance on the infinite lattice.
constexpr int lattice_distance(HexCoord a, HexCoord b) {
  const int dq = a.q - b.q, dr = a.r - b.r, ds = -dq - dr;
  auto ab = [](int v) { return v < 0 ? -v : v; };
  return (ab(dq) + ab(dr) + ab(ds)) / 2;
}

// Embedding scaled to integers: x2 = 2 * x, yr = y / (sqrt(3)/2).
// Cross products in this frame have the sign of the true cross product.
struct Scaled {
  long long x2;
  long long yr;
};

constexpr Scaled scaled(HexCoord c) { return {2LL * c.q + c.r, c.r}; }

// Sign-correct (up to the positive factor sqrt(3)) cross product of (b - a) x (c - a).
constexpr long long cross(HexCoord a, HexCoord b, HexCoord c) {
  const Scaled pa = scaled(a), pb = scaled(b), pc = scaled(c);
  return (pb.x2 - pa.x2) * (pc.yr - pa.yr) - (pb.yr - pa.yr) * (pc.x2 - pa.x2);
}

// Rotation by 60 degrees counterclockwise about the origin and reflection
// across the q axis; together they generate the 12 lattice symmetries.
constexpr HexCoord rotate60(HexCoord c) { return {-c.r, c.q + c.r}; }
constexpr HexCoord reflect(HexCoord c) { return {c.q + c.r, -c.r}; }

}  // namespace gourds

template <>
struct std::hash<gourds::HexCoord> {
  std::size_t operator()(const gourds::HexCoord& c) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.q)) << 32) ^
                                      static_cast<std::uint32_t>(c.r));
  }
};
