#pragma once

// Board generators: named fixtures, parametric families, random proper
// boards and exhaustive polyhex enumeration.

#include <random>
#include <set>

#include "gourds/board.hpp"

namespace gourds::boards {

inline Board triangle() { return Board({{0, 0}, {1, 0}, {0, 1}}); }

inline Board row(int k) {
  std::vector<HexCoord> cells;
  for (int i = 0; i < k; ++i) cells.push_back({i, 0});
  return Board(cells);
}

inline Board flower() {
  std::vector<HexCoord> cells{{0, 0}};
  for (const auto& d : kAngularOffsets) cells.push_back(d);
  return Board(cells);
}

inline Board star_of_david() { return Board(star_of_david_cells()); }

// All cells within hex distance `radius` of the origin (19 cells at radius 2).
inline Board hexagon(int radius) {
  std::vector<HexCoord> cells;
  for (int q = -radius; q <= radius; ++q)
    for (int r = -radius; r <= radius; ++r)
      if (lattice_distance({0, 0}, {q, r}) <= radius) cells.push_back({q, r});
  return Board(cells);
}

// Radius-2 hexagon without its centre plus one outside cell: 2-connected,
// odd, Hamiltonian, but with a one-cell hole.
inline Board holed_hexagon() {
  std::vector<HexCoord> cells;
  for (const auto& c : hexagon(2).cells())
    if (c != HexCoord{0, 0}) cells.push_back(c);
  cells.push_back({3, -1});
  return Board(cells);
}

// Two rows of triangles: bottom cells (i,0) for i = 0..n, top cells (i,1)
// for i = 0..n-1. 2n + 1 cells; the left and right halves form the two lobes
// whose contents are exchanged in the quadratic lower-bound family.
inline Board two_lobe(int n) {
  std::vector<HexCoord> cells;
  for (int i = 0; i <= n; ++i) cells.push_back({i, 0});
  for (int i = 0; i < n; ++i) cells.push_back({i, 1});
  return Board(cells);
}

// Zig-zag strip of 2k triangles between rows 0 and 1 with an ear on every
// outer side except the last top one: 4k + 1 cells. Its natural boundary
// cycle (see strip_cycle) has a run of 2k - 2 degree-3 dual nodes.
inline Board strip(int k) {
  std::vector<HexCoord> cells;
  for (int i = 0; i <= k; ++i) cells.push_back({i, 0}), cells.push_back({i, 1});
  for (int i = 0; i < k; ++i) cells.push_back({i + 1, -1});
  for (int i = 0; i + 1 < k; ++i) cells.push_back({i, 2});
  return Board(cells);
}

inline std::vector<HexCoord> strip_cycle(int k) {
  std::vector<HexCoord> h;
  for (int i = 0; i < k; ++i) h.push_back({i, 0}), h.push_back({i + 1, -1});
  h.push_back({k, 0});
  h.push_back({k, 1});
  h.push_back({k - 1, 1});
  for (int i = k - 2; i >= 0; --i) h.push_back({i, 2}), h.push_back({i, 1});
  return h;
}

// Nine cells whose given cycle has a dual tree without any leaf next to a
// degree-2 node: two degree-3 nodes joined through one degree-2 node, each
// carrying two leaves.
inline Board twin_fans() {
  return Board({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {1, -1}, {-1, 1}, {2, -1}, {2, 1}});
}

inline std::vector<HexCoord> twin_fans_cycle() {
  return {{0, 0}, {1, -1}, {1, 0}, {2, -1}, {2, 0}, {2, 1}, {1, 1}, {0, 1}, {-1, 1}};
}

// Random proper board with exactly `cells` cells (odd, >= 3). Grows from a
// triangle by adding cells adjacent to two adjacent board cells, rejecting
// additions that enclose a hole. `spread` in [0,1] biases towards elongated
// shapes (grow near the newest cell) versus compact ones.
inline Board random_proper(int cells, std::uint64_t seed, double spread = 0.3) {
  if (cells < 3 || cells % 2 == 0) throw BoardError("random_proper needs an odd size >= 3");
  std::mt19937_64 rng(seed);
  for (int attempt = 0;; ++attempt) {
    std::vector<HexCoord> body{{0, 0}, {1, 0}, {0, 1}};
    std::set<HexCoord> in(body.begin(), body.end());
    bool stuck = false;
    while (static_cast<int>(body.size()) < cells && !stuck) {
      std::vector<HexCoord> cand;
      std::set<HexCoord> cand_set;
      const std::size_t from = std::uniform_real_distribution<double>(0, 1)(rng) < spread && body.size() > 8
                                   ? body.size() - 8
                                   : 0;
      for (std::size_t bi = from; bi < body.size(); ++bi)
        for (std::size_t k = 0; k < 6; ++k) {
          HexCoord c = body[bi] + kAngularOffsets[k];
          if (in.count(c) || cand_set.count(c)) continue;
          bool edge = false;
          for (std::size_t j = 0; j < 6 && !edge; ++j)
            edge = in.count(c + kAngularOffsets[j]) && in.count(c + kAngularOffsets[(j + 1) % 6]);
          if (edge) cand.push_back(c), cand_set.insert(c);
        }
      std::shuffle(cand.begin(), cand.end(), rng);
      bool added = false;
      for (const auto& c : cand) {
        body.push_back(c);
        if (hole_cells(Board(body)).empty()) {
          in.insert(c);
          added = true;
          break;
        }
        body.pop_back();
      }
      stuck = !added;
    }
    if (stuck) continue;
    Board b(body);
    if (validate_proper(b).proper) return b;
  }
}

// Free polyhexes (up to the 12 lattice symmetries) with 1..max_size cells,
// indexed by size; each shape is in canonical form.
inline std::vector<std::vector<std::vector<HexCoord>>> enumerate_polyhexes(int max_size) {
  std::vector<std::vector<std::vector<HexCoord>>> by_size(static_cast<std::size_t>(max_size) + 1);
  if (max_size < 1) return by_size;
  by_size[1].push_back({{0, 0}});
  for (int s = 2; s <= max_size; ++s) {
    std::set<std::vector<HexCoord>> next;
    for (const auto& shape : by_size[static_cast<std::size_t>(s - 1)]) {
      std::set<HexCoord> in(shape.begin(), shape.end());
      for (const auto& c : shape)
        for (const auto& n : neighbors(c)) {
          if (in.count(n)) continue;
          auto grown = shape;
          grown.push_back(n);
          next.insert(canonical_shape(grown));
        }
    }
    by_size[static_cast<std::size_t>(s)].assign(next.begin(), next.end());
  }
  return by_size;
}

// Proper boards with at most `max_size` cells, one per congruence class.
inline std::vector<Board> proper_boards_up_to(int max_size) {
  std::vector<Board> out;
  auto shapes = enumerate_polyhexes(max_size);
  for (int s = 3; s <= max_size; s += 2)
    for (const auto& shape : shapes[static_cast<std::size_t>(s)]) {
      Board b(shape);
      if (validate_proper(b).proper) out.push_back(std::move(b));
    }
  return out;
}

}  // namespace gourds::boards
