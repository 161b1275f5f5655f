#pragma once

// Hamiltonian cycles of board graphs and the structures built on them:
// the triangulation of the cycle's interior, its dual tree, the two local
// substructures the sorter works with, run repair and balanced splits.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gourds/board.hpp"

namespace gourds {

struct HamiltonianCycle {
  std::vector<HexCoord> order;

  std::size_t size() const { return order.size(); }
  // Cyclic access; any integer index is accepted.
  const HexCoord& at(long i) const {
    const long n = static_cast<long>(order.size());
    return order[static_cast<std::size_t>(((i % n) + n) % n)];
  }
  friend bool operator==(const HamiltonianCycle&, const HamiltonianCycle&) = default;
};

inline bool is_cycle_over(const std::vector<HexCoord>& order, const std::set<HexCoord>& cells) {
  if (order.size() != cells.size() || order.size() < 3) return false;
  std::set<HexCoord> seen;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!cells.count(order[i]) || !seen.insert(order[i]).second) return false;
    if (!adjacent(order[i], order[(i + 1) % order.size()])) return false;
  }
  return true;
}

inline bool is_hamiltonian_cycle(const Board& b, const HamiltonianCycle& h) {
  return is_cycle_over(h.order, std::set<HexCoord>(b.cells().begin(), b.cells().end()));
}

// Twice the signed area in the (2q + r, r) embedding, which preserves
// orientation. Positive means counterclockwise.
inline long signed_area2(const std::vector<HexCoord>& poly) {
  long a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += static_cast<long>(2 * p.q + p.r) * q.r - static_cast<long>(2 * q.q + q.r) * p.r;
  }
  return a;
}

// Counterclockwise orientation, starting at the smallest cell.
inline HamiltonianCycle normalized(HamiltonianCycle h) {
  if (h.order.empty()) return h;
  if (signed_area2(h.order) < 0) std::reverse(h.order.begin(), h.order.end());
  auto it = std::min_element(h.order.begin(), h.order.end());
  std::rotate(h.order.begin(), it, h.order.end());
  return h;
}

namespace detail {

// Grows a cycle by inserting off-cycle cells, first singly between two
// consecutive cycle cells, then in pairs, then by re-routing a short cycle
// segment through the new cells.
class CycleGrower {
 public:
  // Seed 0 starts from the first triangle; other seeds pick one at random.
  CycleGrower(const Board& b, std::uint64_t seed) : b_(b), on_(b.size(), 0), rng_(seed), random_start_(seed != 0) {}

  std::optional<std::vector<int>> run() {
    if (!seed_triangle()) return std::nullopt;
    while (cyc_.size() < b_.size()) {
      auto frontier = off_cycle_frontier();
      std::shuffle(frontier.begin(), frontier.end(), rng_);
      bool progress = false;
      for (int v : frontier)
        if ((progress = insert_one(v))) break;
      if (!progress)
        for (int v : frontier)
          if ((progress = insert_two(v))) break;
      for (int extra = 1; extra <= 2 && !progress; ++extra)
        for (int v : frontier)
          if ((progress = reroute(v, extra))) break;
      if (!progress) return std::nullopt;
    }
    return cyc_;
  }

 private:
  bool adj(int u, int v) const { return b_.adjacent_idx(u, v); }

  bool seed_triangle() {
    std::vector<std::array<int, 3>> tris;
    for (int u = 0; u < static_cast<int>(b_.size()); ++u)
      for (int v : b_.neighbor_slots(u))
        for (int w : b_.neighbor_slots(u))
          if (v > u && w > v && adj(v, w)) tris.push_back({u, v, w});
    if (tris.empty()) return false;
    std::size_t pick = 0;
    if (random_start_) pick = std::uniform_int_distribution<std::size_t>(0, tris.size() - 1)(rng_);
    for (int c : tris[pick]) cyc_.push_back(c), on_[static_cast<std::size_t>(c)] = 1;
    return true;
  }

  std::vector<int> off_cycle_frontier() const {
    std::vector<int> out;
    for (int v = 0; v < static_cast<int>(b_.size()); ++v) {
      if (on_[static_cast<std::size_t>(v)]) continue;
      for (int w : b_.neighbor_slots(v))
        if (w >= 0 && on_[static_cast<std::size_t>(w)]) {
          out.push_back(v);
          break;
        }
    }
    return out;
  }

  std::vector<int> positions() const {
    std::vector<int> pos(b_.size(), -1);
    for (std::size_t i = 0; i < cyc_.size(); ++i) pos[static_cast<std::size_t>(cyc_[i])] = static_cast<int>(i);
    return pos;
  }

  void insert_after(std::size_t k, std::initializer_list<int> vs) {
    cyc_.insert(cyc_.begin() + static_cast<long>(k + 1), vs);
    for (int v : vs) on_[static_cast<std::size_t>(v)] = 1;
  }

  bool insert_one(int v) {
    const std::size_t L = cyc_.size();
    for (std::size_t k = 0; k < L; ++k)
      if (adj(cyc_[k], v) && adj(v, cyc_[(k + 1) % L])) {
        insert_after(k, {v});
        return true;
      }
    return false;
  }

  bool insert_two(int v) {
    const std::size_t L = cyc_.size();
    for (int v2 : b_.neighbor_slots(v)) {
      if (v2 < 0 || on_[static_cast<std::size_t>(v2)]) continue;
      for (std::size_t k = 0; k < L; ++k) {
        int u = cyc_[k], w = cyc_[(k + 1) % L];
        if (adj(u, v) && adj(v2, w)) return insert_after(k, {v, v2}), true;
        if (adj(u, v2) && adj(v, w)) return insert_after(k, {v2, v}), true;
      }
    }
    return false;
  }

  // Replace the segment cyc[s..s+len] (endpoints kept) by a Hamiltonian path
  // through the segment plus `v` and up to `extra - 1` more off-cycle cells.
  bool reroute(int v, int extra) {
    const int L = static_cast<int>(cyc_.size());
    auto pos = positions();
    std::vector<std::vector<int>> extras_sets;
    if (extra == 1) {
      extras_sets.push_back({v});
    } else {
      for (int v2 : b_.neighbor_slots(v))
        if (v2 >= 0 && !on_[static_cast<std::size_t>(v2)]) extras_sets.push_back({v, v2});
    }
    for (int x : b_.neighbor_slots(v)) {
      if (x < 0 || !on_[static_cast<std::size_t>(x)]) continue;
      const int px = pos[static_cast<std::size_t>(x)];
      for (int len = 2; len <= std::min(8, L - 1); ++len)
        for (int s = px - len; s <= px; ++s)
          for (const auto& ex : extras_sets)
            if (reroute_segment(((s % L) + L) % L, len, ex)) return true;
    }
    return false;
  }

  bool reroute_segment(int s, int len, const std::vector<int>& ex) {
    const int L = static_cast<int>(cyc_.size());
    std::vector<int> pool;
    for (int i = 0; i <= len; ++i) pool.push_back(cyc_[static_cast<std::size_t>((s + i) % L)]);
    const int from = pool.front(), to = pool.back();
    for (int e : ex) pool.push_back(e);
    std::vector<int> path{from};
    std::vector<char> used(pool.size(), 0);
    used[0] = 1;
    std::function<bool()> dfs = [&]() -> bool {
      int cur = path.back();
      if (path.size() + 1 == pool.size()) {
        if (!adj(cur, to)) return false;
        path.push_back(to);
        return true;
      }
      for (std::size_t i = 1; i < pool.size(); ++i) {
        if (used[i] || pool[i] == to || !adj(cur, pool[i])) continue;
        used[i] = 1;
        path.push_back(pool[i]);
        if (dfs()) return true;
        path.pop_back();
        used[i] = 0;
      }
      return false;
    };
    if (!dfs()) return false;
    std::vector<int> next;
    next.reserve(static_cast<std::size_t>(L) + ex.size());
    next.insert(next.end(), path.begin(), path.end());
    for (int i = len + 1; i < L; ++i) next.push_back(cyc_[static_cast<std::size_t>((s + i) % L)]);
    cyc_ = std::move(next);
    for (int e : ex) on_[static_cast<std::size_t>(e)] = 1;
    return true;
  }

  const Board& b_;
  std::vector<int> cyc_;
  std::vector<char> on_;
  std::mt19937_64 rng_;
  bool random_start_;
};

// Plain backtracking search for a Hamiltonian cycle, visiting low-degree
// cells first. `budget` caps the number of search nodes.
inline std::optional<std::vector<int>> backtrack_cycle(const Board& b, std::size_t budget) {
  const int n = static_cast<int>(b.size());
  if (n < 3) return std::nullopt;
  std::vector<int> path{0};
  std::vector<char> used(b.size(), 0);
  used[0] = 1;
  std::size_t nodes = 0;
  std::function<bool()> dfs = [&]() -> bool {
    if (++nodes > budget) return false;
    int cur = path.back();
    if (static_cast<int>(path.size()) == n) return b.adjacent_idx(cur, 0);
    std::vector<std::pair<int, int>> next;
    for (int w : b.neighbor_slots(cur)) {
      if (w < 0 || used[static_cast<std::size_t>(w)]) continue;
      int free = 0;
      for (int z : b.neighbor_slots(w)) free += (z >= 0 && !used[static_cast<std::size_t>(z)]) ? 1 : 0;
      next.emplace_back(free, w);
    }
    std::sort(next.begin(), next.end());
    for (auto [f, w] : next) {
      used[static_cast<std::size_t>(w)] = 1;
      path.push_back(w);
      if (dfs()) return true;
      path.pop_back();
      used[static_cast<std::size_t>(w)] = 0;
    }
    return false;
  };
  if (!dfs()) return std::nullopt;
  return path;
}

}  // namespace detail

inline constexpr std::size_t kHamiltonGuard = 2000;

inline HamiltonianCycle find_hamiltonian(const Board& b) {
  auto report = validate_proper(b);
  if (!report.proper) throw BoardError("board is not proper\n" + to_string(report));
  if (b.size() > kHamiltonGuard)
    throw GuardExceeded("board has " + std::to_string(b.size()) + " cells; limit is " +
                        std::to_string(kHamiltonGuard));
  auto wrap = [&](const std::vector<int>& idx) {
    HamiltonianCycle h;
    for (int i : idx) h.order.push_back(b.cell(i));
    return normalized(std::move(h));
  };
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    detail::CycleGrower g(b, seed);
    if (auto c = g.run()) return wrap(*c);
  }
  if (auto c = detail::backtrack_cycle(b, 50'000'000)) return wrap(*c);
  throw Error("no Hamiltonian cycle found");
}

// ---------------------------------------------------------------------------
// Triangulation of the cycle interior and its dual tree

using Triangle = std::array<HexCoord, 3>;

inline Triangle make_triangle(HexCoord a, HexCoord b, HexCoord c) {
  Triangle t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

struct Triangulation {
  std::vector<Triangle> triangles;
};

namespace detail {

inline std::pair<HexCoord, HexCoord> edge_key(HexCoord a, HexCoord b) { return std::minmax(a, b); }

inline std::set<std::pair<HexCoord, HexCoord>> cycle_edges(const HamiltonianCycle& h) {
  std::set<std::pair<HexCoord, HexCoord>> out;
  for (std::size_t i = 0; i < h.size(); ++i) out.insert(edge_key(h.order[i], h.at(static_cast<long>(i) + 1)));
  return out;
}

inline std::unordered_map<HexCoord, long> cycle_positions(const HamiltonianCycle& h) {
  std::unordered_map<HexCoord, long> pos;
  for (std::size_t i = 0; i < h.size(); ++i) pos[h.order[i]] = static_cast<long>(i);
  return pos;
}

// The two sides of a triangle as (side endpoints, opposite corner).
inline std::array<std::pair<std::pair<HexCoord, HexCoord>, HexCoord>, 3> sides(const Triangle& t) {
  return {{{edge_key(t[0], t[1]), t[2]}, {edge_key(t[1], t[2]), t[0]}, {edge_key(t[0], t[2]), t[1]}}};
}

}  // namespace detail

// Unit triangles inside the polygon of `h`, found by flooding from the
// interior side of every cycle edge without crossing the cycle.
inline Triangulation triangulate(const HamiltonianCycle& h) {
  if (h.size() < 3) throw Error("cycle too short");
  auto hn = normalized(h);
  std::set<HexCoord> on(hn.order.begin(), hn.order.end());
  auto hedges = detail::cycle_edges(hn);
  std::set<Triangle> seen;
  std::vector<Triangle> queue;
  auto push = [&](const Triangle& t) {
    for (const auto& c : t)
      if (!on.count(c)) {
        std::ostringstream os;
        os << "cycle encloses cell " << c << " that it does not visit";
        throw BoardError(os.str());
      }
    if (seen.insert(t).second) queue.push_back(t);
  };
  for (std::size_t i = 0; i < hn.size(); ++i) {
    HexCoord u = hn.order[i], w = hn.at(static_cast<long>(i) + 1);
    push(make_triangle(u, w, u + rotate60(w - u)));
  }
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const Triangle t = queue[k];
    for (const auto& [side, opp] : detail::sides(t)) {
      if (hedges.count(side)) continue;
      push(make_triangle(side.first, side.second, side.first + side.second - opp));
    }
  }
  return {std::vector<Triangle>(seen.begin(), seen.end())};
}

inline Triangulation triangulate(const Board& b, const HamiltonianCycle& h) {
  if (!is_hamiltonian_cycle(b, h)) throw Error("not a Hamiltonian cycle of the board");
  return triangulate(h);
}

struct DualTree {
  std::vector<Triangle> nodes;
  std::vector<std::vector<int>> adj;

  std::size_t size() const { return nodes.size(); }
  int degree(int i) const { return static_cast<int>(adj[static_cast<std::size_t>(i)].size()); }
  std::array<int, 4> histogram() const {
    std::array<int, 4> hist{};
    for (std::size_t i = 0; i < nodes.size(); ++i) ++hist[std::min<std::size_t>(3, adj[i].size())];
    return hist;
  }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& a : adj) e += a.size();
    return e / 2;
  }
  int index_of(const Triangle& t) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t);
    return it != nodes.end() && *it == t ? static_cast<int>(it - nodes.begin()) : -1;
  }
};

// The two corners shared by adjacent dual nodes.
inline std::pair<HexCoord, HexCoord> shared_side(const Triangle& a, const Triangle& b) {
  std::vector<HexCoord> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  if (common.size() != 2) throw Error("triangles do not share a side");
  return {common[0], common[1]};
}

inline DualTree dual_tree(const Triangulation& t, const HamiltonianCycle& h) {
  DualTree d;
  d.nodes = t.triangles;
  std::sort(d.nodes.begin(), d.nodes.end());
  d.adj.resize(d.nodes.size());
  auto hedges = detail::cycle_edges(h);
  for (std::size_t i = 0; i < d.nodes.size(); ++i)
    for (const auto& [side, opp] : detail::sides(d.nodes[i])) {
      if (hedges.count(side)) continue;
      int j = d.index_of(make_triangle(side.first, side.second, side.first + side.second - opp));
      if (j < 0) throw Error("triangulation is not closed across an interior side");
      d.adj[i].push_back(j);
    }
  for (auto& a : d.adj) std::sort(a.begin(), a.end());
  return d;
}

// Largest number of sides of one cell crossed by dual tree edges.
inline int max_dual_sides_per_cell(const DualTree& d) {
  std::map<HexCoord, int> count;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (int j : d.adj[i])
      if (static_cast<int>(i) < j) {
        auto [u, w] = shared_side(d.nodes[i], d.nodes[static_cast<std::size_t>(j)]);
        ++count[u], ++count[w];
      }
  int best = 0;
  for (const auto& [c, k] : count) best = std::max(best, k);
  return best;
}

inline bool is_tree(const DualTree& d) {
  if (d.size() == 0) return false;
  if (d.edge_count() + 1 != d.size()) return false;
  std::vector<char> seen(d.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : d.adj[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(w)]) seen[static_cast<std::size_t>(w)] = 1, ++count, stack.push_back(w);
  }
  return count == d.size();
}

// ---------------------------------------------------------------------------
// Substructures

enum class SubstructureKind { TypeI, TypeII };

struct Substructure {
  SubstructureKind kind;
  // a,b,c,d (TypeI) or a,b,c,d,e (TypeII), consecutive along the cycle in
  // its stored direction.
  std::vector<HexCoord> cells;
  // TypeI only: the cycle with b and c removed (a and d become neighbours).
  HamiltonianCycle shortcut;
};

namespace detail {

// Orders `seq` (consecutive on h in one direction or the other) along h.
inline std::vector<HexCoord> along_cycle(const HamiltonianCycle& h, std::vector<HexCoord> seq) {
  auto pos = cycle_positions(h);
  const long L = static_cast<long>(h.size());
  auto forward = [&](const std::vector<HexCoord>& s) {
    for (std::size_t k = 0; k + 1 < s.size(); ++k)
      if ((pos.at(s[k]) + 1) % L != pos.at(s[k + 1])) return false;
    return true;
  };
  if (forward(seq)) return seq;
  std::reverse(seq.begin(), seq.end());
  if (forward(seq)) return seq;
  throw Error("cells are not consecutive on the cycle");
}

inline HexCoord third_corner(const Triangle& t, HexCoord a, HexCoord b) {
  for (const auto& c : t)
    if (c != a && c != b) return c;
  throw Error("bad triangle");
}

}  // namespace detail

inline std::optional<Substructure> find_type_one(const DualTree& d, const HamiltonianCycle& h) {
  auto hedges = detail::cycle_edges(h);
  auto on_h = [&](HexCoord a, HexCoord b) { return hedges.count(detail::edge_key(a, b)) > 0; };
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.degree(static_cast<int>(i)) != 1) continue;
    const int j = d.adj[i][0];
    if (d.degree(j) != 2) continue;
    const auto& leaf = d.nodes[i];
    const auto& mid = d.nodes[static_cast<std::size_t>(j)];
    auto [x, z] = shared_side(leaf, mid);
    HexCoord y = detail::third_corner(leaf, x, z);
    HexCoord w = detail::third_corner(mid, x, z);
    std::vector<HexCoord> seq;
    if (on_h(z, w)) seq = {x, y, z, w};
    else if (on_h(w, x)) seq = {w, x, y, z};
    else continue;
    Substructure s{SubstructureKind::TypeI, detail::along_cycle(h, seq), {}};
    for (const auto& c : h.order)
      if (c != s.cells[1] && c != s.cells[2]) s.shortcut.order.push_back(c);
    return s;
  }
  return std::nullopt;
}

inline std::optional<Substructure> find_type_two(const DualTree& d, const HamiltonianCycle& h) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.degree(static_cast<int>(i)) != 3) continue;
    std::vector<int> leaves;
    for (int j : d.adj[i])
      if (d.degree(j) == 1) leaves.push_back(j);
    if (leaves.size() < 2) continue;
    const auto& t = d.nodes[i];
    auto s1 = shared_side(t, d.nodes[static_cast<std::size_t>(leaves[0])]);
    auto s2 = shared_side(t, d.nodes[static_cast<std::size_t>(leaves[1])]);
    HexCoord y = (s1.first == s2.first || s1.first == s2.second) ? s1.first : s1.second;
    HexCoord x = s1.first == y ? s1.second : s1.first;
    HexCoord z = s2.first == y ? s2.second : s2.first;
    HexCoord p = detail::third_corner(d.nodes[static_cast<std::size_t>(leaves[0])], x, y);
    HexCoord s = detail::third_corner(d.nodes[static_cast<std::size_t>(leaves[1])], y, z);
    return Substructure{SubstructureKind::TypeII, detail::along_cycle(h, {x, p, y, s, z}), {}};
  }
  return std::nullopt;
}

// TypeI is preferred when both kinds are present.
inline Substructure find_substructure(const DualTree& d, const HamiltonianCycle& h) {
  if (d.size() < 2) throw Error("substructures need at least two triangles");
  if (auto s = find_type_one(d, h)) return *s;
  if (auto s = find_type_two(d, h)) return *s;
  throw Error("dual tree has neither substructure");
}

// ---------------------------------------------------------------------------
// Degree-3 runs

// Longest path (as node indices) in the forest induced by degree-3 nodes.
inline std::vector<int> longest_degree3_run(const DualTree& d) {
  const int n = static_cast<int>(d.size());
  auto is3 = [&](int v) { return d.degree(v) == 3; };
  std::vector<int> parent(d.size(), -1), dist(d.size(), -1);
  auto farthest = [&](int src, std::vector<int>& comp) {
    std::fill(dist.begin(), dist.end(), -1);
    std::vector<int> q{src};
    dist[static_cast<std::size_t>(src)] = 0;
    parent[static_cast<std::size_t>(src)] = -1;
    int far = src;
    for (std::size_t k = 0; k < q.size(); ++k) {
      int v = q[k];
      if (dist[static_cast<std::size_t>(v)] > dist[static_cast<std::size_t>(far)]) far = v;
      for (int w : d.adj[static_cast<std::size_t>(v)])
        if (is3(w) && dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          parent[static_cast<std::size_t>(w)] = v;
          q.push_back(w);
        }
    }
    comp = q;
    return far;
  };
  std::vector<char> done(d.size(), 0);
  std::vector<int> best;
  for (int v = 0; v < n; ++v) {
    if (!is3(v) || done[static_cast<std::size_t>(v)]) continue;
    std::vector<int> comp;
    int a = farthest(v, comp);
    for (int c : comp) done[static_cast<std::size_t>(c)] = 1;
    int bnode = farthest(a, comp);
    std::vector<int> path;
    for (int c = bnode; c != -1; c = parent[static_cast<std::size_t>(c)]) path.push_back(c);
    if (path.size() > best.size()) best = path;
  }
  return best;
}

struct RepairStats {
  int rewrites = 0;
  int initial_run = 0;
  int final_run = 0;
};

// Reroutes the cycle until the dual tree has no run of seven degree-3 nodes.
// Each rewrite takes two ears p0 p1 p2 and p2 p3 p4 that follow each other
// along the cycle with p1 adjacent to p3, and visits p0 p1 p3 p2 p4 (or
// p0 p2 p1 p3 p4) instead, turning the degree-3 node under the removed ear
// into a degree-2 node.
inline HamiltonianCycle repair_seven_runs(const Board& b, const HamiltonianCycle& h, RepairStats* stats = nullptr) {
  if (!is_hamiltonian_cycle(b, h)) throw Error("not a Hamiltonian cycle of the board");
  HamiltonianCycle cur = normalized(h);
  RepairStats st;
  for (bool first = true;; first = false) {
    auto tri = triangulate(cur);
    auto d = dual_tree(tri, cur);
    auto run = longest_degree3_run(d);
    if (first) st.initial_run = static_cast<int>(run.size());
    st.final_run = static_cast<int>(run.size());
    if (run.size() < 7) break;
    const int deg3 = d.histogram()[3];
    std::map<int, int> run_rank;
    for (std::size_t k = 0; k < run.size(); ++k)
      run_rank[run[k]] = std::abs(2 * static_cast<int>(k) - static_cast<int>(run.size()) + 1);
    const long L = static_cast<long>(cur.size());
    struct Cand {
      int rank;
      long k;
      bool drop_second;
    };
    std::vector<Cand> cands;
    for (long k = 0; k < L; ++k) {
      HexCoord p0 = cur.at(k), p1 = cur.at(k + 1), p2 = cur.at(k + 2), p3 = cur.at(k + 3), p4 = cur.at(k + 4);
      if (!adjacent(p1, p3)) continue;
      int e1 = d.index_of(make_triangle(p0, p1, p2)), e2 = d.index_of(make_triangle(p2, p3, p4));
      if (e1 < 0 || e2 < 0 || d.degree(e1) != 1 || d.degree(e2) != 1) continue;
      for (bool drop_second : {true, false}) {
        int under = d.adj[static_cast<std::size_t>(drop_second ? e2 : e1)][0];
        auto it = run_rank.find(under);
        if (it != run_rank.end()) cands.push_back({it->second, k, drop_second});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& c) {
      return std::tie(a.rank, a.k, a.drop_second) < std::tie(c.rank, c.k, c.drop_second);
    });
    bool applied = false;
    for (const auto& c : cands) {
      HamiltonianCycle next;
      std::vector<HexCoord> mid{cur.at(c.k + 1), cur.at(c.k + 2), cur.at(c.k + 3)};
      if (c.drop_second) std::swap(mid[1], mid[2]);
      else std::swap(mid[0], mid[1]);
      next.order.push_back(cur.at(c.k));
      next.order.insert(next.order.end(), mid.begin(), mid.end());
      for (long i = 4; i < L; ++i) next.order.push_back(cur.at(c.k + i));
      if (!is_hamiltonian_cycle(b, next)) continue;
      next = normalized(std::move(next));
      auto nd = dual_tree(triangulate(next), next);
      if (nd.histogram()[3] >= deg3) continue;
      cur = std::move(next);
      ++st.rewrites;
      applied = true;
      break;
    }
    if (!applied) break;
  }
  if (stats) *stats = st;
  return cur;
}

// ---------------------------------------------------------------------------
// Balanced split

struct SplitResult {
  // Dual node where the cycle is split: e1 = (x, y) lies on the cycle, v1 is
  // the opposite corner, e2 = (y, v1), e3 = (v1, x).
  Triangle station;
  HexCoord x;
  HexCoord y;
  HexCoord v1;
  HamiltonianCycle h1;  // starts at y (one shared) or x (three shared), ends at v1
  HamiltonianCycle h2;  // starts at v1, ends at x (one shared) or y (three shared)
  bool three_shared = false;
  std::size_t m1 = 0, m2 = 0;          // cycle lengths
  std::size_t part1 = 0, part2 = 0;    // dual tree parts left after removing the station
  int walk = 0;                        // steps from the centroid to the station
};

inline SplitResult split_at(const HamiltonianCycle& h, const DualTree& d, int w) {
  auto hn = h;
  auto hedges = detail::cycle_edges(hn);
  auto pos = detail::cycle_positions(hn);
  const long L = static_cast<long>(hn.size());
  const auto& t = d.nodes[static_cast<std::size_t>(w)];
  SplitResult r;
  r.station = t;
  bool found = false;
  for (const auto& [side, opp] : detail::sides(t)) {
    if (!hedges.count(side)) continue;
    HexCoord a = side.first, c = side.second;
    if ((pos.at(a) + 1) % L == pos.at(c)) r.x = a, r.y = c;
    else r.x = c, r.y = a;
    r.v1 = opp;
    found = true;
  }
  if (!found || d.degree(w) != 2) throw Error("split node must have exactly one side on the cycle");
  const long i = pos.at(r.x), j = pos.at(r.v1);
  auto slice = [&](long from, long to) {
    HamiltonianCycle out;
    for (long k = from;; ++k) {
      out.order.push_back(hn.at(k));
      if ((k - to) % L == 0) break;
    }
    return out;
  };
  r.h1 = slice(i + 1, j);
  r.h2 = slice(j, i);
  if (r.h1.size() % 2 == 0) {
    r.three_shared = true;
    r.h1 = slice(i, j);
    r.h2 = slice(j, i + 1);
  }
  r.m1 = r.h1.size();
  r.m2 = r.h2.size();
  std::vector<char> seen(d.size(), 0);
  seen[static_cast<std::size_t>(w)] = 1;
  std::vector<std::size_t> parts;
  for (int start : d.adj[static_cast<std::size_t>(w)]) {
    std::vector<int> q{start};
    seen[static_cast<std::size_t>(start)] = 1;
    for (std::size_t k = 0; k < q.size(); ++k)
      for (int z : d.adj[static_cast<std::size_t>(q[k])])
        if (!seen[static_cast<std::size_t>(z)]) seen[static_cast<std::size_t>(z)] = 1, q.push_back(z);
    parts.push_back(q.size());
  }
  r.part1 = parts[0];
  r.part2 = parts[1];
  return r;
}

// Split of any cycle whose polygon encloses no unvisited cell.
inline SplitResult split_cycle(const HamiltonianCycle& h) {
  auto hn = normalized(h);
  auto d = dual_tree(triangulate(hn), hn);
  const int m = static_cast<int>(d.size());
  if (m < 3) throw Error("dual tree too small to split");
  // Subtree sizes rooted at node 0.
  std::vector<int> parent(d.size(), -1), order{0}, sub(d.size(), 1);
  parent[0] = 0;
  for (std::size_t k = 0; k < order.size(); ++k)
    for (int z : d.adj[static_cast<std::size_t>(order[k])])
      if (parent[static_cast<std::size_t>(z)] < 0 && z != 0) parent[static_cast<std::size_t>(z)] = order[k], order.push_back(z);
  for (std::size_t k = order.size(); k-- > 1;) sub[static_cast<std::size_t>(parent[static_cast<std::size_t>(order[k])])] += sub[static_cast<std::size_t>(order[k])];
  // Size of the component containing `nb` once `v` is removed.
  auto side = [&](int v, int nb) {
    return parent[static_cast<std::size_t>(nb)] == v && nb != 0 ? sub[static_cast<std::size_t>(nb)]
                                                                 : m - sub[static_cast<std::size_t>(v)];
  };
  int u = 0, best = m + 1;
  for (int v = 0; v < m; ++v) {
    int worst = 0;
    for (int nb : d.adj[static_cast<std::size_t>(v)]) worst = std::max(worst, side(v, nb));
    if (worst < best) best = worst, u = v;
  }
  int cur = u, prev = -1, steps = 0;
  while (d.degree(cur) != 2) {
    int next = -1, next_size = -1;
    for (int nb : d.adj[static_cast<std::size_t>(cur)]) {
      if (nb == prev) continue;
      int s = side(cur, nb);
      if (s > next_size) next = nb, next_size = s;
    }
    if (next < 0) break;
    prev = cur, cur = next, ++steps;
  }
  if (d.degree(cur) != 2) {
    // Nearest degree-2 node from the centroid.
    std::vector<int> dist(d.size(), -1), q{u};
    dist[static_cast<std::size_t>(u)] = 0;
    cur = -1;
    for (std::size_t k = 0; k < q.size() && cur < 0; ++k) {
      if (d.degree(q[k]) == 2) cur = q[k];
      for (int z : d.adj[static_cast<std::size_t>(q[k])])
        if (dist[static_cast<std::size_t>(z)] < 0) dist[static_cast<std::size_t>(z)] = dist[static_cast<std::size_t>(q[k])] + 1, q.push_back(z);
    }
    if (cur < 0) throw Error("dual tree has no degree-2 node");
    steps = dist[static_cast<std::size_t>(cur)];
  }
  auto r = split_at(hn, d, cur);
  r.walk = steps;
  return r;
}

inline SplitResult balanced_split(const Board& b, const HamiltonianCycle& h) {
  if (!is_hamiltonian_cycle(b, h)) throw Error("not a Hamiltonian cycle of the board");
  return split_cycle(h);
}

// ---------------------------------------------------------------------------

inline std::string decomposition_dump(const Board& b, const HamiltonianCycle& h) {
  if (!is_hamiltonian_cycle(b, h)) throw Error("not a Hamiltonian cycle of the board");
  auto hn = normalized(h);
  auto t = triangulate(hn);
  auto d = dual_tree(t, hn);
  std::ostringstream os;
  os << "gourds-decomposition v1\n";
  os << "cycle " << hn.size() << "\n";
  for (const auto& c : hn.order) os << "c " << c.q << " " << c.r << "\n";
  os << "triangles " << d.size() << "\n";
  for (const auto& tr : d.nodes) {
    os << "t";
    for (const auto& c : tr) os << " " << c.q << " " << c.r;
    os << "\n";
  }
  os << "dual_edges " << d.edge_count() << "\n";
  for (std::size_t i = 0; i < d.size(); ++i)
    for (int j : d.adj[i])
      if (static_cast<int>(i) < j) os << "d " << i << " " << j << "\n";
  auto hist = d.histogram();
  os << "degrees";
  for (int k = 0; k < 4; ++k) os << " d" << k << "=" << hist[static_cast<std::size_t>(k)];
  os << "\n";
  os << "longest_degree3_run " << longest_degree3_run(d).size() << "\n";
  return os.str();
}

}  // namespace gourds
