#pragma once

// Three-phase reconfiguration: align every gourd with a Hamiltonian cycle,
// sort the aligned ring, then undo the alignment of the target.

#include <cmath>
#include <map>

#include "gourds/hamilton.hpp"
#include "gourds/puzzle.hpp"

namespace gourds {

enum class Strategy { Cubic, Quadratic };

inline const char* to_string(Strategy s) { return s == Strategy::Cubic ? "cubic" : "quadratic"; }

struct SolveOptions {
  Strategy strategy = Strategy::Quadratic;
  // Cycles with at most this many cells go to the cubic sorter.
  std::size_t base_threshold = 21;
};

struct SolveStats {
  std::size_t s1 = 0, s2 = 0, s3 = 0;
  int splits = 0;
  int one_shared = 0;
  int three_shared = 0;
  int base_cases = 0;
  // One-shared splits where no extension pair was found and the cycle was
  // sorted by the cubic sorter instead.
  int fallbacks = 0;
};

struct SolvePlan {
  std::vector<Move> s1, s2, s3;
  Strategy strategy = Strategy::Quadratic;
  SolveStats stats;

  std::vector<Move> moves() const {
    std::vector<Move> all = s1;
    all.insert(all.end(), s2.begin(), s2.end());
    all.insert(all.end(), s3.begin(), s3.end());
    return all;
  }
  std::size_t size() const { return s1.size() + s2.size() + s3.size(); }
};

// Every gourd on two consecutive cycle cells. `ring` lists (gourd, end code
// on the first cell of its pair) going forward from the empty cell.
struct AlignedState {
  HamiltonianCycle cycle;
  std::vector<std::pair<int, int>> ring;
  std::size_t empty_index = 0;
};

namespace detail {

inline long mod(long a, long m) { return ((a % m) + m) % m; }

// A cycle as board cell indices with a reverse lookup.
struct Ring {
  std::vector<int> cell;
  std::vector<int> pos;  // by board cell, -1 when absent

  Ring() = default;
  Ring(const Board& b, const std::vector<HexCoord>& cells) : pos(b.size(), -1) {
    for (const auto& c : cells) {
      int i = b.index_of(c);
      if (i < 0) throw BoardError("cycle leaves the board");
      pos[static_cast<std::size_t>(i)] = static_cast<int>(cell.size());
      cell.push_back(i);
    }
  }
  long size() const { return static_cast<long>(cell.size()); }
  int at(long i) const { return cell[static_cast<std::size_t>(mod(i, size()))]; }
  bool contains(int c) const { return pos[static_cast<std::size_t>(c)] >= 0; }
  int index(int c) const { return pos[static_cast<std::size_t>(c)]; }
  HamiltonianCycle coords(const Board& b) const {
    HamiltonianCycle h;
    for (int c : cell) h.order.push_back(b.cell(c));
    return h;
  }
};

// Gourd order on an aligned ring, read forward from the empty cell.
struct RingView {
  long empty = 0;
  std::vector<int> gourd;
  std::vector<int> first_code;
};

class Engine {
 public:
  Engine(const Board& b, const Configuration& c) : b_(b), occ_(b, c) {}

  const Board& board() const { return b_; }
  const Occupancy& occ() const { return occ_; }
  std::vector<Move>& moves() { return moves_; }

  void move(int tail, int head) {
    const int e = occ_.empty();
    const bool tri = b_.adjacent_idx(tail, e);
    Move m{b_.cell(tail), b_.cell(head), b_.cell(e), MoveKind::Pivot};
    if (!tri) m.kind = *classify_move(m.tail, m.head, m.target);
    occ_.apply(tail, head, tri);
    moves_.push_back(m);
  }

  // The gourd on (head, tail), head next to E, ends up on (E, head) with E
  // moving to tail. On a triangle this is a sharp turn done as two pivots.
  void advance(int tail, int head) {
    const int e = occ_.empty();
    if (b_.adjacent_idx(tail, e)) {
      move(tail, head);
      move(e, tail);
    } else {
      move(tail, head);
    }
  }

  // One cycle step: the gourd after E (dir = +1) or before E (dir = -1)
  // moves one cell towards E, and E moves two cells the other way.
  void step(const Ring& r, int dir) {
    const long p = r.index(occ_.empty());
    const int c1 = r.at(p + dir), c2 = r.at(p + 2 * dir);
    if (occ_.partner(c1) != c2) throw Error("ring is not aligned at the empty cell");
    advance(c2, c1);
  }

  void rotate(const Ring& r, long t) {
    for (long i = 0; i < std::abs(t); ++i) step(r, t > 0 ? 1 : -1);
  }

  RingView view(const Ring& r) const {
    RingView v;
    v.empty = r.index(occ_.empty());
    if (v.empty < 0) throw Error("empty cell is not on the ring");
    const long k = (r.size() - 1) / 2;
    for (long i = 0; i < k; ++i) {
      const int c = r.at(v.empty + 1 + 2 * i);
      const int code = occ_.at(c);
      if (occ_.partner(c) != r.at(v.empty + 2 + 2 * i)) throw Error("ring is not aligned");
      v.gourd.push_back(code / 2);
      v.first_code.push_back(code);
    }
    return v;
  }

  // Shortest move sequence inside `cells` (both ends of every moved gourd
  // stay inside) reaching the given occupant codes on those cells.
  void local_solve(const std::vector<int>& cells, const std::vector<int>& goal) {
    std::vector<int> startv;
    for (int c : cells) startv.push_back(occ_.at(c));
    if (startv == goal) return;
    std::map<std::vector<int>, std::pair<std::vector<int>, std::pair<int, int>>> parent;
    parent[startv] = {{}, {-1, -1}};
    std::vector<std::vector<int>> queue{startv};
    const int n = static_cast<int>(cells.size());
    bool found = false;
    for (std::size_t k = 0; k < queue.size() && !found; ++k) {
      const auto s = queue[k];
      const int e = static_cast<int>(std::find(s.begin(), s.end(), -1) - s.begin());
      for (int h = 0; h < n && !found; ++h) {
        if (h == e || !b_.adjacent_idx(cells[static_cast<std::size_t>(h)], cells[static_cast<std::size_t>(e)])) continue;
        const int code = s[static_cast<std::size_t>(h)];
        const int t = static_cast<int>(std::find(s.begin(), s.end(), code ^ 1) - s.begin());
        if (t == n) continue;
        auto next = s;
        if (b_.adjacent_idx(cells[static_cast<std::size_t>(t)], cells[static_cast<std::size_t>(e)])) {
          next[static_cast<std::size_t>(e)] = code;
          next[static_cast<std::size_t>(h)] = -1;
        } else {
          next[static_cast<std::size_t>(e)] = code;
          next[static_cast<std::size_t>(h)] = s[static_cast<std::size_t>(t)];
          next[static_cast<std::size_t>(t)] = -1;
        }
        if (parent.count(next)) continue;
        parent[next] = {s, {cells[static_cast<std::size_t>(t)], cells[static_cast<std::size_t>(h)]}};
        if (next == goal) found = true;
        queue.push_back(std::move(next));
      }
    }
    if (!found) throw Error("local rearrangement is unreachable");
    std::vector<std::pair<int, int>> path;
    for (auto s = goal; parent[s].second.first != -1; s = parent[s].first) path.push_back(parent[s].second);
    std::reverse(path.begin(), path.end());
    for (auto [tail, head] : path) move(tail, head);
  }

 private:
  const Board& b_;
  Occupancy occ_;
  std::vector<Move> moves_;
};

// Smallest |t| (or smallest t >= 0 when forward_only) such that after t
// steps the ring state (empty index, index into v.gourd of the first gourd
// after E) satisfies `pred`.
template <typename Pred>
std::optional<long> find_rotation(long L, const RingView& v, Pred&& pred, bool forward_only = false) {
  const long k = static_cast<long>(v.gourd.size());
  if (k == 0) return pred(v.empty, 0L) ? std::optional<long>(0) : std::nullopt;
  for (long m = 0; m < L * k; ++m) {
    if (pred(mod(v.empty + 2 * m, L), mod(m, k))) return m;
    if (!forward_only && m > 0 && pred(mod(v.empty - 2 * m, L), mod(-m, k))) return -m;
  }
  return std::nullopt;
}

// Ring index of the first cell of gourd j (index into the view) after the
// ring reached state (p, f).
inline long first_cell_of(long L, long k, long p, long f, long j) { return mod(p + 1 + 2 * mod(j - f, k), L); }

// Index into the view of the gourd whose first cell is at ring index `c`.
inline long gourd_at(long L, long k, long p, long f, long c) { return mod(f + (mod(c - p, L) - 1) / 2, k); }

inline int count_unaligned(const Occupancy& occ, const Ring& r) {
  int n = 0;
  for (std::size_t g = 0; g < occ.gourd_count(); ++g) {
    const int a = occ.position(static_cast<int>(2 * g)), b = occ.position(static_cast<int>(2 * g + 1));
    if (!r.contains(a) || !r.contains(b)) continue;
    const long d = mod(r.index(a) - r.index(b), r.size());
    if (d != 1 && d != r.size() - 1) ++n;
  }
  return n;
}

// Phase 1 on a full cycle: look at the cell after E. An unaligned gourd
// there is moved onto (E, that cell); an aligned one is stepped past.
inline void align(Engine& eng, const Ring& r) {
  int unaligned = count_unaligned(eng.occ(), r);
  while (unaligned > 0) {
    const long p = r.index(eng.occ().empty());
    const int nu = r.at(p + 1);
    const int other = eng.occ().partner(nu);
    eng.advance(other, nu);
    if (other != r.at(p + 2)) --unaligned;
  }
}

}  // namespace detail

namespace detail {

// Wanted occupant code per ring index; -1 marks E.
using RingCodes = std::vector<int>;

struct RingTarget {
  long empty = 0;
  std::vector<int> gourd;
  std::vector<int> first_code;
};

inline RingTarget read_target(const Ring& r, const RingCodes& want) {
  RingTarget t;
  const long L = r.size();
  t.empty = static_cast<long>(std::find(want.begin(), want.end(), -1) - want.begin());
  if (t.empty == L) throw Error("target has no empty cell on the ring");
  for (long i = 0; i < (L - 1) / 2; ++i) {
    const int code = want[static_cast<std::size_t>(mod(t.empty + 1 + 2 * i, L))];
    if (want[static_cast<std::size_t>(mod(t.empty + 2 + 2 * i, L))] != (code ^ 1))
      throw Error("target is not aligned with the ring");
    t.gourd.push_back(code / 2);
    t.first_code.push_back(code);
  }
  return t;
}

inline RingCodes codes_on(const Occupancy& occ, const Ring& r) {
  RingCodes out;
  for (int c : r.cell) out.push_back(occ.at(c));
  return out;
}

inline long index_in(const std::vector<int>& v, int x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) throw Error("gourd is not on the ring");
  return static_cast<long>(it - v.begin());
}

// Rotates until E and the gourd order match the target exactly.
inline void rotate_to(Engine& eng, const Ring& r, const RingTarget& t) {
  auto v = eng.view(r);
  if (v.gourd.empty()) return;
  const long j0 = index_in(v.gourd, t.gourd[0]);
  auto rot = find_rotation(r.size(), v, [&](long p, long f) { return p == t.empty && f == j0; });
  eng.rotate(r, *rot);
}

inline std::vector<int> substructure_cells(const Board& b, const Ring& r, SubstructureKind& kind) {
  auto hc = r.coords(b);
  auto d = dual_tree(triangulate(hc), hc);
  auto s = find_substructure(d, hc);
  kind = s.kind;
  std::vector<int> out;
  for (const auto& c : s.cells) out.push_back(b.index_of(c));
  return out;
}

// TypeI: park a gourd on b c, rotate the shortcut cycle (without b and c)
// until the gourd it should follow ends at a, then let it rejoin the ring.
// A gourd on b c is reversed with E on the corner adjacent to both.
inline void insertion_sort(Engine& eng, const Ring& r, const RingTarget& t, const std::vector<int>& sc) {
  const Board& b = eng.board();
  const long L = r.size(), k = (L - 1) / 2;
  const int a = sc[0], pb = sc[1], pc = sc[2], d = sc[3];
  const int apex = b.adjacent_idx(a, pc) ? a : d;
  std::vector<HexCoord> short_cells;
  for (int c : r.cell)
    if (c != pb && c != pc) short_cells.push_back(b.cell(c));
  const Ring rp(b, short_cells);
  const long Lp = rp.size(), kp = (Lp - 1) / 2;
  std::map<int, int> want_first;
  for (std::size_t i = 0; i < t.gourd.size(); ++i) want_first[t.gourd[i]] = t.first_code[i];

  auto park = [&](int g) {
    auto v = eng.view(r);
    const long j = index_in(v.gourd, g), ib = r.index(pb);
    eng.rotate(r, *find_rotation(L, v, [&](long p, long f) { return first_cell_of(L, k, p, f, j) == ib; }));
  };
  auto flip_if_needed = [&](int g) {
    if (eng.occ().at(pb) == want_first[g]) return;
    auto v = eng.view(rp);
    const long ia = rp.index(apex);
    eng.rotate(rp, *find_rotation(Lp, v, [&](long p, long) { return p == ia; }));
    eng.local_solve({apex, pb, pc}, {-1, eng.occ().at(pc), eng.occ().at(pb)});
  };
  auto place_after = [&](int y) {
    auto v = eng.view(rp);
    const long j = index_in(v.gourd, y), ia = rp.index(a);
    eng.rotate(rp, *find_rotation(Lp, v, [&](long p, long f) {
      return mod(first_cell_of(Lp, kp, p, f, j) + 1, Lp) == ia;
    }));
  };

  for (long i = 0; i < k; ++i) {
    const int g = t.gourd[static_cast<std::size_t>(i)];
    auto v = eng.view(r);
    const long jg = index_in(v.gourd, g);
    const bool orient_ok = v.first_code[static_cast<std::size_t>(jg)] == want_first[g];
    if (i == 0) {
      if (!orient_ok) park(g), flip_if_needed(g);
      continue;
    }
    const int y = t.gourd[static_cast<std::size_t>(i - 1)];
    const bool follows = mod(index_in(v.gourd, y) + 1, k) == jg;
    if (follows && orient_ok) continue;
    park(g);
    flip_if_needed(g);
    place_after(y);
  }
}

// TypeII: with E on a and two consecutive gourds on b c and d e, the five
// cells let them swap places or reverse one of them; bubble sort on top.
inline void bubble_sort(Engine& eng, const Ring& r, const RingTarget& t, const std::vector<int>& sc) {
  const long L = r.size(), k = (L - 1) / 2;
  const long i0 = r.index(sc[0]);
  std::map<int, int> rank, want_first;
  for (std::size_t i = 0; i < t.gourd.size(); ++i) rank[t.gourd[i]] = static_cast<int>(i), want_first[t.gourd[i]] = t.first_code[i];

  auto bring = [&](int g) {
    auto v = eng.view(r);
    const long j = index_in(v.gourd, g);
    eng.rotate(r, *find_rotation(L, v, [&](long p, long f) { return p == i0 && f == j; }));
  };
  auto codes = [&] {
    std::vector<int> c;
    for (int x : sc) c.push_back(eng.occ().at(x));
    return c;
  };
  auto swap_pair = [&](int g) {
    bring(g);
    auto c = codes();
    eng.local_solve(sc, {-1, c[3], c[4], c[1], c[2]});
  };
  auto flip = [&](int g) {
    bring(g);
    auto c = codes();
    eng.local_solve(sc, {-1, c[2], c[1], c[3], c[4]});
  };

  auto v = eng.view(r);
  std::vector<int> cur(v.gourd.begin(), v.gourd.end());
  std::rotate(cur.begin(), cur.begin() + index_in(cur, t.gourd[0]), cur.end());
  for (bool swapped = true; swapped;) {
    swapped = false;
    for (long j = 1; j + 1 < k; ++j)
      if (rank[cur[static_cast<std::size_t>(j)]] > rank[cur[static_cast<std::size_t>(j + 1)]]) {
        swap_pair(cur[static_cast<std::size_t>(j)]);
        std::swap(cur[static_cast<std::size_t>(j)], cur[static_cast<std::size_t>(j + 1)]);
        swapped = true;
      }
  }
  for (int g : cur) {
    auto vv = eng.view(r);
    if (vv.first_code[static_cast<std::size_t>(index_in(vv.gourd, g))] != want_first[g]) flip(g);
  }
}

inline void sort_cubic(Engine& eng, const Ring& r, const RingCodes& want) {
  const long L = r.size();
  const auto t = read_target(r, want);
  if (L == 1) return;
  if (L == 3) {
    eng.local_solve(r.cell, want);
  } else {
    SubstructureKind kind;
    auto sc = substructure_cells(eng.board(), r, kind);
    if (kind == SubstructureKind::TypeI) insertion_sort(eng, r, t, sc);
    else bubble_sort(eng, r, t, sc);
    rotate_to(eng, r, t);
  }
  if (codes_on(eng.occ(), r) != want) throw Error("cubic sort did not reach its target");
}

// Extended cycle for a one-shared split: two cells p q of `hb` (a gourd
// pair while E sits on v1) spliced into an edge u w of `ha`, so that the
// pair becomes a transfer slot common to both cycles.
struct Extension {
  std::vector<HexCoord> cells;
  std::array<int, 2> slot;
};

inline std::optional<Extension> find_extension(const Board& b, const Ring& ra, const Ring& rb, int v1) {
  const long La = ra.size(), Lb = rb.size(), sa = ra.index(v1), sb = rb.index(v1);
  // Partner of p on rb once every gourd there is aligned with E on v1.
  auto partner = [&](int p) {
    const long o = mod(rb.index(p) - sb, Lb);
    return rb.at(sb + (o % 2 ? o + 1 : o - 1));
  };
  for (long i = 0; i < La; ++i) {
    if (mod(i - sa, La) % 2) continue;
    const int u = ra.at(i), w = ra.at(i + 1);
    for (int p : b.neighbor_slots(u)) {
      if (p < 0 || ra.contains(p) || !rb.contains(p)) continue;
      const int q = partner(p);
      if (ra.contains(q) || !b.adjacent_idx(q, w)) continue;
      Extension ex;
      for (long j = 1; j <= La; ++j) ex.cells.push_back(b.cell(ra.at(i + j)));
      ex.cells.push_back(b.cell(p));
      ex.cells.push_back(b.cell(q));
      ex.slot = {p, q};
      return ex;
    }
  }
  return std::nullopt;
}

// A split together with the cycle that carries the transfer slot. `ra` is
// the side whose cycle is extended (or h1 when three cells are shared).
struct SplitPlan {
  SplitResult sp;
  Ring ra, rb, rext;
  std::array<int, 2> slot{};
};

inline std::optional<SplitPlan> plan_split(const Board& b, const SplitResult& sp) {
  SplitPlan out{sp, Ring(b, sp.h1.order), Ring(b, sp.h2.order), {}, {}};
  const int v1 = b.index_of(sp.v1);
  if (sp.three_shared) {
    out.rext = out.ra;
    out.slot = {b.index_of(sp.x), b.index_of(sp.y)};
    return out;
  }
  auto ex = find_extension(b, out.ra, out.rb, v1);
  if (!ex) {
    std::swap(out.ra, out.rb);
    ex = find_extension(b, out.ra, out.rb, v1);
  }
  if (!ex) return std::nullopt;
  out.rext = Ring(b, ex->cells);
  out.slot = ex->slot;
  return out;
}

// The balanced split when it has a transfer slot, otherwise the most
// balanced degree-2 station that has one.
inline std::optional<SplitPlan> choose_split(const Board& b, const Ring& r) {
  const auto hc = normalized(r.coords(b));
  const auto first = split_cycle(hc);
  if (auto p = plan_split(b, first)) return p;
  const auto d = dual_tree(triangulate(hc), hc);
  std::vector<SplitResult> others;
  for (int w = 0; w < static_cast<int>(d.size()); ++w)
    if (d.degree(w) == 2) others.push_back(split_at(hc, d, w));
  std::stable_sort(others.begin(), others.end(), [](const SplitResult& x, const SplitResult& y) {
    return std::min(x.part1, x.part2) > std::min(y.part1, y.part2);
  });
  for (const auto& sp : others)
    if (auto p = plan_split(b, sp)) return p;
  return std::nullopt;
}

inline void sort_quadratic(Engine& eng, const Ring& r, const RingCodes& want, const SolveOptions& opt,
                           SolveStats& st) {
  const Board& b = eng.board();
  const long L = r.size();
  if (L <= static_cast<long>(opt.base_threshold) || L < 7) {
    ++st.base_cases;
    sort_cubic(eng, r, want);
    return;
  }
  const auto plan = choose_split(b, r);
  if (!plan) {
    ++st.fallbacks;
    sort_cubic(eng, r, want);
    return;
  }
  const auto& sp = plan->sp;
  const Ring &ra = plan->ra, &rb = plan->rb, &rext = plan->rext;
  const auto slot = plan->slot;
  ++st.splits;
  ++(sp.three_shared ? st.three_shared : st.one_shared);
  const int v1 = b.index_of(sp.v1);
  const long s = r.index(v1);
  const long k = (L - 1) / 2;

  // Sort towards the target shifted by whole units so that its E is on v1,
  // and shift back at the end.
  const long eT = static_cast<long>(std::find(want.begin(), want.end(), -1) - want.begin());
  const long u = mod(eT - s, L);
  RingCodes want_u(static_cast<std::size_t>(L));
  for (long i = 0; i < L; ++i) want_u[static_cast<std::size_t>(i)] = want[static_cast<std::size_t>(mod(i + u, L))];

  eng.rotate(r, *find_rotation(L, eng.view(r), [&](long p, long) { return p == s; }));

  // Gourds that belong on the B side (B cells including the slot).
  std::set<int> to_b;
  for (int c : rb.cell)
    if (c != v1) to_b.insert(want_u[static_cast<std::size_t>(r.index(c))] / 2);
  auto is_slot = [&](int c) { return c == slot[0] || c == slot[1]; };
  std::vector<int> a_only;
  for (int c : rext.cell)
    if (c != v1 && !is_slot(c)) a_only.push_back(c);

  auto slot_first = [&](const Ring& x) {
    const long f0 = x.index(slot[0]), f1 = x.index(slot[1]);
    return mod(f1 - f0, x.size()) == 1 ? f0 : f1;
  };
  for (;;) {
    bool misplaced = false;
    for (int c : a_only) misplaced = misplaced || to_b.count(eng.occ().at(c) / 2);
    if (!misplaced) break;
    const int z = eng.occ().at(slot[0]) / 2;
    const bool z_to_b = to_b.count(z) > 0;
    const Ring& x = z_to_b ? rb : rext;
    auto v = eng.view(x);
    const long Lx = x.size(), kx = static_cast<long>(v.gourd.size()), sx = x.index(v1), first = slot_first(x);
    std::vector<char> cand(v.gourd.size());
    for (std::size_t j = 0; j < v.gourd.size(); ++j)
      cand[j] = v.gourd[j] != z && (to_b.count(v.gourd[j]) > 0) != z_to_b;
    auto t = find_rotation(
        Lx, v, [&](long p, long f) { return p == sx && cand[static_cast<std::size_t>(gourd_at(Lx, kx, p, f, first))]; },
        true);
    eng.rotate(x, *t);
  }

  auto restrict_to = [&](const Ring& x, bool keep_slot) {
    RingCodes w;
    for (int c : x.cell)
      w.push_back(keep_slot && is_slot(c) ? eng.occ().at(c) : want_u[static_cast<std::size_t>(r.index(c))]);
    return w;
  };
  sort_quadratic(eng, ra, restrict_to(ra, sp.three_shared), opt, st);
  sort_quadratic(eng, rb, restrict_to(rb, false), opt, st);

  eng.rotate(r, u <= L - u ? -u * k : (L - u) * k);
  if (codes_on(eng.occ(), r) != want) throw Error("quadratic sort did not reach its target");
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline AlignedState aligned_state(const Board& b, const HamiltonianCycle& h, const Configuration& c) {
  detail::Ring r(b, h.order);
  detail::Engine eng(b, c);
  auto v = eng.view(r);
  AlignedState st{h, {}, static_cast<std::size_t>(v.empty)};
  for (std::size_t i = 0; i < v.gourd.size(); ++i) st.ring.emplace_back(v.gourd[i], v.first_code[i] & 1);
  return st;
}

inline std::pair<std::vector<Move>, Configuration> align_phase(const Board& b, const HamiltonianCycle& h,
                                                                const Configuration& c) {
  if (!is_hamiltonian_cycle(b, h)) throw Error("not a Hamiltonian cycle of the board");
  detail::Ring r(b, h.order);
  detail::Engine eng(b, c);
  detail::align(eng, r);
  return {eng.moves(), eng.occ().to_configuration()};
}

// Shifts E by `units` ring positions on an aligned configuration; each unit
// moves every gourd once.
inline std::vector<Move> rotate_cycle(const Board& b, const HamiltonianCycle& h, const Configuration& c, long units) {
  detail::Ring r(b, h.order);
  detail::Engine eng(b, c);
  eng.view(r);
  eng.rotate(r, -units * ((r.size() - 1) / 2));
  return eng.moves();
}

// The start gourds placed on their assigned target slots.
inline Configuration assigned_target(const Configuration& start, const Configuration& target) {
  auto slots = color_assignment(start, target);
  Configuration goal = start;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    goal.gourds[i].end_a = slots[i].first;
    goal.gourds[i].end_b = slots[i].second;
  }
  goal.empty = target.empty;
  return goal;
}

// Moves between two configurations that are both aligned with h; gourds
// are matched by their labels.
inline std::vector<Move> sort_aligned(const Board& b, const HamiltonianCycle& h, const Configuration& from,
                                      const Configuration& to, const SolveOptions& opt = {},
                                      SolveStats* stats = nullptr) {
  detail::Ring r(b, h.order);
  detail::Engine eng(b, from);
  eng.view(r);
  Occupancy target(b, assigned_target(from, to));
  auto want = detail::codes_on(target, r);
  SolveStats st;
  if (opt.strategy == Strategy::Cubic) detail::sort_cubic(eng, r, want);
  else detail::sort_quadratic(eng, r, want, opt, st);
  if (stats) *stats = st;
  return eng.moves();
}

inline SolvePlan solve(const Board& b, const Configuration& start, const Configuration& target,
                       const SolveOptions& opt = {}) {
  auto report = validate_proper(b);
  if (!report.proper) throw BoardError("board is not proper\n" + to_string(report));
  check_covers(b, start);
  check_covers(b, target);
  const Configuration goal = assigned_target(start, target);
  check_covers(b, goal);

  HamiltonianCycle h = find_hamiltonian(b);
  if (opt.strategy == Strategy::Quadratic) h = repair_seven_runs(b, h);
  h = normalized(h);

  SolvePlan plan;
  plan.strategy = opt.strategy;
  auto [s1, aligned_start] = align_phase(b, h, start);
  auto [t1, aligned_goal] = align_phase(b, h, goal);
  plan.s1 = std::move(s1);
  for (auto it = t1.rbegin(); it != t1.rend(); ++it) plan.s3.push_back(inverse(*it));
  plan.s2 = sort_aligned(b, h, aligned_start, aligned_goal, opt, &plan.stats);
  plan.stats.s1 = plan.s1.size();
  plan.stats.s2 = plan.s2.size();
  plan.stats.s3 = plan.s3.size();

  if (!(verify_sequence(b, start, plan.moves()) == goal)) throw Error("plan does not reach the target");
  return plan;
}

// ---------------------------------------------------------------------------

inline constexpr std::string_view kPlanHeader = "gourds-plan v1";

inline std::string serialize_plan(const SolvePlan& p) {
  std::ostringstream os;
  os << kPlanHeader << "\n";
  os << "# strategy " << to_string(p.strategy) << "\n";
  os << "# moves s1=" << p.s1.size() << " s2=" << p.s2.size() << " s3=" << p.s3.size() << "\n";
  const std::array<std::pair<const char*, const std::vector<Move>*>, 3> phases{
      {{"[S1]", &p.s1}, {"[S2]", &p.s2}, {"[S3]", &p.s3}}};
  for (const auto& [tag, moves] : phases) {
    os << tag << "\n";
    for (const auto& m : *moves) os << format_move(m) << "\n";
  }
  return os.str();
}

inline SolvePlan parse_plan(std::string_view text) {
  SolvePlan p;
  std::vector<Move>* cur = nullptr;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (!header) {
      if (line.find(kPlanHeader) != 0) throw ParseError(lineno, "expected header '" + std::string(kPlanHeader) + "'");
      header = true;
      continue;
    }
    if (tok[0] == "#") {
      if (tok.size() >= 3 && tok[1] == "strategy") p.strategy = tok[2] == "cubic" ? Strategy::Cubic : Strategy::Quadratic;
      continue;
    }
    if (tok[0] == "[S1]") cur = &p.s1;
    else if (tok[0] == "[S2]") cur = &p.s2;
    else if (tok[0] == "[S3]") cur = &p.s3;
    else if (!cur) throw ParseError(lineno, "move before a phase marker");
    else cur->push_back(parse_move_tokens(tok, lineno));
  }
  if (!header) throw ParseError(0, "empty plan");
  p.stats.s1 = p.s1.size();
  p.stats.s2 = p.s2.size();
  p.stats.s3 = p.s3.size();
  return p;
}

// ceil(sum over gourds of end displacements / 2): a move shifts at most two
// ends by one cell each. Gourds with equal end labels may arrive either way
// round.
inline long displacement_lower_bound(const Board& b, const Configuration& start, const std::vector<Slot>& slots) {
  std::map<int, std::vector<int>> dist;
  auto from = [&](HexCoord c) -> const std::vector<int>& {
    const int s = b.index_of(c);
    auto it = dist.find(s);
    if (it != dist.end()) return it->second;
    std::vector<int> d(b.size(), -1);
    std::vector<int> q{s};
    d[static_cast<std::size_t>(s)] = 0;
    for (std::size_t k = 0; k < q.size(); ++k)
      for (int w : b.neighbor_slots(q[k]))
        if (w >= 0 && d[static_cast<std::size_t>(w)] < 0) d[static_cast<std::size_t>(w)] = d[static_cast<std::size_t>(q[k])] + 1, q.push_back(w);
    return dist.emplace(s, std::move(d)).first->second;
  };
  auto dd = [&](HexCoord a, HexCoord c) { return static_cast<long>(from(a)[static_cast<std::size_t>(b.index_of(c))]); };
  long total = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& g = start.gourds[i];
    long best = dd(g.end_a, slots[i].first) + dd(g.end_b, slots[i].second);
    if (g.label_a == g.label_b) best = std::min(best, dd(g.end_a, slots[i].second) + dd(g.end_b, slots[i].first));
    total += best;
  }
  return (total + 1) / 2;
}

inline long displacement_lower_bound(const Board& b, const Configuration& start, const Configuration& target) {
  return displacement_lower_bound(b, start, color_assignment(start, target));
}

}  // namespace gourds
