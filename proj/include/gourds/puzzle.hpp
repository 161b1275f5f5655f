#pragma once

#include <cstdlib>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gourds/board.hpp"

namespace gourds {

// A 1x2 piece: two adjacent cells, each carrying the label of that end.
struct Gourd {
  HexCoord end_a;
  HexCoord end_b;
  Label label_a;
  Label label_b;

  friend bool operator==(const Gourd&, const Gourd&) = default;
};

// Placement of all gourds plus the single empty cell. Gourd identity is the
// index into `gourds`.
struct Configuration {
  std::vector<Gourd> gourds;
  HexCoord empty;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class MoveKind : std::uint8_t { Slide, Turn, Pivot, SharpTurn };

inline const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::Slide: return "slide";
    case MoveKind::Turn: return "turn";
    case MoveKind::Pivot: return "pivot";
    case MoveKind::SharpTurn: return "sharp";
  }
  return "?";
}

// One gourd move. `head` is the end next to the empty cell `target`;
// `tail` is the other end. For a pivot the tail stays put.
struct Move {
  HexCoord tail;
  HexCoord head;
  HexCoord target;
  MoveKind kind = MoveKind::Slide;

  friend bool operator==(const Move&, const Move&) = default;
};

enum class OracleMode : std::uint8_t { PivotRules, SharpTurnRules };

// Geometry of the three cells decides the kind; nullopt when the cells do
// not describe a move shape at all.
inline std::optional<MoveKind> classify_move(HexCoord tail, HexCoord head, HexCoord target,
                                             OracleMode mode = OracleMode::PivotRules) {
  if (!adjacent(tail, head) || !adjacent(head, target) || tail == target) return std::nullopt;
  if (target - head == head - tail) return MoveKind::Slide;
  if (adjacent(tail, target)) return mode == OracleMode::PivotRules ? MoveKind::Pivot : MoveKind::SharpTurn;
  return MoveKind::Turn;
}

inline Move make_move(HexCoord tail, HexCoord head, HexCoord target, OracleMode mode = OracleMode::PivotRules) {
  auto k = classify_move(tail, head, target, mode);
  if (!k) throw IllegalMove("cells do not form a move");
  return {tail, head, target, *k};
}

// The move that undoes `m` from the configuration `m` produced.
inline Move inverse(const Move& m) {
  if (m.kind == MoveKind::Pivot) return {m.tail, m.target, m.head, MoveKind::Pivot};
  if (m.kind == MoveKind::SharpTurn) return {m.target, m.head, m.tail, MoveKind::SharpTurn};
  return {m.target, m.head, m.tail, m.kind};
}

class SequenceError : public IllegalMove {
 public:
  SequenceError(std::size_t index, const std::string& reason)
      : IllegalMove("move " + std::to_string(index) + ": " + reason), index_(index), reason_(reason) {}
  std::size_t index() const { return index_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t index_;
  std::string reason_;
};

// Dense per-cell view of a configuration on a fixed board: occupant code
// 2 * gourd + end (end 0 = a, 1 = b) or -1 for the empty cell.
class Occupancy {
 public:
  Occupancy(const Board& board, const Configuration& c) : board_(&board), occ_(board.size(), -2) {
    auto place = [&](HexCoord cell, int code) {
      int i = board.index_of(cell);
      if (i < 0) {
        std::ostringstream os;
        os << "cell " << cell << " is not on the board";
        throw BoardError(os.str());
      }
      if (occ_[static_cast<std::size_t>(i)] != -2) {
        std::ostringstream os;
        os << "cell " << cell << " is covered twice";
        throw BoardError(os.str());
      }
      occ_[static_cast<std::size_t>(i)] = code;
    };
    for (std::size_t g = 0; g < c.gourds.size(); ++g) {
      const auto& gd = c.gourds[g];
      if (!adjacent(gd.end_a, gd.end_b)) throw BoardError("gourd " + std::to_string(g) + " ends are not adjacent");
      place(gd.end_a, static_cast<int>(2 * g));
      place(gd.end_b, static_cast<int>(2 * g + 1));
    }
    place(c.empty, -1);
    for (int v : occ_)
      if (v == -2) throw BoardError("configuration does not cover the board");
    empty_ = board.index_of(c.empty);
    labels_.reserve(2 * c.gourds.size());
    for (const auto& gd : c.gourds) {
      labels_.push_back(gd.label_a);
      labels_.push_back(gd.label_b);
    }
    pos_.assign(2 * c.gourds.size(), -1);
    for (std::size_t i = 0; i < occ_.size(); ++i)
      if (occ_[i] >= 0) pos_[static_cast<std::size_t>(occ_[i])] = static_cast<int>(i);
  }

  const Board& board() const { return *board_; }
  int empty() const { return empty_; }
  int at(int cell) const { return occ_[static_cast<std::size_t>(cell)]; }
  int position(int code) const { return pos_[static_cast<std::size_t>(code)]; }
  std::size_t gourd_count() const { return pos_.size() / 2; }
  // Cell holding the other end of whatever covers `cell`.
  int partner(int cell) const { return pos_[static_cast<std::size_t>(at(cell) ^ 1)]; }

  // Legal (tail, head) cell index pairs for the current empty cell.
  template <typename Fn>
  void for_each_move(Fn&& fn) const {
    for (int h : board_->neighbor_slots(empty_))
      if (h >= 0) fn(partner(h), h);
  }

  // Applies the move given by cell indices; the caller guarantees legality.
  void apply(int tail, int head, bool pivot) {
    const int target = empty_;
    const int head_code = at(head), tail_code = at(tail);
    if (pivot) {
      set(target, head_code);
      set(head, -1);
      empty_ = head;
    } else {
      set(target, head_code);
      set(head, tail_code);
      set(tail, -1);
      empty_ = tail;
    }
  }

  // Checks legality and applies; throws IllegalMove with a reason.
  MoveKind apply_checked(const Move& m, OracleMode mode = OracleMode::PivotRules) {
    const int t = board_->index_of(m.tail), h = board_->index_of(m.head), g = board_->index_of(m.target);
    if (t < 0 || h < 0 || g < 0) throw IllegalMove("move leaves the board");
    if (g != empty_) throw IllegalMove("target is not the empty cell");
    if (at(h) < 0 || partner(h) != t) throw IllegalMove("tail and head are not one gourd");
    auto kind = classify_move(m.tail, m.head, m.target, mode);
    if (!kind) throw IllegalMove("head is not adjacent to the empty cell");
    if (*kind != m.kind) throw IllegalMove(std::string("move kind is ") + to_string(*kind) + ", not " + to_string(m.kind));
    apply(t, h, *kind == MoveKind::Pivot);
    return *kind;
  }

  Configuration to_configuration() const {
    Configuration c;
    c.gourds.resize(gourd_count());
    for (std::size_t g = 0; g < c.gourds.size(); ++g) {
      c.gourds[g].end_a = board_->cell(pos_[2 * g]);
      c.gourds[g].end_b = board_->cell(pos_[2 * g + 1]);
      c.gourds[g].label_a = labels_[2 * g];
      c.gourds[g].label_b = labels_[2 * g + 1];
    }
    c.empty = board_->cell(empty_);
    return c;
  }

  // Compact identity key: one byte per cell (0 = empty, 1 + code otherwise),
  // two bytes once codes no longer fit in one.
  std::string key() const {
    if (occ_.size() < 255) {
      std::string k(occ_.size(), '\0');
      for (std::size_t i = 0; i < occ_.size(); ++i) k[i] = static_cast<char>(occ_[i] + 1);
      return k;
    }
    std::string k(2 * occ_.size(), '\0');
    for (std::size_t i = 0; i < occ_.size(); ++i) {
      k[2 * i] = static_cast<char>((occ_[i] + 1) & 0xff);
      k[2 * i + 1] = static_cast<char>((occ_[i] + 1) >> 8);
    }
    return k;
  }

  // Key that only sees end labels (colored equivalence).
  std::string label_key() const {
    std::string k;
    k.reserve(occ_.size() * 3);
    for (int v : occ_) {
      if (v < 0) {
        k += "\xff\xff\xff";
        continue;
      }
      const Label& l = labels_[static_cast<std::size_t>(v)];
      k += static_cast<char>(l.kind);
      k += static_cast<char>(l.value & 0xff);
      k += static_cast<char>((l.value >> 8) & 0xff);
    }
    return k;
  }

  const std::vector<Label>& end_labels() const { return labels_; }

 private:
  void set(int cell, int code) {
    occ_[static_cast<std::size_t>(cell)] = code;
    if (code >= 0) pos_[static_cast<std::size_t>(code)] = cell;
  }

  const Board* board_;
  std::vector<int> occ_;
  std::vector<int> pos_;
  std::vector<Label> labels_;
  int empty_ = -1;
};

inline void check_covers(const Board& b, const Configuration& c) { Occupancy(b, c); }

inline std::vector<Move> legal_moves(const Board& b, const Configuration& c,
                                     OracleMode mode = OracleMode::PivotRules) {
  Occupancy occ(b, c);
  std::vector<Move> out;
  occ.for_each_move([&](int tail, int head) {
    out.push_back(make_move(b.cell(tail), b.cell(head), b.cell(occ.empty()), mode));
  });
  return out;
}

// Applies a move without a board: geometry alone decides legality.
inline Configuration apply_move(const Configuration& c, const Move& m) {
  if (m.target != c.empty) throw IllegalMove("target is not the empty cell");
  auto kind = classify_move(m.tail, m.head, m.target, m.kind == MoveKind::SharpTurn ? OracleMode::SharpTurnRules
                                                                                   : OracleMode::PivotRules);
  if (!kind || *kind != m.kind) throw IllegalMove("move geometry does not match its kind");
  Configuration out = c;
  for (auto& g : out.gourds) {
    HexCoord* head_end = nullptr;
    HexCoord* tail_end = nullptr;
    if (g.end_a == m.head && g.end_b == m.tail) head_end = &g.end_a, tail_end = &g.end_b;
    if (g.end_b == m.head && g.end_a == m.tail) head_end = &g.end_b, tail_end = &g.end_a;
    if (!head_end) continue;
    *head_end = m.target;
    if (m.kind == MoveKind::Pivot) {
      out.empty = m.head;
    } else {
      *tail_end = m.head;
      out.empty = m.tail;
    }
    return out;
  }
  throw IllegalMove("no gourd occupies tail and head");
}

inline Configuration verify_sequence(const Board& b, const Configuration& start, const std::vector<Move>& moves,
                                     OracleMode mode = OracleMode::PivotRules) {
  Occupancy occ(b, start);
  for (std::size_t i = 0; i < moves.size(); ++i) {
    try {
      occ.apply_checked(moves[i], mode);
    } catch (const IllegalMove& e) {
      throw SequenceError(i, e.what());
    }
  }
  return occ.to_configuration();
}

// ---------------------------------------------------------------------------
// Reachability oracle

inline constexpr std::size_t kDefaultStateGuard = 10'000'000;

inline std::size_t default_state_guard() {
  if (const char* env = std::getenv("GOURDS_STATE_GUARD")) {
    try {
      long long v = std::stoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return kDefaultStateGuard;
}

struct ReachOptions {
  OracleMode mode = OracleMode::PivotRules;
  std::size_t guard = default_state_guard();
  // Compare states by end labels instead of gourd identity.
  bool by_labels = false;
  // Optional restriction: only moves whose three cells have mask[i] != 0.
  const std::vector<char>* cell_mask = nullptr;
};

namespace detail {

// Generic BFS over the configuration graph. `visit(occ)` returns true to stop.
template <typename Visit>
void bfs(const Board& b, const Configuration& start, const ReachOptions& opt, Visit&& visit,
         std::vector<std::pair<std::string, std::pair<std::size_t, Move>>>* parents = nullptr) {
  Occupancy root(b, start);
  auto key_of = [&](const Occupancy& o) { return opt.by_labels ? o.label_key() : o.key(); };
  std::unordered_map<std::string, std::size_t> seen;
  std::deque<std::pair<Occupancy, std::size_t>> queue;
  seen.emplace(key_of(root), 0);
  if (parents) parents->push_back({key_of(root), {SIZE_MAX, Move{}}});
  queue.emplace_back(root, 0);
  const bool pivot_rules = opt.mode == OracleMode::PivotRules;
  while (!queue.empty()) {
    auto [occ, id] = std::move(queue.front());
    queue.pop_front();
    if (visit(occ, id)) return;
    const int e = occ.empty();
    if (opt.cell_mask && !(*opt.cell_mask)[static_cast<std::size_t>(e)]) continue;
    occ.for_each_move([&](int tail, int head) {
      if (opt.cell_mask && (!(*opt.cell_mask)[static_cast<std::size_t>(tail)] ||
                            !(*opt.cell_mask)[static_cast<std::size_t>(head)]))
        return;
      const bool triangle = b.adjacent_idx(tail, e);
      Occupancy next = occ;
      next.apply(tail, head, triangle && pivot_rules);
      auto k = key_of(next);
      if (seen.count(k)) return;
      if (seen.size() >= opt.guard) throw GuardExceeded("state space exceeds guard of " + std::to_string(opt.guard));
      const std::size_t nid = seen.size();
      seen.emplace(k, nid);
      if (parents) {
        auto kind = classify_move(b.cell(tail), b.cell(head), b.cell(e), opt.mode);
        parents->push_back({std::move(k), {id, Move{b.cell(tail), b.cell(head), b.cell(e), *kind}}});
      }
      queue.emplace_back(std::move(next), nid);
    });
  }
}

}  // namespace detail

// All configurations reachable from `start`, in BFS order.
inline std::vector<Configuration> reach_states(const Board& b, const Configuration& start,
                                               const ReachOptions& opt = {}) {
  std::vector<Configuration> out;
  detail::bfs(b, start, opt, [&](const Occupancy& o, std::size_t) {
    out.push_back(o.to_configuration());
    return false;
  });
  return out;
}

inline std::size_t count_reachable(const Board& b, const Configuration& start, const ReachOptions& opt = {}) {
  std::size_t n = 0;
  detail::bfs(b, start, opt, [&](const Occupancy&, std::size_t) {
    ++n;
    return false;
  });
  return n;
}

// Fewest-move sequence from start to goal, or nullopt when unreachable.
inline std::optional<std::vector<Move>> shortest_path(const Board& b, const Configuration& start,
                                                      const Configuration& goal, const ReachOptions& opt = {}) {
  Occupancy target(b, goal);
  const std::string goal_key = opt.by_labels ? target.label_key() : target.key();
  std::vector<std::pair<std::string, std::pair<std::size_t, Move>>> parents;
  std::optional<std::size_t> hit;
  detail::bfs(
      b, start, opt,
      [&](const Occupancy& o, std::size_t id) {
        if ((opt.by_labels ? o.label_key() : o.key()) == goal_key) {
          hit = id;
          return true;
        }
        return false;
      },
      &parents);
  if (!hit) return std::nullopt;
  std::vector<Move> path;
  for (std::size_t id = *hit; parents[id].second.first != SIZE_MAX; id = parents[id].second.first)
    path.push_back(parents[id].second.second);
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------

// Seeded random walk of `steps` uniformly chosen legal moves.
inline std::pair<Configuration, std::vector<Move>> scramble(const Board& b, const Configuration& c, int steps,
                                                            std::uint64_t seed) {
  Occupancy occ(b, c);
  std::mt19937_64 rng(seed);
  std::vector<Move> trace;
  std::vector<std::pair<int, int>> options;
  for (int s = 0; s < steps; ++s) {
    options.clear();
    occ.for_each_move([&](int tail, int head) { options.emplace_back(tail, head); });
    if (options.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    auto [tail, head] = options[pick(rng)];
    Move m = make_move(b.cell(tail), b.cell(head), b.cell(occ.empty()));
    occ.apply(tail, head, m.kind == MoveKind::Pivot);
    trace.push_back(m);
  }
  return {occ.to_configuration(), std::move(trace)};
}

// Target cells for one gourd: `first` receives label_a, `second` label_b.
struct Slot {
  HexCoord first;
  HexCoord second;
  friend bool operator==(const Slot&, const Slot&) = default;
};

// Matches every start gourd to a target gourd with the same unordered label
// pair. Within a class of equal pairs, gourds and slots pair up in listing order.
inline std::vector<Slot> color_assignment(const Configuration& start, const Configuration& target) {
  if (start.gourds.size() != target.gourds.size()) throw Error("gourd count differs between start and target");
  std::vector<char> used(target.gourds.size(), 0);
  std::vector<Slot> out;
  out.reserve(start.gourds.size());
  for (std::size_t i = 0; i < start.gourds.size(); ++i) {
    const auto& g = start.gourds[i];
    bool found = false;
    for (std::size_t j = 0; j < target.gourds.size() && !found; ++j) {
      if (used[j]) continue;
      const auto& t = target.gourds[j];
      if (g.label_a == t.label_a && g.label_b == t.label_b) {
        out.push_back({t.end_a, t.end_b});
      } else if (g.label_a == t.label_b && g.label_b == t.label_a) {
        out.push_back({t.end_b, t.end_a});
      } else {
        continue;
      }
      used[j] = 1;
      found = true;
    }
    if (!found)
      throw Error("label multiset mismatch: no target gourd for (" + to_string(g.label_a) + "," +
                  to_string(g.label_b) + ")");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text formats

inline constexpr std::string_view kConfigHeader = "gourds-config v1";

inline Configuration parse_configuration(std::string_view text) {
  Configuration c;
  bool have_empty = false;
  detail::for_each_record(text, kConfigHeader, [&](int lineno, const std::vector<std::string>& tok) {
    if (tok.empty()) return;
    if (tok[0] == "g") {
      if (tok.size() != 7) throw ParseError(lineno, "expected 'g qa ra labelA qb rb labelB'");
      Gourd g;
      g.end_a = {detail::parse_int(tok[1], lineno), detail::parse_int(tok[2], lineno)};
      g.end_b = {detail::parse_int(tok[4], lineno), detail::parse_int(tok[5], lineno)};
      auto la = parse_label(tok[3]), lb = parse_label(tok[6]);
      if (!la || !lb) throw ParseError(lineno, "bad label");
      g.label_a = *la;
      g.label_b = *lb;
      if (!adjacent(g.end_a, g.end_b)) throw ParseError(lineno, "gourd ends are not adjacent");
      c.gourds.push_back(g);
    } else if (tok[0] == "e") {
      if (tok.size() != 3) throw ParseError(lineno, "expected 'e q r'");
      if (have_empty) throw ParseError(lineno, "second empty cell");
      c.empty = {detail::parse_int(tok[1], lineno), detail::parse_int(tok[2], lineno)};
      have_empty = true;
    } else {
      throw ParseError(lineno, "unknown record '" + tok[0] + "'");
    }
  });
  if (!have_empty) throw ParseError(0, "missing empty cell record");
  return c;
}

inline std::string serialize_configuration(const Configuration& c) {
  std::ostringstream os;
  os << kConfigHeader << '\n';
  for (const auto& g : c.gourds)
    os << "g " << g.end_a.q << ' ' << g.end_a.r << ' ' << to_string(g.label_a) << ' ' << g.end_b.q << ' '
       << g.end_b.r << ' ' << to_string(g.label_b) << '\n';
  os << "e " << c.empty.q << ' ' << c.empty.r << '\n';
  return os.str();
}

inline std::string format_move(const Move& m) {
  std::ostringstream os;
  os << "m " << m.tail.q << ' ' << m.tail.r << ' ' << m.head.q << ' ' << m.head.r << ' ' << m.target.q << ' '
     << m.target.r;
  return os.str();
}

// Parses one `m ...` record; the kind is recomputed from geometry.
inline Move parse_move_tokens(const std::vector<std::string>& tok, int lineno,
                              OracleMode mode = OracleMode::PivotRules) {
  if (tok.size() != 7 || tok[0] != "m") throw ParseError(lineno, "expected 'm qt rt qh rh qg rg'");
  int v[6];
  for (int i = 0; i < 6; ++i) v[i] = detail::parse_int(tok[static_cast<std::size_t>(i + 1)], lineno);
  auto kind = classify_move({v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, mode);
  if (!kind) throw ParseError(lineno, "cells do not form a move");
  return {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, *kind};
}

inline std::vector<Move> parse_moves(std::string_view text, OracleMode mode = OracleMode::PivotRules) {
  std::vector<Move> out;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0][0] == '#' || tok[0][0] == '[' || tok[0] == "gourds-plan") continue;
    out.push_back(parse_move_tokens(tok, lineno, mode));
  }
  return out;
}

inline std::string serialize_moves(const std::vector<Move>& moves) {
  std::string out;
  for (const auto& m : moves) out += format_move(m) + '\n';
  return out;
}

}  // namespace gourds
