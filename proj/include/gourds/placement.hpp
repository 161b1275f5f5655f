#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "gourds/board.hpp"
#include "gourds/gadget_data.hpp"
#include "gourds/puzzle.hpp"

namespace gourds {

// Unordered colour pair, stored with first <= second.
using ColorPair = std::pair<int, int>;

inline ColorPair color_pair(int a, int b) { return a <= b ? ColorPair{a, b} : ColorPair{b, a}; }

using Budget = std::map<ColorPair, int>;

inline int budget_total(const Budget& b) {
  int t = 0;
  for (const auto& [p, n] : b) t += n;
  return t;
}

// Cells of one gadget copy inside a generated instance. `left` is the subset
// forming a clause gadget's small left part (empty for variable gadgets).
struct Footprint {
  std::string name;
  std::vector<HexCoord> cells;
  std::vector<HexCoord> left;
};

struct PlacementInstance {
  Board board;
  Budget budget;
  std::vector<Footprint> layout;
};

struct PlacementOptions {
  // When false the budget is an upper bound: pairs may be left over, and
  // the colour-count invariant is not required.
  bool exact_budget = true;
};

// Problems with an instance, in the order they were found. Empty means the
// instance is well formed.
inline std::vector<std::string> instance_problems(const PlacementInstance& inst, const PlacementOptions& opt = {}) {
  std::vector<std::string> out;
  const Board& b = inst.board;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b.labels()[i].kind != Label::Kind::Color) {
      std::ostringstream os;
      os << "cell " << b.cells()[i] << " is not coloured";
      out.push_back(os.str());
      return out;
    }
  for (const auto& [p, n] : inst.budget)
    if (n < 0) out.push_back("negative count for (c" + std::to_string(p.first) + ",c" + std::to_string(p.second) + ")");
  if (!opt.exact_budget) {
    if (b.size() % 2 == 0) out.push_back("even cell count leaves no single empty cell");
    return out;
  }
  if (2 * budget_total(inst.budget) + 1 != static_cast<int>(b.size()))
    out.push_back("2 * budget (" + std::to_string(2 * budget_total(inst.budget)) + ") + 1 != cells (" +
                  std::to_string(b.size()) + ")");
  return out;
}

// Cell count per colour minus gourd-end count per colour. A solvable exact
// instance has exactly one colour at +1 and all others at 0.
inline std::map<int, int> color_surplus(const PlacementInstance& inst) {
  std::map<int, int> d;
  for (const auto& l : inst.board.labels()) ++d[l.value];
  for (const auto& [p, n] : inst.budget) {
    d[p.first] -= n;
    d[p.second] -= n;
  }
  return d;
}

inline bool color_counts_match(const PlacementInstance& inst) {
  int plus_one = 0;
  for (const auto& [k, v] : color_surplus(inst)) {
    if (v == 1) ++plus_one;
    else if (v != 0) return false;
  }
  return plus_one == 1;
}

// ---------------------------------------------------------------------------
// Monotone 1-in-3 formulas

struct Formula1in3 {
  std::vector<std::string> variables;
  std::vector<std::array<int, 3>> clauses;  // indices into variables
};

inline constexpr std::string_view kFormulaHeader = "gourds-1in3 v1";

inline Formula1in3 parse_formula(std::string_view text) {
  Formula1in3 f;
  std::map<std::string, int> index;
  detail::for_each_record(text, kFormulaHeader, [&](int lineno, const std::vector<std::string>& tok) {
    if (tok.size() != 4 || tok[0] != "c") throw ParseError(lineno, "expected 'c <var> <var> <var>'");
    std::array<int, 3> cl{};
    for (int i = 0; i < 3; ++i) {
      auto [it, fresh] = index.emplace(tok[1 + i], static_cast<int>(f.variables.size()));
      if (fresh) f.variables.push_back(tok[1 + i]);
      cl[i] = it->second;
    }
    f.clauses.push_back(cl);
  });
  return f;
}

inline std::string serialize_formula(const Formula1in3& f) {
  std::ostringstream os;
  os << kFormulaHeader << '\n';
  for (const auto& c : f.clauses)
    os << "c " << f.variables[c[0]] << ' ' << f.variables[c[1]] << ' ' << f.variables[c[2]] << '\n';
  return os.str();
}

inline std::vector<std::string> formula_problems(const Formula1in3& f) {
  std::vector<std::string> out;
  std::vector<int> occ(f.variables.size(), 0);
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    const auto& c = f.clauses[i];
    for (int v : c) {
      if (v < 0 || v >= static_cast<int>(f.variables.size())) {
        out.push_back("clause " + std::to_string(i + 1) + " names an unknown variable");
        return out;
      }
      ++occ[v];
    }
    if (c[0] == c[1] || c[0] == c[2] || c[1] == c[2])
      out.push_back("clause " + std::to_string(i + 1) + " repeats a variable");
  }
  for (std::size_t v = 0; v < occ.size(); ++v)
    if (occ[v] != 3)
      out.push_back("variable " + f.variables[v] + " occurs " + std::to_string(occ[v]) + " times, expected 3");
  if (f.variables.empty()) out.push_back("formula has no variables");
  return out;
}

inline void validate_formula(const Formula1in3& f) {
  auto p = formula_problems(f);
  if (!p.empty()) throw Error("invalid formula: " + p.front());
}

inline constexpr std::size_t kBruteVariableGuard = 24;

// Every assignment with exactly one true variable per clause. Occurrence
// counts are not checked here.
inline std::vector<std::vector<bool>> brute_1in3sat(const Formula1in3& f) {
  const std::size_t n = f.variables.size();
  if (n > kBruteVariableGuard)
    throw GuardExceeded("brute_1in3sat: " + std::to_string(n) + " variables exceeds guard of " +
                        std::to_string(kBruteVariableGuard));
  std::vector<std::vector<bool>> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    bool ok = true;
    for (const auto& c : f.clauses) {
      int t = 0;
      for (int v : c) t += (mask >> v) & 1u;
      if (t != 1) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::vector<bool> a(n);
    for (std::size_t v = 0; v < n; ++v) a[v] = (mask >> v) & 1u;
    out.push_back(std::move(a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Instance text format

inline constexpr std::string_view kPlacementHeader = "gourds-placement v1";

namespace detail {

inline int color_of_token(const std::string& s, int lineno) {
  auto l = parse_label(s);
  if (!l || l->kind != Label::Kind::Color) throw ParseError(lineno, "expected a colour label, got '" + s + "'");
  return l->value;
}

inline void read_coords(const std::vector<std::string>& tok, std::size_t from, int lineno,
                        std::vector<HexCoord>& out) {
  if ((tok.size() - from) % 2 != 0) throw ParseError(lineno, "odd number of coordinates");
  for (std::size_t i = from; i < tok.size(); i += 2)
    out.push_back({parse_int(tok[i], lineno), parse_int(tok[i + 1], lineno)});
}

}  // namespace detail

// Records: `q r label` cells, `b cA cB count` budget entries, and optional
// `fp name q r ...` / `fl name q r ...` footprint lines.
inline PlacementInstance parse_instance(std::string_view text) {
  PlacementInstance inst;
  std::vector<HexCoord> cells;
  std::vector<Label> labels;
  std::map<std::string, std::size_t> fp_index;
  auto footprint = [&](const std::string& name) -> Footprint& {
    auto [it, fresh] = fp_index.emplace(name, inst.layout.size());
    if (fresh) inst.layout.push_back({name, {}, {}});
    return inst.layout[it->second];
  };
  detail::for_each_record(text, kPlacementHeader, [&](int lineno, const std::vector<std::string>& tok) {
    if (tok[0] == "b") {
      if (tok.size() != 4) throw ParseError(lineno, "expected 'b colorA colorB count'");
      auto p = color_pair(detail::color_of_token(tok[1], lineno), detail::color_of_token(tok[2], lineno));
      int n = detail::parse_int(tok[3], lineno);
      if (n < 0) throw ParseError(lineno, "negative budget count");
      inst.budget[p] += n;
    } else if (tok[0] == "fp" || tok[0] == "fl") {
      if (tok.size() < 2) throw ParseError(lineno, "footprint line needs a name");
      auto& fp = footprint(tok[1]);
      detail::read_coords(tok, 2, lineno, tok[0] == "fp" ? fp.cells : fp.left);
    } else {
      if (tok.size() != 3) throw ParseError(lineno, "expected 'q r label'");
      cells.push_back({detail::parse_int(tok[0], lineno), detail::parse_int(tok[1], lineno)});
      auto l = parse_label(tok[2]);
      if (!l) throw ParseError(lineno, "bad label '" + tok[2] + "'");
      labels.push_back(*l);
    }
  });
  if (cells.empty()) throw ParseError(0, "instance has no cells");
  try {
    inst.board = Board(std::move(cells), std::move(labels));
  } catch (const BoardError& e) {
    throw ParseError(0, e.what());
  }
  return inst;
}

inline std::string serialize_instance(const PlacementInstance& inst) {
  std::ostringstream os;
  os << kPlacementHeader << '\n';
  const Board& b = inst.board;
  for (std::size_t i = 0; i < b.size(); ++i)
    os << b.cells()[i].q << ' ' << b.cells()[i].r << ' ' << to_string(b.labels()[i]) << '\n';
  for (const auto& [p, n] : inst.budget)
    os << "b " << to_string(Label::color(p.first)) << ' ' << to_string(Label::color(p.second)) << ' ' << n << '\n';
  for (const auto& fp : inst.layout) {
    os << "fp " << fp.name;
    for (auto c : fp.cells) os << ' ' << c.q << ' ' << c.r;
    os << '\n';
    if (!fp.left.empty()) {
      os << "fl " << fp.name;
      for (auto c : fp.left) os << ' ' << c.q << ' ' << c.r;
      os << '\n';
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Search

namespace detail {

struct PlacementSearch {
  const Board& b;
  bool exact;
  std::vector<int> color;
  std::vector<ColorPair> pairs;
  std::vector<int> remaining;
  std::vector<std::array<int, 6>> nbr_pair;  // pair id per neighbour slot, -1 if none
  std::vector<int> mate;                      // -1 uncovered, -2 empty, else partner cell
  int empty = -1;

  PlacementSearch(const PlacementInstance& inst, bool exact_budget) : b(inst.board), exact(exact_budget) {
    for (const auto& [p, n] : inst.budget) {
      if (n <= 0) continue;
      pairs.push_back(p);
      remaining.push_back(n);
    }
    for (const auto& l : b.labels()) color.push_back(l.value);
    nbr_pair.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t k = 0; k < 6; ++k) {
        int n = b.neighbor_slots(static_cast<int>(i))[k];
        nbr_pair[i][k] = n < 0 ? -1 : pair_id(color_pair(color[i], color[n]));
      }
    mate.assign(b.size(), -1);
  }

  int pair_id(ColorPair p) const {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), p);
    return it != pairs.end() && *it == p ? static_cast<int>(it - pairs.begin()) : -1;
  }

  void place(int i, int n, int id) {
    mate[i] = n;
    mate[n] = i;
    --remaining[id];
  }
  void unplace(int i, int n, int id) {
    mate[i] = mate[n] = -1;
    ++remaining[id];
  }

  bool budget_done() const {
    if (!exact) return true;
    return std::all_of(remaining.begin(), remaining.end(), [](int r) { return r == 0; });
  }

  Configuration to_configuration() const {
    Configuration c;
    for (std::size_t i = 0; i < b.size(); ++i) {
      int m = mate[i];
      if (m == -2) c.empty = b.cells()[i];
      if (m < 0 || m < static_cast<int>(i)) continue;
      c.gourds.push_back({b.cells()[i], b.cells()[m], b.labels()[i], b.labels()[m]});
    }
    return c;
  }

  // Lowest-index uncovered cell first; every tiling is produced exactly once.
  template <typename Fn>
  bool enumerate(int from, Fn&& on_done) {
    int i = from;
    while (i < static_cast<int>(b.size()) && mate[i] != -1) ++i;
    if (i == static_cast<int>(b.size())) return empty >= 0 && budget_done() ? on_done() : false;
    for (std::size_t k = 0; k < 6; ++k) {
      int n = b.neighbor_slots(i)[k], id = nbr_pair[i][k];
      if (n < 0 || id < 0 || mate[n] != -1 || remaining[id] == 0) continue;
      place(i, n, id);
      bool stop = enumerate(i + 1, on_done);
      unplace(i, n, id);
      if (stop) return true;
    }
    if (empty < 0) {
      mate[i] = -2;
      empty = i;
      bool stop = enumerate(i + 1, on_done);
      mate[i] = -1;
      empty = -1;
      if (stop) return true;
    }
    return false;
  }
};

// Component-by-component exact search with a failure memo keyed on the
// component index and the remaining budget.
struct ComponentSolver {
  PlacementSearch& s;
  std::vector<std::vector<int>> comps;
  std::vector<char> may_hold_empty;
  std::set<std::pair<std::size_t, std::vector<int>>> failed;

  int options(int i, bool empty_ok) const {
    int n_opt = empty_ok ? 1 : 0;
    for (std::size_t k = 0; k < 6; ++k) {
      int n = s.b.neighbor_slots(i)[k], id = s.nbr_pair[i][k];
      if (n >= 0 && id >= 0 && s.mate[n] == -1 && s.remaining[id] > 0) ++n_opt;
    }
    return n_opt;
  }

  bool solve(std::size_t ci) {
    if (ci == comps.size()) return s.budget_done();
    std::pair<std::size_t, std::vector<int>> key{ci, s.remaining};
    if (failed.count(key)) return false;
    if (tile(ci, static_cast<int>(comps[ci].size()))) return true;
    failed.insert(std::move(key));
    return false;
  }

  bool tile(std::size_t ci, int left) {
    if (left == 0) return solve(ci + 1);
    bool empty_ok = may_hold_empty[ci] && s.empty < 0;
    int best = -1, best_opt = 1 << 30;
    for (int i : comps[ci]) {
      if (s.mate[i] != -1) continue;
      int o = options(i, empty_ok);
      if (o < best_opt) {
        best = i;
        best_opt = o;
        if (o <= 1) break;
      }
    }
    if (best_opt == 0) return false;
    int i = best;
    for (std::size_t k = 0; k < 6; ++k) {
      int n = s.b.neighbor_slots(i)[k], id = s.nbr_pair[i][k];
      if (n < 0 || id < 0 || s.mate[n] != -1 || s.remaining[id] == 0) continue;
      s.place(i, n, id);
      if (tile(ci, left - 2)) return true;
      s.unplace(i, n, id);
    }
    if (empty_ok) {
      s.mate[i] = -2;
      s.empty = i;
      if (tile(ci, left - 1)) return true;
      s.mate[i] = -1;
      s.empty = -1;
    }
    return false;
  }
};

inline std::vector<std::vector<int>> components(const Board& b, const std::vector<char>& member,
                                                const std::function<bool(int, int)>& linked) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(b.size(), 0);
  for (int start = 0; start < static_cast<int>(b.size()); ++start) {
    if (!member[start] || seen[start]) continue;
    out.emplace_back();
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out.back().push_back(v);
      for (int n : b.neighbor_slots(v))
        if (n >= 0 && member[n] && !seen[n] && linked(v, n)) {
          seen[n] = 1;
          stack.push_back(n);
        }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

}  // namespace detail

inline void require_well_formed(const PlacementInstance& inst, const PlacementOptions& opt) {
  auto p = instance_problems(inst, opt);
  if (!p.empty()) throw Error("malformed placement instance: " + p.front());
}

// A tiling of all cells but one drawn from the budget, or nullopt.
inline std::optional<Configuration> solve_placement(const PlacementInstance& inst, const PlacementOptions& opt = {}) {
  require_well_formed(inst, opt);
  if (opt.exact_budget && !color_counts_match(inst)) return std::nullopt;
  detail::PlacementSearch s(inst, opt.exact_budget);
  const Board& b = s.b;

  // A colour whose only budget pair is with itself tiles independently of
  // everything else: a maximum matching inside each of its components.
  std::set<int> mixed;
  for (const auto& p : s.pairs)
    if (p.first != p.second) mixed.insert({p.first, p.second});
  std::vector<char> isolated(b.size()), rest(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    isolated[i] = !mixed.count(s.color[i]);
    rest[i] = !isolated[i];
  }
  int odd = 0;
  auto same_color = [&](int u, int v) { return s.color[u] == s.color[v]; };
  for (const auto& comp : detail::components(b, isolated, same_color)) {
    using G = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
    G g(comp.size());
    std::map<int, int> local;
    for (std::size_t j = 0; j < comp.size(); ++j) local[comp[j]] = static_cast<int>(j);
    for (std::size_t j = 0; j < comp.size(); ++j)
      for (int n : b.neighbor_slots(comp[j]))
        if (n > comp[j] && local.count(n)) boost::add_edge(j, static_cast<std::size_t>(local[n]), g);
    std::vector<boost::graph_traits<G>::vertex_descriptor> m(comp.size());
    boost::edmonds_maximum_cardinality_matching(g, &m[0]);
    int id = s.pair_id(color_pair(s.color[comp[0]], s.color[comp[0]]));
    const auto none = boost::graph_traits<G>::null_vertex();
    for (std::size_t j = 0; j < comp.size(); ++j) {
      if (m[j] == none) {
        if (s.empty >= 0) return std::nullopt;
        s.mate[comp[j]] = -2;
        s.empty = comp[j];
      } else if (m[j] > j) {
        if (id < 0 || s.remaining[id] == 0) return std::nullopt;
        s.place(comp[j], comp[m[j]], id);
      }
    }
    if (comp.size() % 2) ++odd;
  }
  if (odd > 1) return std::nullopt;

  detail::ComponentSolver cs{s, {}, {}, {}};
  auto usable = [&](int u, int v) {
    int id = s.pair_id(color_pair(s.color[u], s.color[v]));
    return id >= 0;
  };
  cs.comps = detail::components(b, rest, usable);
  for (const auto& c : cs.comps) {
    bool is_odd = c.size() % 2 == 1;
    cs.may_hold_empty.push_back(is_odd);
    if (is_odd) ++odd;
  }
  if (odd != 1) return std::nullopt;
  if (!cs.solve(0)) return std::nullopt;
  return s.to_configuration();
}

inline constexpr std::size_t kEnumerateCellGuard = 31;

// Every tiling up to `limit` (0 = no limit), each listed once.
inline std::vector<Configuration> enumerate_placements(const PlacementInstance& inst, std::size_t limit = 0,
                                                       const PlacementOptions& opt = {}) {
  if (inst.board.size() > kEnumerateCellGuard)
    throw GuardExceeded("enumerate_placements: " + std::to_string(inst.board.size()) +
                        " cells exceeds guard of " + std::to_string(kEnumerateCellGuard));
  require_well_formed(inst, opt);
  std::vector<Configuration> out;
  std::set<std::vector<int>> seen;
  detail::PlacementSearch s(inst, opt.exact_budget);
  s.enumerate(0, [&] {
    if (seen.insert(s.mate).second) out.push_back(s.to_configuration());
    return limit > 0 && out.size() >= limit;
  });
  return out;
}

// Colour pairs used by a placement.
inline Budget placement_usage(const Configuration& c) {
  Budget u;
  for (const auto& g : c.gourds) ++u[color_pair(g.label_a.value, g.label_b.value)];
  return u;
}

// Empty string when `c` is a valid answer for `inst`, else the first problem.
inline std::string check_placement(const PlacementInstance& inst, const Configuration& c,
                                   const PlacementOptions& opt = {}) {
  try {
    Occupancy occ(inst.board, c);
  } catch (const Error& e) {
    return e.what();
  }
  for (const auto& g : c.gourds) {
    if (g.label_a != inst.board.label(inst.board.index_of(g.end_a)) ||
        g.label_b != inst.board.label(inst.board.index_of(g.end_b)))
      return "gourd labels differ from the cell colours under them";
  }
  Budget used = placement_usage(c);
  for (const auto& [p, n] : used) {
    auto it = inst.budget.find(p);
    int have = it == inst.budget.end() ? 0 : it->second;
    if (n > have)
      return "pair (c" + std::to_string(p.first) + ",c" + std::to_string(p.second) + ") used " +
             std::to_string(n) + " times, budget " + std::to_string(have);
    if (opt.exact_budget && n != have)
      return "pair (c" + std::to_string(p.first) + ",c" + std::to_string(p.second) + ") not used up";
  }
  if (opt.exact_budget)
    for (const auto& [p, n] : inst.budget)
      if (n > 0 && !used.count(p)) return "pair (c" + std::to_string(p.first) + ",c" + std::to_string(p.second) + ") unused";
  return {};
}

// Target configuration for a board coloured like the goal picture: one
// blank cell (the final empty cell) and every other cell labelled. The
// dominoes come from solve_placement with the start gourds as the budget.
inline Configuration target_from_board(const Board& target_board, const Configuration& start) {
  std::map<Label, int> id;
  auto id_of = [&](Label l) { return id.emplace(l, static_cast<int>(id.size()) + 1).first->second; };
  Budget budget;
  for (const auto& g : start.gourds) ++budget[color_pair(id_of(g.label_a), id_of(g.label_b))];
  int blanks = 0;
  std::vector<Label> labels;
  for (const auto& l : target_board.labels()) {
    if (l.is_blank()) ++blanks;
    else if (!id.count(l)) throw Error("target board label " + to_string(l) + " does not occur on any gourd");
  }
  if (blanks != 1) throw Error("target board needs exactly one blank cell, found " + std::to_string(blanks));
  const int blank_id = static_cast<int>(id.size()) + 1;
  for (const auto& l : target_board.labels()) labels.push_back(Label::color(l.is_blank() ? blank_id : id.at(l)));
  PlacementInstance inst{target_board.with_labels(labels), budget, {}};
  if (!instance_problems(inst).empty() || !color_counts_match(inst))
    throw Error("colour multiset mismatch between gourds and target board");
  auto c = solve_placement(inst);
  if (!c) throw Error("target board cannot be tiled by the gourds");
  for (auto& g : c->gourds) {
    g.label_a = target_board.label(target_board.index_of(g.end_a));
    g.label_b = target_board.label(target_board.index_of(g.end_b));
  }
  return *c;
}

inline std::vector<Slot> color_assignment(const Configuration& start, const Board& target_board) {
  return color_assignment(start, target_from_board(target_board, start));
}

// ---------------------------------------------------------------------------
// Gadgets and the reduction

struct GadgetTemplate {
  std::vector<std::vector<std::string>> rows;
  int width = 0;
  int left_lo = -1, left_hi = -1;
};

inline constexpr std::string_view kGadgetHeader = "gourds-gadget v1";

inline GadgetTemplate parse_gadget(std::string_view text) {
  GadgetTemplate g;
  detail::for_each_record(text, kGadgetHeader, [&](int lineno, const std::vector<std::string>& tok) {
    if (tok[0] == "row") {
      std::vector<std::string> row(tok.begin() + 1, tok.end());
      if (row.empty()) throw ParseError(lineno, "empty row");
      if (g.width && static_cast<int>(row.size()) != g.width) throw ParseError(lineno, "ragged row");
      g.width = static_cast<int>(row.size());
      g.rows.push_back(std::move(row));
    } else if (tok[0] == "left" && tok.size() == 3) {
      g.left_lo = detail::parse_int(tok[1], lineno);
      g.left_hi = detail::parse_int(tok[2], lineno);
    } else {
      throw ParseError(lineno, "unknown record '" + tok[0] + "'");
    }
  });
  if (g.rows.empty()) throw ParseError(0, "gadget has no rows");
  return g;
}

// Odd rows are shifted half a cell right.
inline HexCoord offset_to_axial(int col, int row) { return {col - (row - (row & 1)) / 2, row}; }

struct ReductionColors {
  int n = 0;
  int x(int i) const { return i + 1; }
  int V() const { return n + 1; }
  int F() const { return n + 2; }
};

// The budget the reduction prescribes for f.
inline Budget reduction_budget(const Formula1in3& f) {
  ReductionColors col{static_cast<int>(f.variables.size())};
  const int n = col.n, m = static_cast<int>(f.clauses.size());
  Budget bud;
  for (int i = 0; i < n; ++i) {
    bud[color_pair(col.x(i), col.x(i))] += 3;
    bud[color_pair(col.V(), col.V())] += 3;
    bud[color_pair(col.x(i), col.V())] += 6;
    bud[color_pair(col.F(), col.F())] += 10;
  }
  for (const auto& c : f.clauses) {
    bud[color_pair(col.x(c[0]), col.x(c[1]))] += 1;
    bud[color_pair(col.x(c[0]), col.x(c[2]))] += 1;
    bud[color_pair(col.x(c[1]), col.x(c[2]))] += 1;
    bud[color_pair(col.F(), col.F())] += 12;
  }
  bud[color_pair(col.V(), col.V())] += 5 * m - 2 * n;
  return bud;
}

inline PlacementInstance reduce_1in3sat(const Formula1in3& f) {
  validate_formula(f);
  static const GadgetTemplate var_t = parse_gadget(gadget_data::kVariable);
  static const GadgetTemplate clause_t = parse_gadget(gadget_data::kClause);
  ReductionColors col{static_cast<int>(f.variables.size())};

  std::vector<HexCoord> cells;
  std::vector<Label> labels;
  PlacementInstance inst;
  int offset = 0;
  auto stamp = [&](const GadgetTemplate& t, const std::string& name, const std::map<std::string, int>& colors) {
    Footprint fp{name, {}, {}};
    for (int r = 0; r < static_cast<int>(t.rows.size()); ++r)
      for (int c = 0; c < t.width; ++c) {
        auto it = colors.find(t.rows[r][c]);
        if (it == colors.end()) throw Error("gadget " + name + ": unknown cell symbol '" + t.rows[r][c] + "'");
        HexCoord h = offset_to_axial(offset + c, r);
        cells.push_back(h);
        labels.push_back(Label::color(it->second));
        fp.cells.push_back(h);
        if (c >= t.left_lo && c <= t.left_hi) fp.left.push_back(h);
      }
    inst.layout.push_back(std::move(fp));
    offset += t.width;
  };
  for (int i = 0; i < col.n; ++i)
    stamp(var_t, "var:" + f.variables[i], {{"x", col.x(i)}, {"V", col.V()}, {"F", col.F()}});
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    const auto& c = f.clauses[j];
    stamp(clause_t, "clause:" + std::to_string(j + 1),
          {{"X", col.x(c[0])}, {"Y", col.x(c[1])}, {"Z", col.x(c[2])}, {"V", col.V()}, {"F", col.F()}});
  }
  // The lone extra F cell at the bottom right makes the cell count odd.
  cells.push_back(offset_to_axial(offset, 3));
  labels.push_back(Label::color(col.F()));

  inst.board = Board(std::move(cells), std::move(labels));
  inst.budget = reduction_budget(f);
  return inst;
}

// Reads a truth assignment off a tiling of reduce_1in3sat(f): a variable is
// true when its ring is covered by (x,x) and (V,V) gourds.
inline std::vector<bool> decode_assignment(const PlacementInstance& inst, const Formula1in3& f,
                                           const Configuration& c) {
  ReductionColors col{static_cast<int>(f.variables.size())};
  std::map<HexCoord, int> var_of;
  for (std::size_t g = 0; g < inst.layout.size() && g < f.variables.size(); ++g)
    for (auto h : inst.layout[g].cells) var_of[h] = static_cast<int>(g);
  std::vector<bool> out(f.variables.size(), false);
  for (const auto& g : c.gourds) {
    auto it = var_of.find(g.end_a);
    if (it == var_of.end() || !var_of.count(g.end_b)) continue;
    if (g.label_a == g.label_b && g.label_a.value == col.x(it->second)) out[it->second] = true;
  }
  return out;
}

// Every monotone formula on n variables with n clauses in which each
// variable occurs exactly three times, listed once per multiset of clauses.
inline std::vector<Formula1in3> regular_formulas(int n) {
  std::vector<std::array<int, 3>> triples;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) triples.push_back({a, b, c});
  std::vector<Formula1in3> out;
  std::vector<std::array<int, 3>> chosen;
  std::vector<int> occ(n, 0);
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    if (static_cast<int>(chosen.size()) == n) {
      if (std::all_of(occ.begin(), occ.end(), [](int o) { return o == 3; })) {
        Formula1in3 f;
        for (int v = 0; v < n; ++v) f.variables.push_back("v" + std::to_string(v + 1));
        f.clauses = chosen;
        out.push_back(std::move(f));
      }
      return;
    }
    for (std::size_t t = from; t < triples.size(); ++t) {
      const auto& tr = triples[t];
      if (occ[tr[0]] == 3 || occ[tr[1]] == 3 || occ[tr[2]] == 3) continue;
      for (int v : tr) ++occ[v];
      chosen.push_back(tr);
      go(t);
      chosen.pop_back();
      for (int v : tr) --occ[v];
    }
  };
  go(0);
  return out;
}

struct ReductionCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct ReductionReport {
  std::vector<ReductionCheck> checks;
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const ReductionCheck& c) { return c.ok; });
  }
};

inline ReductionReport verify_reduction(const PlacementInstance& inst, const Formula1in3& f) {
  ReductionReport rep;
  ReductionColors col{static_cast<int>(f.variables.size())};
  const int n = col.n, m = static_cast<int>(f.clauses.size());
  auto add = [&](std::string name, bool ok, std::string detail) {
    rep.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  const Board& b = inst.board;

  {
    std::ostringstream os;
    bool ok = true;
    for (const auto& [k, d] : color_surplus(inst)) {
      int want = k == col.F() ? 1 : 0;
      if (d != want) {
        ok = false;
        os << "c" << k << " cells - ends = " << d << " (want " << want << "); ";
      }
    }
    add("color-counts", ok, os.str());
  }
  {
    std::ostringstream os;
    bool ok = inst.budget == reduction_budget(f);
    if (!ok) os << "budget differs from the prescribed one; ";
    int total = budget_total(inst.budget);
    if (total != 20 * n + 20 * m) {
      ok = false;
      os << "total " << total << " != 20n + 20m = " << 20 * n + 20 * m << "; ";
    }
    if (static_cast<int>(b.size()) != 40 * n + 40 * m + 1) {
      ok = false;
      os << "cells " << b.size() << " != 40n + 40m + 1 = " << 40 * n + 40 * m + 1 << "; ";
    }
    add("budget", ok, os.str());
  }

  std::vector<Footprint> layout = inst.layout;
  {
    std::ostringstream os;
    bool ok = static_cast<int>(layout.size()) == n + m;
    if (!ok) os << layout.size() << " gadgets, want " << n + m << "; ";
    for (const auto& fp : layout) {
      bool is_clause = fp.name.rfind("clause:", 0) == 0;
      if (!is_clause) continue;
      int v = 0;
      for (auto h : fp.left) {
        int i = b.index_of(h);
        if (i >= 0 && b.label(i).value == col.V()) ++v;
      }
      if (v != 1) {
        ok = false;
        os << fp.name << " has " << v << " V cells on its left; ";
      }
    }
    add("left-single-V", ok, os.str());
  }
  std::map<HexCoord, int> owner;
  {
    std::ostringstream os;
    bool ok = true;
    for (std::size_t g = 0; g < layout.size(); ++g)
      for (auto h : layout[g].cells) {
        if (b.index_of(h) < 0) {
          ok = false;
          os << layout[g].name << " has a cell off the board; ";
        }
        auto [it, fresh] = owner.emplace(h, static_cast<int>(g));
        if (!fresh) {
          ok = false;
          os << layout[g].name << " overlaps " << layout[it->second].name << " at " << h << "; ";
          break;
        }
      }
    add("disjoint", ok, os.str());
  }
  {
    std::ostringstream os;
    bool ok = true;
    for (std::size_t i = 0; i < b.size() && ok; ++i) {
      if (b.labels()[i].value == col.F()) continue;
      auto it = owner.find(b.cells()[i]);
      if (it == owner.end()) {
        ok = false;
        os << "non-F cell " << b.cells()[i] << " outside every gadget; ";
        continue;
      }
      for (int nb : b.neighbor_slots(static_cast<int>(i))) {
        if (nb < 0 || b.labels()[nb].value == col.F()) continue;
        auto jt = owner.find(b.cells()[nb]);
        if (jt != owner.end() && jt->second != it->second) {
          ok = false;
          os << layout[it->second].name << " touches " << layout[jt->second].name << " at " << b.cells()[i] << "; ";
          break;
        }
      }
    }
    add("F-separated", ok, os.str());
  }
  return rep;
}

}  // namespace gourds
