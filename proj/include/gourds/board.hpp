#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gourds/error.hpp"
#include "gourds/hex.hpp"

namespace gourds {

// Cell or gourd-end label: nothing, a color id, or a number.
struct Label {
  enum class Kind : std::uint8_t { Blank, Color, Number };
  Kind kind = Kind::Blank;
  int value = 0;

  static constexpr Label blank() { return {}; }
  static constexpr Label color(int k) { return {Kind::Color, k}; }
  static constexpr Label number(int k) { return {Kind::Number, k}; }

  bool is_blank() const { return kind == Kind::Blank; }

  friend constexpr auto operator<=>(const Label&, const Label&) = default;
};

inline std::string to_string(const Label& l) {
  switch (l.kind) {
    case Label::Kind::Blank: return ".";
    case Label::Kind::Color: return "c" + std::to_string(l.value);
    case Label::Kind::Number: return "#" + std::to_string(l.value);
  }
  return ".";
}

inline std::optional<Label> parse_label(std::string_view s) {
  if (s == ".") return Label::blank();
  if (s.size() < 2 || (s[0] != 'c' && s[0] != '#')) return std::nullopt;
  int v = 0;
  for (char ch : s.substr(1)) {
    if (ch < '0' || ch > '9') return std::nullopt;
    v = v * 10 + (ch - '0');
    if (v > 1'000'000'000 / 10) return std::nullopt;
  }
  if (s[0] == 'c') return Label::color(v);
  if (v < 1) return std::nullopt;
  return Label::number(v);
}

// Undirected simple graph on vertices 0..n-1.
struct Graph {
  std::vector<std::vector<int>> adj;

  std::size_t vertex_count() const { return adj.size(); }
  std::size_t edge_count() const {
    std::size_t d = 0;
    for (const auto& a : adj) d += a.size();
    return d / 2;
  }
};

// A finite set of hexagonal cells with optional per-cell labels. Cells are
// kept sorted by (q, r); a cell's index is its position in that order.
class Board {
 public:
  Board() = default;

  // Throws BoardError on an empty, duplicated or disconnected cell set.
  explicit Board(std::vector<HexCoord> cells, std::vector<Label> labels = {}) {
    if (cells.empty()) throw BoardError("board has no cells");
    if (labels.empty()) labels.assign(cells.size(), Label::blank());
    if (labels.size() != cells.size()) throw BoardError("label count does not match cell count");
    std::vector<std::size_t> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cells[a] < cells[b]; });
    cells_.reserve(cells.size());
    labels_.reserve(cells.size());
    for (auto i : order) {
      if (!cells_.empty() && cells_.back() == cells[i]) {
        std::ostringstream os;
        os << "duplicate cell " << cells[i];
        throw BoardError(os.str());
      }
      cells_.push_back(cells[i]);
      labels_.push_back(labels[i]);
    }
    index_.reserve(cells_.size() * 2);
    for (std::size_t i = 0; i < cells_.size(); ++i) index_.emplace(cells_[i], static_cast<int>(i));
    adj_.assign(cells_.size(), {-1, -1, -1, -1, -1, -1});
    for (std::size_t i = 0; i < cells_.size(); ++i)
      for (std::size_t k = 0; k < 6; ++k) adj_[i][k] = index_of(cells_[i] + kNeighborOffsets[k]);
    if (!is_connected()) throw BoardError("cell set is not connected");
  }

  std::size_t size() const { return cells_.size(); }
  const std::vector<HexCoord>& cells() const { return cells_; }
  const std::vector<Label>& labels() const { return labels_; }
  HexCoord cell(int i) const { return cells_[static_cast<std::size_t>(i)]; }
  Label label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

  int index_of(HexCoord c) const {
    auto it = index_.find(c);
    return it == index_.end() ? -1 : it->second;
  }
  bool contains(HexCoord c) const { return index_.count(c) != 0; }

  // Neighbour cell indices in kNeighborOffsets order, -1 where off-board.
  const std::array<int, 6>& neighbor_slots(int i) const { return adj_[static_cast<std::size_t>(i)]; }

  bool adjacent_idx(int a, int b) const {
    for (int n : adj_[static_cast<std::size_t>(a)])
      if (n == b) return true;
    return false;
  }

  Board with_labels(std::vector<Label> labels) const { return Board(cells_, std::move(labels)); }

  friend bool operator==(const Board& a, const Board& b) {
    return a.cells_ == b.cells_ && a.labels_ == b.labels_;
  }

 private:
  bool is_connected() const {
    std::vector<char> seen(cells_.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int n : adj_[static_cast<std::size_t>(v)])
        if (n >= 0 && !seen[static_cast<std::size_t>(n)]) {
          seen[static_cast<std::size_t>(n)] = 1;
          ++count;
          stack.push_back(n);
        }
    }
    return count == cells_.size();
  }

  std::vector<HexCoord> cells_;
  std::vector<Label> labels_;
  std::unordered_map<HexCoord, int> index_;
  std::vector<std::array<int, 6>> adj_;
};

inline Graph board_graph(const Board& b) {
  Graph g;
  g.adj.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (int n : b.neighbor_slots(static_cast<int>(i)))
      if (n >= 0) g.adj[i].push_back(n);
  return g;
}

// ---------------------------------------------------------------------------
// Text format

inline constexpr std::string_view kBoardHeader = "gourds-board v1";

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline int parse_int(const std::string& s, int line) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected integer, got '" + s + "'");
  }
  if (pos != s.size() || v < -1'000'000 || v > 1'000'000)
    throw ParseError(line, "expected integer, got '" + s + "'");
  return static_cast<int>(v);
}

// Calls fn(line_number, tokens) for every non-blank, non-comment line after
// the header; enforces the header on the first such line.
template <typename Fn>
void for_each_record(std::string_view text, std::string_view header, Fn&& fn) {
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (!saw_header) {
      std::string trimmed = line.substr(first);
      while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t')) trimmed.pop_back();
      if (trimmed != header) throw ParseError(lineno, "expected header '" + std::string(header) + "'");
      saw_header = true;
      continue;
    }
    if (line[first] == '#') continue;
    fn(lineno, split_ws(line));
  }
  if (!saw_header) throw ParseError(0, "missing header '" + std::string(header) + "'");
}

}  // namespace detail

inline Board parse_board(std::string_view text) {
  std::vector<HexCoord> cells;
  std::vector<Label> labels;
  std::unordered_map<HexCoord, int> first_line;
  detail::for_each_record(text, kBoardHeader, [&](int lineno, const std::vector<std::string>& tok) {
    if (tok.size() != 3) throw ParseError(lineno, "expected 'q r label'");
    HexCoord c{detail::parse_int(tok[0], lineno), detail::parse_int(tok[1], lineno)};
    auto label = parse_label(tok[2]);
    if (!label) throw ParseError(lineno, "bad label '" + tok[2] + "'");
    auto [it, fresh] = first_line.emplace(c, lineno);
    if (!fresh) {
      std::ostringstream os;
      os << "duplicate cell " << c << " (first on line " << it->second << ")";
      throw ParseError(lineno, os.str());
    }
    cells.push_back(c);
    labels.push_back(*label);
  });
  if (cells.empty()) throw ParseError(0, "board has no cells");
  try {
    return Board(std::move(cells), std::move(labels));
  } catch (const BoardError& e) {
    throw ParseError(0, e.what());
  }
}

inline std::string serialize_board(const Board& b) {
  std::ostringstream os;
  os << kBoardHeader << '\n';
  for (std::size_t i = 0; i < b.size(); ++i)
    os << b.cells()[i].q << ' ' << b.cells()[i].r << ' ' << to_string(b.labels()[i]) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Properness

struct PropernessReport {
  bool odd_size = false;
  bool connected = false;
  bool two_connected = false;
  bool hole_free = false;
  bool is_star_of_david = false;
  bool proper = false;
};

// Articulation vertices of a connected graph (iterative Tarjan low-link).
inline std::vector<int> articulation_points(const Graph& g) {
  const int n = static_cast<int>(g.vertex_count());
  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1), child_count(n, 0);
  std::vector<char> is_cut(n, 0);
  int timer = 0;
  for (int root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      auto& [v, it] = stack.back();
      if (it < g.adj[v].size()) {
        int w = g.adj[v][it++];
        if (disc[w] == -1) {
          parent[w] = v;
          ++child_count[v];
          disc[w] = low[w] = timer++;
          stack.emplace_back(w, 0);
        } else if (w != parent[v]) {
          low[v] = std::min(low[v], disc[w]);
        }
      } else {
        int done = v;
        stack.pop_back();
        if (!stack.empty()) {
          int p = stack.back().first;
          low[p] = std::min(low[p], low[done]);
          if (parent[p] != -1 && low[done] >= disc[p]) is_cut[p] = 1;
        }
      }
    }
    if (child_count[root] > 1) is_cut[root] = 1;
  }
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (is_cut[v]) out.push_back(v);
  return out;
}

// Complement cells inside the axial bounding box grown by one ring that are
// not reachable from the box border through complement cells.
inline std::vector<HexCoord> hole_cells(const Board& b) {
  int qmin = b.cells()[0].q, qmax = qmin, rmin = b.cells()[0].r, rmax = rmin;
  for (const auto& c : b.cells()) {
    qmin = std::min(qmin, c.q), qmax = std::max(qmax, c.q);
    rmin = std::min(rmin, c.r), rmax = std::max(rmax, c.r);
  }
  --qmin, ++qmax, --rmin, ++rmax;
  const int w = qmax - qmin + 1, h = rmax - rmin + 1;
  auto idx = [&](int q, int r) { return (r - rmin) * w + (q - qmin); };
  std::vector<char> state(static_cast<std::size_t>(w) * h, 0);  // 1 = board, 2 = outside
  for (const auto& c : b.cells()) state[idx(c.q, c.r)] = 1;
  std::vector<HexCoord> stack;
  for (int q = qmin; q <= qmax; ++q)
    for (int r = rmin; r <= rmax; ++r)
      if ((q == qmin || q == qmax || r == rmin || r == rmax) && state[idx(q, r)] == 0) {
        state[idx(q, r)] = 2;
        stack.push_back({q, r});
      }
  while (!stack.empty()) {
    HexCoord c = stack.back();
    stack.pop_back();
    for (const auto& n : neighbors(c)) {
      if (n.q < qmin || n.q > qmax || n.r < rmin || n.r > rmax) continue;
      auto& s = state[idx(n.q, n.r)];
      if (s == 0) {
        s = 2;
        stack.push_back(n);
      }
    }
  }
  std::vector<HexCoord> holes;
  for (int r = rmin; r <= rmax; ++r)
    for (int q = qmin; q <= qmax; ++q)
      if (state[idx(q, r)] == 0) holes.push_back({q, r});
  return holes;
}

// Lexicographically smallest image of the cell set over the 12 lattice
// symmetries, translated so its smallest cell is the origin.
inline std::vector<HexCoord> canonical_shape(const std::vector<HexCoord>& cells) {
  std::vector<HexCoord> best;
  std::vector<HexCoord> cur(cells.size());
  for (int refl = 0; refl < 2; ++refl)
    for (int rot = 0; rot < 6; ++rot) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        HexCoord c = refl ? reflect(cells[i]) : cells[i];
        for (int k = 0; k < rot; ++k) c = rotate60(c);
        cur[i] = c;
      }
      std::sort(cur.begin(), cur.end());
      const HexCoord base = cur.front();
      for (auto& c : cur) c = c - base;
      if (best.empty() || cur < best) best = cur;
    }
  return best;
}

// The 13-cell Star of David: a centre, its six neighbours and the six
// outward tips n_i + n_{i+1}.
inline std::vector<HexCoord> star_of_david_cells() {
  std::vector<HexCoord> cells{{0, 0}};
  for (std::size_t i = 0; i < 6; ++i) {
    cells.push_back(kAngularOffsets[i]);
    cells.push_back(kAngularOffsets[i] + kAngularOffsets[(i + 1) % 6]);
  }
  return cells;
}

inline bool is_star_of_david(const Board& b) {
  if (b.size() != 13) return false;
  static const std::vector<HexCoord> canon = canonical_shape(star_of_david_cells());
  return canonical_shape(b.cells()) == canon;
}

inline PropernessReport validate_proper(const Board& b) {
  PropernessReport r;
  r.odd_size = b.size() % 2 == 1;
  r.connected = true;  // Board construction rejects disconnected sets.
  r.two_connected = b.size() >= 3 && articulation_points(board_graph(b)).empty();
  r.hole_free = hole_cells(b).empty();
  r.is_star_of_david = is_star_of_david(b);
  r.proper = r.odd_size && r.connected && r.two_connected && r.hole_free && !r.is_star_of_david;
  return r;
}

inline std::string to_string(const PropernessReport& r) {
  auto yn = [](bool v) { return v ? "true" : "false"; };
  std::ostringstream os;
  os << "odd_size: " << yn(r.odd_size) << '\n'
     << "connected: " << yn(r.connected) << '\n'
     << "two_connected: " << yn(r.two_connected) << '\n'
     << "hole_free: " << yn(r.hole_free) << '\n'
     << "is_star_of_david: " << yn(r.is_star_of_david) << '\n'
     << "proper: " << yn(r.proper) << '\n';
  return os.str();
}

}  // namespace gourds
