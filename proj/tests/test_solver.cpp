#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "gourds/boards.hpp"
#include "gourds/solver.hpp"

using namespace gourds;

namespace {

std::string read_file(const std::string& rel) {
  std::ifstream in(std::string(GOURDS_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Numbered configuration whose gourds sit on consecutive cells of h after
// the first cell.
Configuration along(const HamiltonianCycle& h, long e = 0) {
  Configuration c;
  c.empty = h.at(e);
  int k = 1;
  for (long i = 1; i + 1 < static_cast<long>(h.size()); i += 2, k += 2)
    c.gourds.push_back({h.at(e + i), h.at(e + i + 1), Label::number(k), Label::number(k + 1)});
  return c;
}

// Same cells, labels of the gourds shuffled and randomly reversed.
Configuration relabel(Configuration c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Label, Label>> l;
  for (const auto& g : c.gourds) l.emplace_back(g.label_a, g.label_b);
  std::shuffle(l.begin(), l.end(), rng);
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (rng() & 1) std::swap(l[i].first, l[i].second);
    c.gourds[i].label_a = l[i].first;
    c.gourds[i].label_b = l[i].second;
  }
  return c;
}

std::pair<Configuration, Configuration> random_pair(const Board& b, std::uint64_t seed, int steps = 2000) {
  auto base = along(find_hamiltonian(b));
  auto s = scramble(b, relabel(base, seed), steps, seed).first;
  auto t = scramble(b, relabel(base, seed + 1), steps, seed + 2).first;
  return {s, t};
}

bool aligned_with(const Board& b, const HamiltonianCycle& h, const Configuration& c) {
  try {
    aligned_state(b, h, c);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Per-cell labels of a configuration.
std::map<HexCoord, Label> labels_by_cell(const Configuration& c) {
  std::map<HexCoord, Label> m;
  for (const auto& g : c.gourds) m[g.end_a] = g.label_a, m[g.end_b] = g.label_b;
  return m;
}

void expect_plan_reaches(const Board& b, const Configuration& s, const Configuration& t, const SolvePlan& p) {
  auto end = verify_sequence(b, s, p.moves());
  EXPECT_EQ(end.empty, t.empty);
  EXPECT_EQ(labels_by_cell(end), labels_by_cell(t));
}

}  // namespace

TEST(AlignPhase, AlreadyAlignedIsEmpty) {
  auto b = boards::hexagon(2);
  auto h = normalized(find_hamiltonian(b));
  for (long e = 0; e < 19; ++e) EXPECT_TRUE(align_phase(b, h, along(h, e)).first.empty());
  auto tri = boards::triangle();
  auto ht = find_hamiltonian(tri);
  EXPECT_TRUE(align_phase(tri, ht, along(ht)).first.empty());
}

TEST(AlignPhase, ScramblesOnHexagonAlignWithinQuadraticBudget) {
  auto b = boards::hexagon(2);
  auto h = normalized(find_hamiltonian(b));
  const double n = 9;
  // Largest measured ratio over 200 scrambles was 0.4.
  const double c = 1.0;
  for (int i = 0; i < 200; ++i) {
    auto s = scramble(b, along(h), 3000, 50 + i).first;
    auto [moves, out] = align_phase(b, h, s);
    EXPECT_EQ(verify_sequence(b, s, moves), out);
    EXPECT_TRUE(aligned_with(b, h, out));
    EXPECT_LE(static_cast<double>(moves.size()), c * n * n);
  }
}

TEST(RotateCycle, UnitShiftMovesEveryGourdOnce) {
  auto b = boards::hexagon(2);
  auto h = normalized(find_hamiltonian(b));
  auto c = along(h, 4);
  EXPECT_TRUE(rotate_cycle(b, h, c, 0).empty());
  for (long k : {1L, -1L}) {
    auto moves = rotate_cycle(b, h, c, k);
    // A sharp turn is two pivots of one gourd, so group consecutive moves
    // by the gourd they move.
    Occupancy occ(b, c);
    std::vector<int> moved;
    for (const auto& m : moves) {
      int code = occ.at(b.index_of(m.head));
      if (moved.empty() || moved.back() != code / 2) moved.push_back(code / 2);
      occ.apply_checked(m);
    }
    std::set<int> uniq(moved.begin(), moved.end());
    EXPECT_EQ(moved.size(), 9u);
    EXPECT_EQ(uniq.size(), 9u);
    auto out = verify_sequence(b, c, moves);
    auto st = aligned_state(b, h, out);
    EXPECT_EQ(static_cast<long>(st.empty_index), detail::mod(4 + k, 19));
    auto back = rotate_cycle(b, h, out, -k);
    EXPECT_EQ(verify_sequence(b, out, back), c);
  }
}

TEST(SortCubic, IdentityIsEmpty) {
  auto b = boards::hexagon(2);
  auto h = normalized(find_hamiltonian(b));
  SolveOptions o;
  o.strategy = Strategy::Cubic;
  auto c = along(h, 3);
  EXPECT_TRUE(sort_aligned(b, h, c, c, o).empty());
}

// All 4! orders times 2^4 orientations on the twin fan board, whose cycle
// only has a TypeII substructure, and likewise on the flower's fan cycle
// which has a TypeI.
TEST(SortCubic, EveryRingTargetOnSmallSubstructureBoards) {
  struct Case {
    Board b;
    HamiltonianCycle h;
    SubstructureKind kind;
  };
  HamiltonianCycle fan;
  fan.order.push_back({0, 0});
  for (const auto& d : kAngularOffsets) fan.order.push_back(d);
  std::vector<Case> cases{{boards::twin_fans(), {boards::twin_fans_cycle()}, SubstructureKind::TypeII},
                          {boards::flower(), fan, SubstructureKind::TypeI}};
  SolveOptions o;
  o.strategy = Strategy::Cubic;
  for (const auto& cs : cases) {
    ASSERT_EQ(find_substructure(dual_tree(triangulate(cs.h), cs.h), cs.h).kind, cs.kind);
    const long L = static_cast<long>(cs.h.size());
    const int n = static_cast<int>(L - 1) / 2;
    const double budget = 4.0 * n * n * n;
    auto start = along(cs.h);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    int checked = 0;
    do {
      for (int flips = 0; flips < (1 << n); ++flips)
        for (long e = 0; e < L; e += 3) {
          auto t = along(cs.h, e);
          for (int i = 0; i < n; ++i) {
            const auto& g = start.gourds[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
            auto& tg = t.gourds[static_cast<std::size_t>(i)];
            tg.label_a = (flips >> i) & 1 ? g.label_b : g.label_a;
            tg.label_b = (flips >> i) & 1 ? g.label_a : g.label_b;
          }
          auto moves = sort_aligned(cs.b, cs.h, start, t, o);
          EXPECT_EQ(labels_by_cell(verify_sequence(cs.b, start, moves)), labels_by_cell(t));
          EXPECT_LE(static_cast<double>(moves.size()), budget);
          ++checked;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_GT(checked, 0);
  }
}

TEST(SortCubic, TypeIISwapIsLocal) {
  // Two adjacent gourds on the five substructure cells swap without
  // touching anything else.
  auto b = boards::twin_fans();
  HamiltonianCycle h{boards::twin_fans_cycle()};
  auto s = find_substructure(dual_tree(triangulate(h), h), h);
  ASSERT_EQ(s.kind, SubstructureKind::TypeII);
  auto pos = std::find(h.order.begin(), h.order.end(), s.cells[0]) - h.order.begin();
  auto c = along(h, pos);
  detail::Ring r(b, h.order);
  detail::Engine eng(b, c);
  std::vector<int> cells;
  for (const auto& x : s.cells) cells.push_back(b.index_of(x));
  std::vector<int> codes;
  for (int x : cells) codes.push_back(eng.occ().at(x));
  eng.local_solve(cells, {-1, codes[3], codes[4], codes[1], codes[2]});
  EXPECT_LE(eng.moves().size(), 20u);
  for (const auto& m : eng.moves())
    for (const auto& x : {m.tail, m.head, m.target})
      EXPECT_NE(std::find(s.cells.begin(), s.cells.end(), x), s.cells.end());
}

TEST(SortQuadratic, RandomTargetsOnLargeBoardsStayQuadratic) {
  // Largest measured moves / n^2 over this range was about 6.3.
  const double c = 10.0;
  for (int i = 0; i < 12; ++i) {
    const int size = 101 + 50 * (i % 7);
    auto b = boards::random_proper(size, 800 + i, (i % 3) * 0.4);
    auto [s, t] = random_pair(b, 900 + i, 20000);
    auto p = solve(b, s, t);
    expect_plan_reaches(b, s, t, p);
    const double n = (size - 1) / 2;
    EXPECT_LE(static_cast<double>(p.size()), c * n * n) << size;
    EXPECT_GE(static_cast<long>(p.size()), displacement_lower_bound(b, s, t));
    EXPECT_GT(p.stats.splits, 0);
  }
}

TEST(SortQuadratic, TwoLobeExchangeBetweenBounds) {
  for (int n = 8; n <= 24; n += 4) {
    auto b = boards::two_lobe(n);
    Configuration s, t;
    s.empty = t.empty = {n, 0};
    for (int i = 0; i < n; ++i) {
      auto red = Label::color(1), blue = Label::color(2);
      auto a = i < n / 2 ? red : blue, z = i < n / 2 ? blue : red;
      s.gourds.push_back({{i, 0}, {i, 1}, a, a});
      t.gourds.push_back({{i, 0}, {i, 1}, z, z});
    }
    auto p = solve(b, s, t);
    expect_plan_reaches(b, s, t, p);
    // Every gourd travels n/2 columns with both ends.
    const long lb = displacement_lower_bound(b, s, t);
    EXPECT_EQ(lb, static_cast<long>(n) * n / 2);
    EXPECT_GE(static_cast<long>(p.size()), lb);
    EXPECT_LE(static_cast<double>(p.size()), 10.0 * n * n);
  }
}

TEST(Solve, StartEqualsTarget) {
  auto b = boards::hexagon(2);
  auto [s, t] = random_pair(b, 5);
  auto p = solve(b, s, s);
  expect_plan_reaches(b, s, s, p);
  auto h = normalized(repair_seven_runs(b, find_hamiltonian(b)));
  auto a = along(h, 2);
  auto q = solve(b, a, a);
  EXPECT_TRUE(q.s2.empty());
}

TEST(Solve, StrategiesAgreeOnRandomInstances) {
  for (int i = 0; i < 30; ++i) {
    auto b = boards::random_proper(7 + 2 * (i % 25), 300 + i, (i % 3) * 0.4);
    auto [s, t] = random_pair(b, 40 + i);
    for (auto st : {Strategy::Cubic, Strategy::Quadratic}) {
      SolveOptions o;
      o.strategy = st;
      o.base_threshold = 9;
      auto p = solve(b, s, t, o);
      expect_plan_reaches(b, s, t, p);
      EXPECT_EQ(p.strategy, st);
    }
  }
}

TEST(Solve, PhotoInstance) {
  auto b = parse_board(read_file("data/instances/photo.board"));
  auto s = parse_configuration(read_file("data/instances/photo.start"));
  auto t = parse_configuration(read_file("data/instances/photo.target"));
  EXPECT_EQ(s.gourds.size(), 9u);
  // The target covers every cell with a matching colour.
  for (const auto& [cell, label] : labels_by_cell(t)) EXPECT_EQ(b.label(b.index_of(cell)), label);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto from = scramble(b, s, 500, seed).first;
    auto p = solve(b, from, t);
    expect_plan_reaches(b, from, t, p);
  }
}

TEST(Solve, RejectsBadInput) {
  auto star = boards::star_of_david();
  Configuration c;
  EXPECT_THROW(solve(star, c, c), BoardError);
  auto b = boards::flower();
  auto [s, t] = random_pair(b, 1);
  t.gourds[0].label_a = Label::number(99);
  EXPECT_THROW(solve(b, s, t), Error);
}

TEST(Solve, EveryEdgeTakesBothOrientations) {
  auto b = boards::hexagon(2);
  auto h = normalized(find_hamiltonian(b));
  auto s = along(h);
  // along(h, e) puts gourd 1-2 on the cycle edge right after e.
  for (long e = 0; e < 19; ++e)
    for (int flip = 0; flip < 2; ++flip) {
      auto t = along(h, e);
      if (flip) std::swap(t.gourds[0].label_a, t.gourds[0].label_b);
      auto p = solve(b, s, t);
      expect_plan_reaches(b, s, t, p);
    }
}

TEST(DisplacementBound, SimpleCases) {
  auto b = boards::hexagon(2);
  auto [s, t] = random_pair(b, 3);
  EXPECT_EQ(displacement_lower_bound(b, s, s), 0);
  auto row = boards::row(9);
  for (int k = 1; k <= 7; ++k) {
    Configuration a;
    a.empty = {8, 0};
    a.gourds.push_back({{0, 0}, {1, 0}, Label::number(1), Label::number(2)});
    EXPECT_EQ(displacement_lower_bound(row, a, std::vector<Slot>{{{k, 0}, {k + 1, 0}}}), k);
  }
}

TEST(PlanFormat, RoundTrip) {
  auto b = boards::hexagon(2);
  auto [s, t] = random_pair(b, 11);
  auto p = solve(b, s, t);
  auto text = serialize_plan(p);
  EXPECT_EQ(text.rfind("gourds-plan v1\n", 0), 0u);
  EXPECT_NE(text.find("# moves s1=" + std::to_string(p.s1.size()) + " s2="), std::string::npos);
  auto q = parse_plan(text);
  EXPECT_EQ(q.s1, p.s1);
  EXPECT_EQ(q.s2, p.s2);
  EXPECT_EQ(q.s3, p.s3);
  EXPECT_EQ(q.strategy, p.strategy);
  EXPECT_EQ(serialize_plan(q), text);
  EXPECT_THROW(parse_plan("nope\n"), ParseError);
  EXPECT_THROW(parse_plan("gourds-plan v1\n0 0 1 0 0 1 pivot\n"), ParseError);
}
