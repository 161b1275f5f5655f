#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "gourds/boards.hpp"
#include "gourds/placement.hpp"
#include "gadget_fixtures.hpp"

using namespace gourds;
using namespace gourds::fixtures;

namespace {

PlacementInstance line3(std::vector<int> colors, Budget budget) {
  return {colored({{0, 0}, {1, 0}, {2, 0}}, colors), std::move(budget), {}};
}

Formula1in3 formula(const std::vector<std::array<std::string, 3>>& clauses) {
  std::string text = std::string(kFormulaHeader) + "\n";
  for (const auto& c : clauses) text += "c " + c[0] + " " + c[1] + " " + c[2] + "\n";
  return parse_formula(text);
}

void expect_valid(const PlacementInstance& inst, const std::optional<Configuration>& c) {
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(check_placement(inst, *c), "");
  EXPECT_EQ(2 * c->gourds.size() + 1, inst.board.size());
}

}  // namespace

TEST(SolvePlacement, ThreeCellExamples) {
  auto inst = line3({1, 1, 2}, {{{1, 2}, 1}});
  auto c = solve_placement(inst);
  expect_valid(inst, c);
  EXPECT_EQ(c->empty, (HexCoord{0, 0}));

  EXPECT_FALSE(solve_placement(line3({1, 1, 1}, {{{2, 2}, 1}})).has_value());
  EXPECT_TRUE(enumerate_placements(line3({1, 1, 1}, {{{2, 2}, 1}})).empty());
}

TEST(SolvePlacement, MalformedInstanceIsReportedBeforeSearch) {
  EXPECT_THROW(solve_placement(line3({1, 1, 2}, {{{1, 2}, 2}})), Error);
  PlacementInstance blank{Board({{0, 0}, {1, 0}, {2, 0}}), {{{1, 2}, 1}}, {}};
  EXPECT_THROW(solve_placement(blank), Error);
}

TEST(SolvePlacement, VariableRingTakesEitherSplit) {
  auto f = variable_core(kFalseRing);
  auto cf = solve_placement(f);
  expect_valid(f, cf);
  EXPECT_EQ(placement_usage(*cf), kFalseRing);

  auto t = variable_core(kTrueRing);
  auto ct = solve_placement(t);
  expect_valid(t, ct);
  EXPECT_EQ(placement_usage(*ct), kTrueRing);

  // A mix of the two splits does not cover the ring.
  Budget mixed{{{1, 2}, 2}, {{1, 1}, 2}, {{2, 2}, 2}, {{3, 3}, 2}};
  EXPECT_FALSE(solve_placement(variable_core(mixed)).has_value());
}

TEST(EnumeratePlacements, VariableRingHasTwoCoveringClasses) {
  Budget full{{{1, 1}, 3}, {{2, 2}, 3}, {{1, 2}, 6}, {{3, 3}, 2}};
  auto all = enumerate_placements(variable_core(full), 0, {.exact_budget = false});
  std::set<Budget> classes;
  for (const auto& c : all) classes.insert(placement_usage(c));
  EXPECT_EQ(all.size(), 2u);
  EXPECT_EQ(classes, (std::set<Budget>{kFalseRing, kTrueRing}));

  EXPECT_EQ(enumerate_placements(variable_core(kFalseRing)).size(), 1u);
  EXPECT_EQ(enumerate_placements(variable_core(kTrueRing)).size(), 1u);
}

TEST(SolvePlacement, ClauseGadgetRealizesAllThreeOptions) {
  for (int k = 1; k <= 3; ++k) {
    std::vector<HexCoord> left;
    auto inst = clause_gadget(clause_option(k), &left);
    auto c = solve_placement(inst);
    expect_valid(inst, c);
    int left_kv = 0;
    for (const auto& g : c->gourds) {
      bool in_left = std::count(left.begin(), left.end(), g.end_a) && std::count(left.begin(), left.end(), g.end_b);
      if (in_left && placement_usage({{g}, {}}).count(color_pair(k, 4))) ++left_kv;
    }
    EXPECT_EQ(left_kv, 1) << "option " << k;
  }
}

TEST(SolvePlacement, ClauseGadgetRejectsTwoTrueVariables) {
  // X and Y both true: two (X,V) and two (Y,V) gourds.
  Budget b;
  b[color_pair(1, 4)] = 2;
  b[color_pair(2, 4)] = 2;
  b[color_pair(3, 3)] = 1;
  b[color_pair(1, 3)] = 1;
  b[color_pair(2, 3)] = 1;
  b[color_pair(1, 2)] = 1;
  b[color_pair(4, 4)] = 4;
  b[color_pair(5, 5)] = 12;
  auto inst = clause_gadget(b);
  ASSERT_TRUE(color_counts_match(inst));
  EXPECT_FALSE(solve_placement(inst).has_value());
}

TEST(EnumeratePlacements, ClauseLeftPartFitsAtMostOneVGourd) {
  auto t = parse_gadget(gadget_data::kClause);
  std::map<std::string, int> col{{"X", 1}, {"Y", 2}, {"Z", 3}, {"V", 4}, {"F", 5}};
  std::vector<HexCoord> cells;
  std::vector<int> colors;
  for (int r = 0; r < 4; ++r)
    for (int c = t.left_lo; c <= t.left_hi; ++c)
      if (t.rows[r][c] != "F") {
        cells.push_back(offset_to_axial(c, r));
        colors.push_back(col.at(t.rows[r][c]));
      }
  ASSERT_EQ(cells.size(), 10u);
  cells.push_back(offset_to_axial(1, 2));
  colors.push_back(5);
  Budget generous;
  for (int a = 1; a <= 4; ++a)
    for (int b = a; b <= 4; ++b) generous[{a, b}] = 2;
  PlacementInstance inst{colored(cells, colors), generous, {}};
  auto all = enumerate_placements(inst, 0, {.exact_budget = false});
  ASSERT_FALSE(all.empty());
  std::set<int> seen_partner;
  for (const auto& c : all) {
    int v = 0;
    for (const auto& g : c.gourds) {
      if (g.label_a.value == 4 || g.label_b.value == 4) {
        ++v;
        seen_partner.insert(g.label_a.value == 4 ? g.label_b.value : g.label_a.value);
      }
    }
    EXPECT_LE(v, 1);
  }
  EXPECT_EQ(seen_partner, (std::set<int>{1, 2, 3}));
}

TEST(EnumeratePlacements, GuardAndLimit) {
  auto inst = clause_gadget(clause_option(1));
  EXPECT_THROW(enumerate_placements(inst), GuardExceeded);
  Budget full{{{1, 1}, 3}, {{2, 2}, 3}, {{1, 2}, 6}, {{3, 3}, 2}};
  EXPECT_EQ(enumerate_placements(variable_core(full), 1, {.exact_budget = false}).size(), 1u);
}

TEST(SolvePlacement, AgreesWithEnumerationOnRandomBoards) {
  std::mt19937_64 rng(7);
  int sat = 0, unsat = 0;
  for (int trial = 0; trial < 150; ++trial) {
    int cells = 5 + 2 * static_cast<int>(rng() % 8);
    Board shape = boards::random_proper(cells, rng());
    int ncol = 2 + static_cast<int>(rng() % 2);
    std::vector<int> colors;
    for (std::size_t i = 0; i < shape.size(); ++i) colors.push_back(1 + static_cast<int>(rng() % ncol));
    PlacementInstance inst{colored(shape.cells(), colors), {}, {}};
    // Budget from one random pairing of colours, so counts always match.
    std::vector<int> pool = colors;
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t i = 1; i + 1 < pool.size(); i += 2) ++inst.budget[color_pair(pool[i], pool[i + 1])];
    auto c = solve_placement(inst);
    auto all = enumerate_placements(inst, 1);
    EXPECT_EQ(c.has_value(), !all.empty()) << serialize_instance(inst);
    if (c) {
      ++sat;
      EXPECT_EQ(check_placement(inst, *c), "");
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat, 10);
  EXPECT_GT(unsat, 10);
}

TEST(Brute1in3, SmallCases) {
  auto single = formula({{"a", "b", "c"}});
  EXPECT_EQ(brute_1in3sat(single).size(), 3u);

  Formula1in3 none{{"a", "b", "c", "d"}, {}};
  EXPECT_EQ(brute_1in3sat(none).size(), 16u);

  auto twice = formula({{"a", "b", "c"}, {"c", "b", "a"}});
  EXPECT_EQ(brute_1in3sat(twice), brute_1in3sat(single));

  Formula1in3 big;
  for (int i = 0; i < 25; ++i) big.variables.push_back("v" + std::to_string(i));
  EXPECT_THROW(brute_1in3sat(big), GuardExceeded);
}

TEST(Formula, ParseSerializeValidate) {
  auto f = formula({{"a", "b", "c"}, {"a", "b", "c"}, {"a", "b", "c"}});
  EXPECT_EQ(f.variables.size(), 3u);
  EXPECT_TRUE(formula_problems(f).empty());
  auto g = parse_formula(serialize_formula(f));
  EXPECT_EQ(g.variables, f.variables);
  EXPECT_EQ(g.clauses, f.clauses);

  EXPECT_FALSE(formula_problems(formula({{"a", "b", "c"}})).empty());
  EXPECT_FALSE(formula_problems(formula({{"a", "a", "b"}, {"a", "b", "b"}, {"a", "b", "b"}})).empty());
  EXPECT_THROW(parse_formula("gourds-1in3 v1\nc a b\n"), ParseError);
  EXPECT_THROW(reduce_1in3sat(formula({{"a", "b", "c"}})), Error);
}

TEST(Reduction, CountsAndChecks) {
  auto f = formula({{"a", "b", "c"}, {"a", "b", "c"}, {"a", "b", "c"}});
  auto inst = reduce_1in3sat(f);
  const int n = 3, m = 3;
  EXPECT_EQ(budget_total(inst.budget), 22 * n + 15 * m + (5 * m - 2 * n));
  EXPECT_EQ(budget_total(inst.budget), 20 * n + 20 * m);
  EXPECT_EQ(static_cast<int>(inst.board.size()), 40 * n + 40 * m + 1);
  EXPECT_TRUE(instance_problems(inst).empty());
  EXPECT_TRUE(color_counts_match(inst));
  auto rep = verify_reduction(inst, f);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.ok) << c.name << ": " << c.detail;

  // Four rows high.
  int lo = 1 << 20, hi = -(1 << 20);
  for (auto c : inst.board.cells()) {
    lo = std::min(lo, c.r);
    hi = std::max(hi, c.r);
  }
  EXPECT_EQ(hi - lo + 1, 4);
}

TEST(Reduction, CorruptionsAreCaught) {
  auto f = formula({{"a", "b", "c"}, {"a", "b", "c"}, {"a", "b", "c"}});
  auto check = [&](const PlacementInstance& inst, const std::string& name) {
    for (const auto& c : verify_reduction(inst, f).checks)
      if (c.name == name) return c.ok;
    ADD_FAILURE() << "no check " << name;
    return true;
  };

  auto missing = reduce_1in3sat(f);
  --missing.budget[color_pair(4, 4)];
  EXPECT_FALSE(check(missing, "color-counts"));
  EXPECT_FALSE(check(missing, "budget"));

  auto overlap = reduce_1in3sat(f);
  overlap.layout[1].cells = overlap.layout[0].cells;
  EXPECT_FALSE(check(overlap, "disjoint"));

  auto two_v = reduce_1in3sat(f);
  auto labels = two_v.board.labels();
  int i = two_v.board.index_of(two_v.layout[3].left[1]);
  labels[static_cast<std::size_t>(i)] = Label::color(4);
  two_v.board = two_v.board.with_labels(labels);
  EXPECT_FALSE(check(two_v, "left-single-V"));
}

TEST(Reduction, InstanceTextRoundTrip) {
  auto f = formula({{"a", "b", "c"}, {"a", "b", "c"}, {"a", "b", "c"}});
  auto inst = reduce_1in3sat(f);
  auto back = parse_instance(serialize_instance(inst));
  EXPECT_EQ(back.board.cells(), inst.board.cells());
  EXPECT_EQ(back.board.labels(), inst.board.labels());
  EXPECT_EQ(back.budget, inst.budget);
  ASSERT_EQ(back.layout.size(), inst.layout.size());
  EXPECT_EQ(back.layout[3].left, inst.layout[3].left);
  EXPECT_TRUE(verify_reduction(back, f).ok());
  EXPECT_THROW(parse_instance("gourds-placement v1\nb c1 c2\n"), ParseError);
}

TEST(Reduction, SoundOnSmallestFormulas) {
  std::vector<Formula1in3> fs{
      formula({{"a", "b", "c"}, {"a", "b", "c"}, {"a", "b", "c"}}),
      formula({{"c", "a", "b"}, {"b", "c", "a"}, {"a", "c", "b"}}),
      formula({{"a", "b", "c"}, {"a", "b", "d"}, {"a", "c", "d"}, {"b", "c", "d"}}),
      formula({{"d", "c", "b"}, {"a", "b", "d"}, {"c", "a", "d"}, {"b", "a", "c"}}),
  };
  for (const auto& f : fs) {
    auto inst = reduce_1in3sat(f);
    EXPECT_TRUE(verify_reduction(inst, f).ok());
    auto c = solve_placement(inst);
    bool sat = !brute_1in3sat(f).empty();
    EXPECT_EQ(c.has_value(), sat) << serialize_formula(f);
    if (!c) continue;
    EXPECT_EQ(check_placement(inst, *c), "");
    auto sols = brute_1in3sat(f);
    EXPECT_NE(std::find(sols.begin(), sols.end(), decode_assignment(inst, f, *c)), sols.end());
  }
}

TEST(Reduction, RegularFormulasUpToFour) {
  EXPECT_EQ(regular_formulas(3).size(), 1u);
  EXPECT_EQ(regular_formulas(4).size(), 1u);
  EXPECT_TRUE(regular_formulas(2).empty());
  for (int n : {3, 4, 5})
    for (const auto& f : regular_formulas(n)) EXPECT_TRUE(formula_problems(f).empty());
}

TEST(Reduction, SoundThroughSixVariables) {
  int sat = 0, total = 0;
  for (int n = 3; n <= 6; ++n)
    for (const auto& f : regular_formulas(n)) {
      auto inst = reduce_1in3sat(f);
      ASSERT_TRUE(verify_reduction(inst, f).ok());
      bool want = !brute_1in3sat(f).empty();
      EXPECT_EQ(solve_placement(inst).has_value(), want) << serialize_formula(f);
      sat += want;
      ++total;
    }
  EXPECT_EQ(total, 1 + 1 + 22 + 550);
  EXPECT_EQ(sat, 521);
}

TEST(ColorAssignment, FromColoredTargetBoard) {
  // Photo instance: the goal picture as a board, the scramble as start.
  auto read = [](const std::string& rel) {
    std::ifstream in(std::string(GOURDS_SOURCE_DIR) + "/" + rel);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  Board picture = parse_board(read("data/instances/photo.board"));
  auto start = parse_configuration(read("data/instances/photo.start"));
  auto t = target_from_board(picture, start);
  EXPECT_EQ(t.gourds.size(), start.gourds.size());
  Occupancy occ(picture, t);
  for (const auto& g : t.gourds) {
    EXPECT_EQ(g.label_a, picture.label(picture.index_of(g.end_a)));
    EXPECT_EQ(g.label_b, picture.label(picture.index_of(g.end_b)));
  }
  EXPECT_TRUE(picture.label(picture.index_of(t.empty)).is_blank());
  EXPECT_EQ(color_assignment(start, picture).size(), start.gourds.size());

  // One gourd (1,2) against a target asking for (1,3).
  Configuration one{{{{0, 0}, {1, 0}, Label::color(1), Label::color(2)}}, {2, 0}};
  Board wrong({{0, 0}, {1, 0}, {2, 0}}, {Label::color(1), Label::color(3), Label::blank()});
  EXPECT_THROW(target_from_board(wrong, one), Error);
}
