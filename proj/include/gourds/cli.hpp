#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gourds/bench.hpp"
#include "gourds/hamilton.hpp"
#include "gourds/placement.hpp"
#include "gourds/puzzle.hpp"
#include "gourds/solver.hpp"

namespace gourds::cli {

enum Exit : int { kOk = 0, kDomainFailure = 1, kUsage = 2 };

// Missing or unreadable input file; reported as a usage error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A domain failure (improper board, UNSAT, unreachable, mismatch).
class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Flags {
  std::string board, start, target, config, formula, out, plan;
  std::string strategy = "quadratic";
  std::string mode = "pivot";
  int steps = 100;
  std::uint64_t seed = 0;
  std::optional<long> limit;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  // Writes to --out when given, else to standard output.
  void emit(const Flags& f, const std::string& text) {
    if (f.out.empty()) {
      out_ << text;
      return;
    }
    std::ofstream o(f.out, std::ios::binary);
    if (!o) throw InputError("cannot write '" + f.out + "'");
    o << text;
  }

  std::ostream& report(const Flags& f) { return f.out.empty() ? err_ : out_; }

  int validate(const Flags& f) {
    auto r = validate_proper(parse_board(read_text(f.board)));
    out_ << to_string(r);
    return r.proper ? kOk : kDomainFailure;
  }

  static Board proper_board(const std::string& path) {
    Board b = parse_board(read_text(path));
    auto r = validate_proper(b);
    if (!r.proper) throw Failure("board is not proper:\n" + to_string(r));
    return b;
  }

  int decompose(const Flags& f) {
    Board b = proper_board(f.board);
    auto h = normalized(repair_seven_runs(b, find_hamiltonian(b)));
    emit(f, decomposition_dump(b, h));
    return kOk;
  }

  int solve_cmd(const Flags& f) {
    Board b = proper_board(f.board);
    auto s = parse_configuration(read_text(f.start));
    auto t = parse_configuration(read_text(f.target));
    SolveOptions opt;
    opt.strategy = f.strategy == "cubic" ? Strategy::Cubic : Strategy::Quadratic;
    auto p = solve(b, s, t, opt);
    emit(f, serialize_plan(p));
    auto& r = report(f);
    r << "moves: " << p.size() << " (s1=" << p.s1.size() << " s2=" << p.s2.size() << " s3=" << p.s3.size() << ")\n"
      << "strategy: " << to_string(p.strategy) << "\n"
      << "splits: " << p.stats.splits << " (one_shared=" << p.stats.one_shared
      << " three_shared=" << p.stats.three_shared << ")\n"
      << "base_cases: " << p.stats.base_cases << "\n"
      << "fallbacks: " << p.stats.fallbacks << "\n"
      << "lower_bound: " << displacement_lower_bound(b, s, t) << "\n";
    return kOk;
  }

  int oracle(const Flags& f) {
    Board b = parse_board(read_text(f.board));
    auto c = parse_configuration(read_text(f.config));
    ReachOptions opt;
    opt.mode = f.mode == "sharp" ? OracleMode::SharpTurnRules : OracleMode::PivotRules;
    if (f.target.empty()) {
      out_ << "states: " << count_reachable(b, c, opt) << "\n";
      return kOk;
    }
    auto t = parse_configuration(read_text(f.target));
    auto path = shortest_path(b, c, t, opt);
    if (!path) throw Failure("target is not reachable");
    out_ << "distance: " << path->size() << "\n";
    if (!f.out.empty()) emit(f, serialize_moves(*path));
    return kOk;
  }

  int scramble_cmd(const Flags& f) {
    Board b = parse_board(read_text(f.board));
    auto c = parse_configuration(read_text(f.config));
    auto [end, trace] = scramble(b, c, f.steps, f.seed);
    emit(f, serialize_configuration(end));
    report(f) << "moves: " << trace.size() << "\n";
    return kOk;
  }

  int verify(const Flags& f) {
    Board b = parse_board(read_text(f.board));
    auto s = parse_configuration(read_text(f.start));
    std::string text = f.plan.empty() ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_text(f.plan);
    std::vector<Move> moves;
    if (text.rfind(kPlanHeader, 0) == 0) moves = parse_plan(text).moves();
    else moves = parse_moves(text);
    Configuration end;
    try {
      end = verify_sequence(b, s, moves);
    } catch (const IllegalMove& e) {
      throw Failure(e.what());
    }
    if (!f.out.empty()) emit(f, serialize_configuration(end));
    if (!f.target.empty()) {
      auto t = parse_configuration(read_text(f.target));
      if (Occupancy(b, end).label_key() != Occupancy(b, t).label_key())
        throw Failure("replay of " + std::to_string(moves.size()) + " moves does not end at the target");
    }
    out_ << "verified: " << moves.size() << " moves\n";
    return kOk;
  }

  int place(const Flags& f) {
    auto inst = parse_instance(read_text(f.board));
    if (f.limit) {
      auto all = enumerate_placements(inst, static_cast<std::size_t>(std::max(0L, *f.limit)));
      std::ostringstream os;
      for (const auto& c : all) os << serialize_configuration(c);
      emit(f, os.str());
      report(f) << "placements: " << all.size() << "\n";
      if (all.empty()) throw Failure("UNSAT");
      return kOk;
    }
    auto c = solve_placement(inst);
    if (!c) throw Failure("UNSAT");
    emit(f, serialize_configuration(*c));
    return kOk;
  }

  int reduce(const Flags& f) {
    auto formula = parse_formula(read_text(f.formula));
    auto p = formula_problems(formula);
    if (!p.empty()) throw Failure("invalid formula: " + p.front());
    auto inst = reduce_1in3sat(formula);
    emit(f, serialize_instance(inst));
    auto rep = verify_reduction(inst, formula);
    auto& r = report(f);
    r << "cells: " << inst.board.size() << "\n"
      << "gourds: " << budget_total(inst.budget) << "\n";
    for (const auto& c : rep.checks) r << c.name << ": " << (c.ok ? "ok" : "FAIL " + c.detail) << "\n";
    return rep.ok() ? kOk : kDomainFailure;
  }

  int bench_cmd(const Flags& f) {
    std::vector<Strategy> strategies;
    if (f.strategy == "cubic" || f.strategy == "both") strategies.push_back(Strategy::Cubic);
    if (f.strategy == "quadratic" || f.strategy == "both") strategies.push_back(Strategy::Quadratic);
    std::vector<bench::Instance> instances;
    if (!f.board.empty()) {
      if (f.start.empty() || f.target.empty()) throw InputError("bench --board needs --start and --target");
      instances.push_back({"file", parse_board(read_text(f.board)), parse_configuration(read_text(f.start)),
                           parse_configuration(read_text(f.target))});
    } else {
      long top = f.limit.value_or(40);
      for (int n = 8; n <= top; n += 4) instances.push_back(bench::two_lobe_exchange(n));
    }
    std::ostringstream os;
    os << bench::kCsvHeader << "\n";
    bool all_ok = true;
    for (const auto& in : instances)
      for (auto st : strategies) {
        auto row = bench::run(in, st);
        all_ok = all_ok && row.verified;
        os << bench::csv(row) << "\n";
      }
    emit(f, os.str());
    if (!all_ok) throw Failure("a plan did not verify");
    return kOk;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Gourds puzzle engine, solver and placement tools", "gourds"};
  app.require_subcommand(1, 1);
  Flags f;
  auto file = [](CLI::App* sc, const char* name, std::string& dst, const char* help, bool required) {
    auto* o = sc->add_option(name, dst, help);
    if (required) o->required();
  };
  auto strategy = CLI::IsMember({"cubic", "quadratic"});

  auto* validate = app.add_subcommand("validate", "Check the properness conditions of a board");
  file(validate, "--board", f.board, "Board file", true);

  auto* decompose = app.add_subcommand("decompose", "Hamiltonian cycle, triangulation and dual tree of a board");
  file(decompose, "--board", f.board, "Board file", true);
  file(decompose, "--out", f.out, "Output path", false);

  auto* solve = app.add_subcommand("solve", "Plan moves from --start to --target");
  file(solve, "--board", f.board, "Board file", true);
  file(solve, "--start", f.start, "Start configuration", true);
  file(solve, "--target", f.target, "Target configuration", true);
  solve->add_option("--strategy", f.strategy, "cubic or quadratic")->check(strategy);
  file(solve, "--out", f.out, "Plan output path", false);

  auto* oracle = app.add_subcommand("oracle", "Exhaustive reachability from a configuration");
  file(oracle, "--board", f.board, "Board file", true);
  file(oracle, "--config", f.config, "Configuration", true);
  file(oracle, "--target", f.target, "Report the shortest path to this configuration", false);
  oracle->add_option("--mode", f.mode, "pivot or sharp")->check(CLI::IsMember({"pivot", "sharp"}));
  file(oracle, "--out", f.out, "Path output (with --target)", false);

  auto* scr = app.add_subcommand("scramble", "Seeded random walk");
  file(scr, "--board", f.board, "Board file", true);
  file(scr, "--config", f.config, "Configuration", true);
  scr->add_option("--steps", f.steps, "Number of moves")->check(CLI::NonNegativeNumber);
  scr->add_option("--seed", f.seed, "Random seed");
  file(scr, "--out", f.out, "Output path", false);

  auto* verify = app.add_subcommand("verify", "Replay a plan or move list");
  file(verify, "--board", f.board, "Board file", true);
  file(verify, "--start", f.start, "Start configuration", true);
  file(verify, "--target", f.target, "Expected final configuration", false);
  verify->add_option("plan", f.plan, "Plan or move file (standard input when omitted)");
  file(verify, "--out", f.out, "Write the final configuration here", false);

  auto* place = app.add_subcommand("place", "Solve a coloured placement instance");
  file(place, "--board", f.board, "Placement instance file", true);
  place->add_option("--limit", f.limit, "Enumerate up to this many placements instead");
  file(place, "--out", f.out, "Output path", false);

  auto* reduce = app.add_subcommand("reduce", "Placement instance from a monotone 1-in-3 formula");
  file(reduce, "--formula", f.formula, "Formula file", true);
  file(reduce, "--out", f.out, "Output path", false);

  auto* bench = app.add_subcommand("bench", "CSV of solver move counts");
  file(bench, "--board", f.board, "Single instance board (with --start and --target)", false);
  file(bench, "--start", f.start, "Start configuration", false);
  file(bench, "--target", f.target, "Target configuration", false);
  bench->add_option("--strategy", f.strategy, "cubic, quadratic or both")
      ->check(CLI::IsMember({"cubic", "quadratic", "both"}));
  bench->add_option("--limit", f.limit, "Largest two-lobe n (default 40)");
  file(bench, "--out", f.out, "CSV output path", false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Runner r(out, err);
  try {
    if (*validate) return r.validate(f);
    if (*decompose) return r.decompose(f);
    if (*solve) return r.solve_cmd(f);
    if (*oracle) return r.oracle(f);
    if (*scr) return r.scramble_cmd(f);
    if (*verify) return r.verify(f);
    if (*place) return r.place(f);
    if (*reduce) return r.reduce(f);
    if (*bench) return r.bench_cmd(f);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Failure& e) {
    err << e.what() << "\n";
    return kDomainFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kUsage;
}

}  // namespace gourds::cli
