#pragma once

#include <chrono>
#include <random>
#include <sstream>
#include <string>

#include "gourds/boards.hpp"
#include "gourds/solver.hpp"

namespace gourds::bench {

struct Instance {
  std::string family;
  Board board;
  Configuration start;
  Configuration target;
};

// Two rows of n cells plus one extra cell: the left half of the gourds is
// red, the right half blue, and the target swaps the halves.
inline Instance two_lobe_exchange(int n) {
  Instance in{"two_lobe", boards::two_lobe(n), {}, {}};
  in.start.empty = in.target.empty = {n, 0};
  const auto red = Label::color(1), blue = Label::color(2);
  for (int i = 0; i < n; ++i) {
    auto a = i < n / 2 ? red : blue, z = i < n / 2 ? blue : red;
    in.start.gourds.push_back({{i, 0}, {i, 1}, a, a});
    in.target.gourds.push_back({{i, 0}, {i, 1}, z, z});
  }
  return in;
}

// Gourds numbered along a Hamiltonian cycle, then start and target are two
// independent random walks from that configuration.
inline Instance random_instance(int cells, std::uint64_t seed, int steps = 0) {
  Instance in{"random", boards::random_proper(cells, seed), {}, {}};
  auto h = find_hamiltonian(in.board);
  Configuration base;
  base.empty = h.at(0);
  for (long i = 1, k = 1; i + 1 < static_cast<long>(h.size()); i += 2, k += 2)
    base.gourds.push_back({h.at(i), h.at(i + 1), Label::number(static_cast<int>(k)),
                           Label::number(static_cast<int>(k + 1))});
  if (steps <= 0) steps = 20 * cells;
  in.start = scramble(in.board, base, steps, seed * 2 + 1).first;
  in.target = scramble(in.board, base, steps, seed * 2 + 2).first;
  return in;
}

struct Row {
  std::size_t n = 0;  // gourds
  Strategy strategy = Strategy::Quadratic;
  std::size_t s1 = 0, s2 = 0, s3 = 0;
  long lower_bound = 0;
  double wall_time = 0;  // seconds
  bool verified = false;

  std::size_t moves() const { return s1 + s2 + s3; }
};

inline Row run(const Instance& in, Strategy strategy) {
  Row r;
  r.n = in.start.gourds.size();
  r.strategy = strategy;
  SolveOptions opt;
  opt.strategy = strategy;
  auto t0 = std::chrono::steady_clock::now();
  auto plan = solve(in.board, in.start, in.target, opt);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.s1 = plan.s1.size();
  r.s2 = plan.s2.size();
  r.s3 = plan.s3.size();
  r.lower_bound = displacement_lower_bound(in.board, in.start, in.target);
  try {
    r.verified = Occupancy(in.board, verify_sequence(in.board, in.start, plan.moves())).label_key() ==
                 Occupancy(in.board, in.target).label_key();
  } catch (const Error&) {
    r.verified = false;
  }
  return r;
}

inline constexpr std::string_view kCsvHeader = "n,strategy,moves_s1,moves_s2,moves_s3,lower_bound,wall_time";

inline std::string csv(const Row& r) {
  std::ostringstream os;
  os << r.n << ',' << to_string(r.strategy) << ',' << r.s1 << ',' << r.s2 << ',' << r.s3 << ',' << r.lower_bound
     << ',' << r.wall_time;
  return os.str();
}

}  // namespace gourds::bench
