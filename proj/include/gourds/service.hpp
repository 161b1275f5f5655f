#pragma once

#include <json.hpp>

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>

#include "gourds/placement.hpp"
#include "gourds/puzzle.hpp"
#include "gourds/solver.hpp"

namespace gourds::service {

using json = nlohmann::json;

// Error with an HTTP status and a stable machine-readable code.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& msg, int line = 0)
      : Error(msg), status_(status), code_(std::move(code)), line_(line) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }
  json body() const {
    json j{{"error", code_}, {"message", what()}};
    if (line_ > 0) j["line"] = line_;
    return j;
  }

 private:
  int status_;
  std::string code_;
  int line_;
};

// ---------------------------------------------------------------------------
// JSON mirrors of the text formats

inline json to_json(HexCoord c) { return {{"q", c.q}, {"r", c.r}}; }

inline HexCoord hex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("q") || !j.contains("r") || !j["q"].is_number_integer() ||
      !j["r"].is_number_integer())
    throw ServiceError(400, "bad_request", "expected {q, r} with integer fields");
  return {j["q"].get<int>(), j["r"].get<int>()};
}

inline json to_json(const Move& m) {
  return {{"tail", to_json(m.tail)}, {"head", to_json(m.head)}, {"target", to_json(m.target)}, {"kind", to_string(m.kind)}};
}

inline json to_json(const std::vector<Move>& moves) {
  json a = json::array();
  for (const auto& m : moves) a.push_back(to_json(m));
  return a;
}

inline json to_json(const Board& b) {
  json cells = json::array();
  for (std::size_t i = 0; i < b.size(); ++i)
    cells.push_back({{"q", b.cells()[i].q}, {"r", b.cells()[i].r}, {"label", to_string(b.labels()[i])}});
  return {{"cells", cells}};
}

inline json to_json(const Configuration& c) {
  json gs = json::array();
  for (const auto& g : c.gourds)
    gs.push_back({{"a", to_json(g.end_a)},
                  {"label_a", to_string(g.label_a)},
                  {"b", to_json(g.end_b)},
                  {"label_b", to_string(g.label_b)}});
  return {{"gourds", gs}, {"empty", to_json(c.empty)}};
}

inline json to_json(const SolvePlan& p) {
  return {{"strategy", to_string(p.strategy)},
          {"s1", to_json(p.s1)},
          {"s2", to_json(p.s2)},
          {"s3", to_json(p.s3)},
          {"moves", p.size()},
          {"stats",
           {{"splits", p.stats.splits},
            {"one_shared", p.stats.one_shared},
            {"three_shared", p.stats.three_shared},
            {"base_cases", p.stats.base_cases},
            {"fallbacks", p.stats.fallbacks}}}};
}

// ---------------------------------------------------------------------------
// Sessions

struct Session {
  std::string id;
  Board board;
  Configuration initial;
  Configuration current;
  std::optional<Configuration> target;
  std::vector<Move> history;
  // Rest of the plan behind the last hint; valid only while every move
  // since then was the hinted one.
  std::vector<Move> hint_plan;
  std::size_t hint_step = 0;
  bool proper = false;
  std::chrono::steady_clock::time_point last_used;
  std::mutex mu;
};

namespace detail {

template <typename Parse>
auto parse_or_400(const std::string& text, const char* what, Parse&& parse) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ServiceError(400, std::string("bad_") + what, e.what(), e.line());
  } catch (const Error& e) {
    throw ServiceError(400, std::string("bad_") + what, e.what());
  }
}

}  // namespace detail

class SessionStore {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit SessionStore(std::chrono::seconds idle_ttl = std::chrono::hours(1), Clock clock = nullptr)
      : ttl_(idle_ttl), clock_(clock ? std::move(clock) : [] { return std::chrono::steady_clock::now(); }),
        rng_(std::random_device{}()) {}

  // `target_text` may be a configuration or a coloured board picture.
  json create(const std::string& board_text, const std::string& config_text, const std::string& target_text = {}) {
    auto s = std::make_shared<Session>();
    s->board = detail::parse_or_400(board_text, "board", [](std::string_view t) { return parse_board(t); });
    s->initial = detail::parse_or_400(config_text, "config", [](std::string_view t) { return parse_configuration(t); });
    try {
      check_covers(s->board, s->initial);
    } catch (const Error& e) {
      throw ServiceError(422, "invalid_config", e.what());
    }
    s->current = s->initial;
    if (!target_text.empty()) s->target = read_target(s->board, s->initial, target_text);
    s->proper = validate_proper(s->board).proper;
    s->last_used = clock_();
    {
      std::unique_lock lock(mu_);
      expire_locked();
      s->id = fresh_id_locked();
      sessions_[s->id] = s;
    }
    std::lock_guard g(s->mu);
    return state_json(*s);
  }

  json state(const std::string& id) {
    return with(id, [&](Session& s) { return state_json(s); });
  }

  json legal(const std::string& id) {
    return with(id, [&](Session& s) { return json{{"moves", to_json(legal_moves(s.board, s.current))}}; });
  }

  json move(const std::string& id, const json& body) {
    return with(id, [&](Session& s) {
      if (!body.is_object() || !body.contains("tail") || !body.contains("head") || !body.contains("target"))
        throw ServiceError(400, "bad_request", "move needs tail, head and target");
      HexCoord tail = hex_from_json(body["tail"]), head = hex_from_json(body["head"]),
               target = hex_from_json(body["target"]);
      std::optional<Move> found;
      for (const auto& m : legal_moves(s.board, s.current))
        if (m.tail == tail && m.head == head && m.target == target) found = m;
      if (!found) throw ServiceError(409, "illegal_move", "move is not legal in the current configuration");
      if (body.contains("kind") && body["kind"] != to_string(found->kind))
        throw ServiceError(409, "illegal_move", std::string("move kind is ") + to_string(found->kind));
      Occupancy occ(s.board, s.current);
      occ.apply_checked(*found);
      s.current = occ.to_configuration();
      s.history.push_back(*found);
      if (s.hint_step < s.hint_plan.size() && s.hint_plan[s.hint_step] == *found) {
        ++s.hint_step;
      } else {
        s.hint_plan.clear();
        s.hint_step = 0;
      }
      return json{{"move", to_json(*found)}, {"state", state_json(s)}};
    });
  }

  json hint(const std::string& id) {
    return with(id, [&](Session& s) {
      if (solved(s)) {
        plan_for(s, {});  // still reports a missing target or improper board
        return json{{"moves_left", 0}, {"solved", true}, {"move", nullptr}};
      }
      if (s.hint_step >= s.hint_plan.size()) {
        s.hint_plan = plan_for(s, {}).moves();
        s.hint_step = 0;
      }
      json j{{"moves_left", s.hint_plan.size() - s.hint_step}, {"solved", false}};
      j["move"] = s.hint_step < s.hint_plan.size() ? to_json(s.hint_plan[s.hint_step]) : json(nullptr);
      return j;
    });
  }

  json solve_plan(const std::string& id, const json& body) {
    SolveOptions opt;
    if (body.is_object() && body.contains("strategy")) {
      if (body["strategy"] == "cubic") opt.strategy = Strategy::Cubic;
      else if (body["strategy"] != "quadratic") throw ServiceError(400, "bad_request", "strategy is cubic or quadratic");
    }
    return with(id, [&](Session& s) { return to_json(plan_for(s, opt)); });
  }

  json scramble_session(const std::string& id, const json& body) {
    int steps = 100;
    std::uint64_t seed = 0;
    if (body.is_object()) {
      if (body.contains("steps")) {
        if (!body["steps"].is_number_integer() || body["steps"].get<long>() < 0)
          throw ServiceError(400, "bad_request", "steps must be a non-negative integer");
        steps = body["steps"].get<int>();
      }
      if (body.contains("seed")) {
        if (!body["seed"].is_number_integer()) throw ServiceError(400, "bad_request", "seed must be an integer");
        seed = body["seed"].get<std::uint64_t>();
      }
    }
    return with(id, [&](Session& s) {
      auto [end, trace] = scramble(s.board, s.current, steps, seed);
      s.current = end;
      s.history.insert(s.history.end(), trace.begin(), trace.end());
      s.hint_plan.clear();
      s.hint_step = 0;
      return state_json(s);
    });
  }

  std::size_t size() {
    std::unique_lock lock(mu_);
    expire_locked();
    return sessions_.size();
  }

 private:
  static Configuration read_target(const Board& b, const Configuration& start, const std::string& text) {
    if (text.rfind(kConfigHeader, 0) == 0) {
      auto t = detail::parse_or_400(text, "target", [](std::string_view x) { return parse_configuration(x); });
      try {
        check_covers(b, t);
        color_assignment(start, t);
      } catch (const Error& e) {
        throw ServiceError(422, "invalid_target", e.what());
      }
      return t;
    }
    Board picture = detail::parse_or_400(text, "target", [](std::string_view x) { return parse_board(x); });
    if (picture.cells() != b.cells()) throw ServiceError(422, "invalid_target", "target picture has different cells");
    try {
      return target_from_board(picture, start);
    } catch (const Error& e) {
      throw ServiceError(422, "invalid_target", e.what());
    }
  }

  static bool solved(const Session& s) {
    return s.target && Occupancy(s.board, s.current).label_key() == Occupancy(s.board, *s.target).label_key();
  }

  static SolvePlan plan_for(Session& s, const SolveOptions& opt) {
    if (!s.target) throw ServiceError(409, "no_target", "session has no target");
    if (!s.proper) throw ServiceError(422, "improper_board", "the solver needs a proper board");
    return solve(s.board, s.current, *s.target, opt);
  }

  static json state_json(const Session& s) {
    json j{{"id", s.id},
           {"board", to_json(s.board)},
           {"current", to_json(s.current)},
           {"history", to_json(s.history)},
           {"proper", s.proper},
           {"solved", solved(s)}};
    j["target"] = s.target ? to_json(*s.target) : json(nullptr);
    return j;
  }

  template <typename Fn>
  json with(const std::string& id, Fn&& fn) {
    std::shared_ptr<Session> s;
    {
      std::unique_lock lock(mu_);
      expire_locked();
      auto it = sessions_.find(id);
      if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session '" + id + "'");
      s = it->second;
    }
    std::lock_guard g(s->mu);
    s->last_used = clock_();
    return fn(*s);
  }

  void expire_locked() {
    const auto now = clock_();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      // A session busy in another request is never expired under it.
      std::unique_lock g(it->second->mu, std::try_to_lock);
      if (g.owns_lock() && now - it->second->last_used > ttl_) it = sessions_.erase(it);
      else ++it;
    }
  }

  std::string fresh_id_locked() {
    static constexpr char hex[] = "0123456789abcdef";
    for (;;) {
      std::string id;
      for (int i = 0; i < 2; ++i) {
        auto v = rng_();
        for (int k = 0; k < 16; ++k) id += hex[(v >> (4 * k)) & 15];
      }
      if (!sessions_.count(id)) return id;
    }
  }

  std::chrono::seconds ttl_;
  Clock clock_;
  std::mt19937_64 rng_;
  std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace gourds::service
