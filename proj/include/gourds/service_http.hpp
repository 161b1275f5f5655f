#pragma once

#include <httplib.h>

#include "gourds/service.hpp"

namespace gourds::service {

namespace detail {

inline void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ServiceError(400, "bad_json", e.what());
  }
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ServiceError& e) {
      reply(res, e.status(), e.body());
    } catch (const Error& e) {
      reply(res, 422, {{"error", "domain_error"}, {"message", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", "internal"}, {"message", e.what()}});
    }
  };
}

}  // namespace detail

// Routes:
//   POST /session                 {board, config, target?} (text formats)
//   GET  /session/{id}
//   GET  /session/{id}/moves
//   POST /session/{id}/move       {tail, head, target, kind?}
//   POST /session/{id}/hint
//   POST /session/{id}/solve      {strategy?}
//   POST /session/{id}/scramble   {steps, seed}
inline void mount(httplib::Server& srv, SessionStore& store) {
  using detail::guarded;
  using detail::reply;
  using Req = const httplib::Request&;
  using Res = httplib::Response&;
  static const std::string id = R"(/session/([0-9a-f]+))";

  srv.Post("/session", guarded([&store](Req req, Res res) {
             json b = detail::body_of(req);
             auto text = [&](const char* k, bool required) -> std::string {
               if (!b.contains(k) || b[k].is_null()) {
                 if (required) throw ServiceError(400, "bad_request", std::string("missing field '") + k + "'");
                 return {};
               }
               if (!b[k].is_string()) throw ServiceError(400, "bad_request", std::string("field '") + k + "' must be text");
               return b[k].get<std::string>();
             };
             reply(res, 201, store.create(text("board", true), text("config", true), text("target", false)));
           }));
  srv.Get(id, guarded([&store](Req req, Res res) { reply(res, 200, store.state(req.matches[1])); }));
  srv.Get(id + "/moves", guarded([&store](Req req, Res res) { reply(res, 200, store.legal(req.matches[1])); }));
  srv.Post(id + "/move", guarded([&store](Req req, Res res) {
             reply(res, 200, store.move(req.matches[1], detail::body_of(req)));
           }));
  srv.Post(id + "/hint", guarded([&store](Req req, Res res) { reply(res, 200, store.hint(req.matches[1])); }));
  srv.Post(id + "/solve", guarded([&store](Req req, Res res) {
             reply(res, 200, store.solve_plan(req.matches[1], detail::body_of(req)));
           }));
  srv.Post(id + "/scramble", guarded([&store](Req req, Res res) {
             reply(res, 200, store.scramble_session(req.matches[1], detail::body_of(req)));
           }));
}

}  // namespace gourds::service
