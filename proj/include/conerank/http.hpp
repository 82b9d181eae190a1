#pragma once

// Binds Service handlers to an httplib server, with an optional static
// directory mounted at "/".

#include <filesystem>
#include <string>

// Eigen must precede httplib: <resolv.h> defines a `_res` macro.
#include "conerank/service.hpp"

#include <httplib.h>

namespace conerank {

namespace detail {

inline QueryParams query_of(const httplib::Request& req) {
  QueryParams q;
  for (const auto& [k, v] : req.params) q.emplace(k, v);
  return q;
}

inline void send(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type.c_str());
}

}  // namespace detail

/// Registers the JSON routes. A non-empty `static_dir` is served under "/".
inline void install_routes(httplib::Server& server, Service& service, const std::filesystem::path& static_dir = {}) {
  using detail::query_of;
  using detail::send;
  server.Get("/healthz", [&service](const httplib::Request&, httplib::Response& res) { send(res, service.health()); });
  server.Post("/sessions", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.create_session(req.body));
  });
  server.Get(R"(/sessions/([^/]+)/rank)", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.rank(req.matches[1], query_of(req)));
  });
  server.Put(R"(/sessions/([^/]+)/panel)", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.update_panel(req.matches[1], req.body));
  });
  server.Get(R"(/sessions/([^/]+)/classify)", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.classify(req.matches[1], query_of(req)));
  });
  server.Get(R"(/sessions/([^/]+)/cones)", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.cones(req.matches[1], query_of(req)));
  });
  if (!static_dir.empty()) {
    if (!std::filesystem::is_directory(static_dir))
      throw InvalidArgument("static directory '" + static_dir.string() + "' does not exist");
    server.set_mount_point("/", static_dir.string());
  }
}

/// Blocks serving requests until the server is stopped.
inline bool serve(Service& service, const std::string& host, int port, const std::filesystem::path& static_dir = {}) {
  httplib::Server server;
  install_routes(server, service, static_dir);
  return server.listen(host, port);
}

}  // namespace conerank
