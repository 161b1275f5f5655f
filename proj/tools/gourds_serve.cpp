#include <CLI11.hpp>

#include <iostream>

#include "gourds/service_http.hpp"

int main(int argc, char** argv) {
  CLI::App app{"HTTP session service for the gourds playboard", "gourds-serve"};
  std::string host = "127.0.0.1";
  int port = 8080;
  long ttl = 3600;
  app.add_option("--host", host, "Address to bind");
  app.add_option("--port", port, "Port to listen on")->check(CLI::Range(0, 65535));
  app.add_option("--idle-ttl", ttl, "Seconds before an idle session is dropped")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  gourds::service::SessionStore store{std::chrono::seconds(ttl)};
  httplib::Server srv;
  gourds::service::mount(srv, store);
  if (port == 0) {
    port = srv.bind_to_any_port(host);
    if (port < 0) return 1;
    std::cout << "listening on " << host << ":" << port << std::endl;
    return srv.listen_after_bind() ? 0 : 1;
  }
  std::cout << "listening on " << host << ":" << port << std::endl;
  return srv.listen(host, port) ? 0 : 1;
}
