// gsdplan-serve: HTTP front end for interactive what-if planning.

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "gsdplan/service.hpp"

namespace {

gsdplan::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::vector<std::string> split_origins(const char* raw) {
  std::vector<std::string> out;
  if (!raw) return out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gsdplan HTTP service"};
  std::string host = "127.0.0.1";
  int port = 8080;
  gsdplan::ServiceConfig config;
  config.brute_guard = gsdplan::brute_guard_from_env();
  config.allowed_origins = split_origins(std::getenv("GSDPLAN_ALLOWED_ORIGINS"));
  if (const char* listen = std::getenv("GSDPLAN_LISTEN")) {
    const std::string s(listen);
    if (const auto colon = s.rfind(':'); colon != std::string::npos) {
      host = s.substr(0, colon);
      port = std::atoi(s.c_str() + colon + 1);
    }
  }

  app.add_option("--host", host, "Listen address");
  app.add_option("--port", port, "Listen port (0 picks a free one)");
  app.add_option("--guard", config.brute_guard,
                 "Brute-force limit on n^m (default SOLVER_BRUTE_GUARD or 1e7)");
  app.add_option("--allow-origin", config.allowed_origins,
                 "CORS origin to allow; repeatable, '*' for any");
  app.add_option("--max-body", config.max_body_bytes, "Request body limit in bytes");
  CLI11_PARSE(app, argc, argv);

  gsdplan::Server server(config);
  try {
    const int bound = server.start(host, port);
    std::cout << "listening on " << host << ':' << bound << std::endl;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.wait();
  return 0;
}
