#pragma once

// Stateless HTTP front end for what-if exploration.
//
//   POST /api/solve     {scenario, options: {solver, weights, mode}}
//   POST /api/evaluate  {scenario, options: {weights}, assignment: {task: site}}
//   POST /api/goals     {scenario}
//   POST /api/pareto    {scenario}
//   GET  /health
//
// 400 malformed or invalid input, 422 infeasible / guard exceeded / solver
// refusal, 413 body over the limit. Scenarios travel inline with every
// request; nothing is kept between requests.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsdplan/solver.hpp"

namespace gsdplan {

inline constexpr std::string_view kVersion = "0.1.0";

struct ServiceConfig {
  std::uint64_t brute_guard = kDefaultBruteGuard;
  std::size_t max_body_bytes = 1 << 20;
  // "*" allows any origin.
  std::vector<std::string> allowed_origins;
};

struct HttpResponse {
  int status = 200;
  std::string body;
};

/// Routes one request. Pure: the result depends only on the arguments.
HttpResponse handle_request(const ServiceConfig& config,
                            std::string_view method, std::string_view path,
                            std::string_view body);

/// Value for Access-Control-Allow-Origin, or nullopt when not allowed.
std::optional<std::string> allowed_origin(const ServiceConfig& config,
                                          std::string_view origin);

/// HTTP server bound to a host and port. Runs on a background thread.
class Server {
 public:
  explicit Server(ServiceConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws on failure.
  int start(const std::string& host, int port);
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gsdplan
