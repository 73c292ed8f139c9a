#include "gsdplan/service.hpp"

#include <algorithm>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "gsdplan/api.hpp"
#include "gsdplan/scenario_io.hpp"

namespace gsdplan {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

HttpResponse error_response(int status, std::string_view kind,
                            const std::string& message,
                            ordered_json extra = ordered_json::object()) {
  ordered_json err;
  err["kind"] = kind;
  err["message"] = message;
  for (auto& [k, v] : extra.items()) err[k] = v;
  return {status, render({{"error", std::move(err)}})};
}

HttpResponse validation_response(const ValidationError& e) {
  ordered_json issues = ordered_json::array();
  for (const Issue& i : e.issues()) {
    issues.push_back(
        {{"entity", i.entity}, {"field", i.field}, {"message", i.message}});
  }
  return error_response(400, "validation", e.what(),
                        {{"issues", std::move(issues)}});
}

// Throws ValidationError for schema problems in the envelope.
struct Request {
  Scenario scenario;
  SolveOptions options;
  std::optional<std::map<std::string, std::string>> assignment;
};

Request decode_request(const json& doc, const ServiceConfig& config) {
  std::vector<Issue> issues;
  auto fail = [&](std::string path, std::string msg) {
    issues.push_back({path, path.substr(path.rfind('/') + 1), std::move(msg)});
  };
  if (!doc.is_object()) {
    throw ValidationError({{"/", "", "request body must be a JSON object"}});
  }
  for (const auto& [k, _] : doc.items()) {
    if (k != "scenario" && k != "options" && k != "assignment") {
      fail("/" + k, "unknown key /" + k);
    }
  }
  if (!doc.contains("scenario")) fail("/scenario", "missing required field /scenario");

  SolveOptions options;
  options.brute_guard = config.brute_guard;
  if (doc.contains("options")) {
    const json& o = doc.at("options");
    if (!o.is_object()) {
      fail("/options", "/options: expected an object");
    } else {
      for (const auto& [k, v] : o.items()) {
        const std::string p = "/options/" + k;
        try {
          if (k == "solver") {
            options.solver = parse_solver_kind(v.get<std::string>());
          } else if (k == "mode") {
            options.mode = parse_solve_mode(v.get<std::string>());
          } else if (k == "weights") {
            options.weights =
                GoalWeights::from_map(v.get<std::map<std::string, double>>());
          } else {
            fail(p, "unknown key " + p);
          }
        } catch (const ValidationError& e) {
          for (const auto& i : e.issues()) fail(p, i.message);
        } catch (const std::exception& e) {
          fail(p, p + ": " + e.what());
        }
      }
    }
  }

  std::optional<std::map<std::string, std::string>> assignment;
  if (doc.contains("assignment")) {
    try {
      assignment = doc.at("assignment").get<std::map<std::string, std::string>>();
    } catch (const json::exception&) {
      fail("/assignment", "/assignment: expected an object of task -> site");
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  Scenario sc = validate_scenario(scenario_from_json(doc.at("scenario")));
  return {std::move(sc), options, std::move(assignment)};
}

HttpResponse dispatch(const ServiceConfig& config, std::string_view path,
                      std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    return error_response(400, "parse", e.what(), {{"byte", e.byte}});
  }

  try {
    Request req = decode_request(doc, config);
    if (path == "/api/evaluate") {
      if (!req.assignment) {
        throw ValidationError(
            {{"/assignment", "assignment", "missing required field /assignment"}});
      }
      return {200, render(evaluate_document(req.scenario, *req.assignment,
                                            req.options.weights))};
    }
    if (path == "/api/goals") req.options.mode = SolveMode::kGoals;
    if (path == "/api/pareto") req.options.mode = SolveMode::kPareto;
    return {200, render(solve_document(req.scenario, req.options))};
  } catch (const ValidationError& e) {
    return validation_response(e);
  } catch (const SolverError& e) {
    return error_response(422, to_string(e.code()), e.what());
  } catch (const InfeasibleAssignment& e) {
    return error_response(422, "infeasible", e.what(),
                          {{"task", e.why().task}, {"site", e.why().site}});
  }
}

}  // namespace

HttpResponse handle_request(const ServiceConfig& config,
                            std::string_view method, std::string_view path,
                            std::string_view body) {
  static constexpr std::array<std::string_view, 4> kPostRoutes = {
      "/api/solve", "/api/evaluate", "/api/goals", "/api/pareto"};
  if (path == "/health") {
    if (method != "GET") {
      return error_response(405, "method_not_allowed", "use GET /health");
    }
    return {200, render({{"status", "ok"}, {"version", kVersion}})};
  }
  if (std::find(kPostRoutes.begin(), kPostRoutes.end(), path) ==
      kPostRoutes.end()) {
    return error_response(404, "not_found",
                          "no such endpoint " + std::string(path));
  }
  if (method != "POST") {
    return error_response(405, "method_not_allowed",
                          "use POST " + std::string(path));
  }
  if (body.size() > config.max_body_bytes) {
    return error_response(413, "payload_too_large",
                          "request body exceeds " +
                              std::to_string(config.max_body_bytes) + " bytes");
  }
  return dispatch(config, path, body);
}

std::optional<std::string> allowed_origin(const ServiceConfig& config,
                                          std::string_view origin) {
  for (const auto& o : config.allowed_origins) {
    if (o == "*") return std::string("*");
    if (!origin.empty() && o == origin) return std::string(origin);
  }
  return std::nullopt;
}

struct Server::Impl {
  ServiceConfig config;
  httplib::Server http;
  std::thread worker;
};

Server::Server(ServiceConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  auto& http = impl_->http;
  const ServiceConfig& cfg = impl_->config;

  // Leave room past the limit so handle_request produces the structured 413.
  http.set_payload_max_length(cfg.max_body_bytes + 1);

  auto with_cors = [&cfg](const httplib::Request& req, httplib::Response& res) {
    if (auto o = allowed_origin(cfg, req.get_header_value("Origin"))) {
      res.set_header("Access-Control-Allow-Origin", *o);
      res.set_header("Vary", "Origin");
    }
  };
  auto route = [&cfg, with_cors](const httplib::Request& req,
                                 httplib::Response& res) {
    const HttpResponse out =
        handle_request(cfg, req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
    with_cors(req, res);
  };
  http.Get(R"(/.*)", route);
  http.Post(R"(/.*)", route);
  http.Options(R"(/.*)", [with_cors](const httplib::Request& req,
                                     httplib::Response& res) {
    with_cors(req, res);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  http.set_error_handler([&cfg](const httplib::Request&, httplib::Response& res) {
    if (res.status == 413 && res.body.empty()) {
      res.set_content(
          render({{"error",
                   {{"kind", "payload_too_large"},
                    {"message", "request body exceeds " +
                                    std::to_string(cfg.max_body_bytes) +
                                    " bytes"}}}}),
          "application/json");
    }
  });
}

Server::~Server() { stop(); }

int Server::start(const std::string& host, int port) {
  auto& http = impl_->http;
  const int bound =
      port == 0 ? http.bind_to_any_port(host) : (http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->worker = std::thread([&http] { http.listen_after_bind(); });
  http.wait_until_ready();
  return bound;
}

void Server::wait() {
  if (impl_->worker.joinable()) impl_->worker.join();
}

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace gsdplan
