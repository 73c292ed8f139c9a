// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Thresholds are fixed here and nowhere else.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "gsdplan/api.hpp"
#include "gsdplan/bench.hpp"
#include "gsdplan/report.hpp"
#include "gsdplan/scenario_io.hpp"
#include "gsdplan/service.hpp"
#include "gsdplan/solver.hpp"
#include "oracle.hpp"

using namespace gsdplan;
using nlohmann::json;

namespace {

constexpr int kOracleInstances = 1000;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr double kSitesSlopeLo = 1.7, kSitesSlopeHi = 2.3;
constexpr double kTasksSlopeLo = 0.8, kTasksSlopeHi = 1.2;
constexpr double kMaxRunSeconds = 5.0;
constexpr int kGraphInstances = 100;
constexpr int kInvariantInstances = 200;
constexpr int kParityInstances = 50;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string run_cli(const std::string& args, int* code) {
  const std::string cmd = std::string(GSDPLAN_CLI) + " " + args;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    *code = -1;
    return {};
  }
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = ::pclose(pipe);
  *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

// Random separable weights with small integer values, at least one positive.
GoalWeights separable_weights(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> w(0, 3);
  std::map<std::string, double> m{{"total_cost", double(w(rng))},
                                   {"cross_site_volume", double(w(rng))},
                                   {"skill_risk", double(w(rng))}};
  if (m["total_cost"] + m["cross_site_volume"] + m["skill_risk"] == 0) {
    m["total_cost"] = 1;
  }
  return GoalWeights::from_map(m);
}

// Small instance within the brute-force guard, integer-valued costs.
Scenario small_instance(std::uint64_t seed, std::size_t max_m = 7,
                        std::size_t max_n = 4) {
  std::mt19937_64 rng(seed * 7919 + 17);
  const std::size_t m = std::uniform_int_distribution<std::size_t>(1, max_m)(rng);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_n)(rng);
  GeneratorOptions opt;
  opt.skill_gap_penalty = 2.0;
  return generate_instance(m, n, seed, seed % 3 == 0 ? Shape::kChain : Shape::kRandomTree,
                           opt);
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  int mismatches = 0;
  std::string first;
  for (int k = 0; k < kOracleInstances; ++k) {
    const Scenario sc = small_instance(1000 + k);
    std::mt19937_64 rng(k);
    const GoalWeights w = separable_weights(rng);
    const double dp = solve_tree_dp(sc, w).objective;
    const double bf = solve_brute_force(sc, w).objective;
    if (dp != bf) {
      if (!mismatches++) {
        first = " first at instance " + std::to_string(k) + ": dp " +
                std::to_string(dp) + " vs brute " + std::to_string(bf);
      }
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = mismatches == 0 && secs < kOracleBudgetSeconds;
  o.detail = std::to_string(kOracleInstances) + " instances, " +
             std::to_string(mismatches) + " mismatches, " + std::to_string(secs) +
             " s (budget " + std::to_string(kOracleBudgetSeconds) + " s)" + first;
  return o;
}

Outcome complexity() {
  Outcome o;
  std::ostringstream d;
  const auto check_runs = [&](const std::vector<BenchPoint>& pts) {
    // Each run: one full solve at the point's size.
    for (const auto& p : pts) {
      const Scenario sc = generate_instance(p.tasks, p.sites, 7, Shape::kChain);
      const auto t0 = Clock::now();
      solve_tree_dp(sc, GoalWeights{});
      if (seconds_since(t0) >= kMaxRunSeconds) o.pass = false;
    }
  };
  const auto sites = sweep_sites(64, {10, 20, 40, 80, 160});
  const auto tasks = sweep_tasks({16, 32, 64, 128, 256}, 32);
  check_runs(sites);
  check_runs(tasks);
  const double sn = loglog_slope(sites, true);
  const double sm = loglog_slope(tasks, false);
  o.pass = o.pass && sn >= kSitesSlopeLo && sn <= kSitesSlopeHi &&
           sm >= kTasksSlopeLo && sm <= kTasksSlopeHi;
  d << "slope in n (m=64) " << sn << " in [" << kSitesSlopeLo << ", " << kSitesSlopeHi
    << "]; slope in m (n=32) " << sm << " in [" << kTasksSlopeLo << ", "
    << kTasksSlopeHi << "]; times n-sweep:";
  for (const auto& p : sites) d << ' ' << p.seconds;
  d << " m-sweep:";
  for (const auto& p : tasks) d << ' ' << p.seconds;
  o.detail = d.str();
  return o;
}

Outcome graph_shape() {
  int bad = 0;
  for (int k = 0; k < kGraphInstances; ++k) {
    std::mt19937_64 rng(k);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    const Scenario sc = generate_instance(m, n, 500 + k, Shape::kRandomTree);
    const auto g = build_assignment_graph(sc, GoalWeights{});
    const std::size_t leaves = check_tree(sc).leaves().size();
    if (g.nodes.size() != m * n + 1 + leaves ||
        g.arcs.size() != n + (m - 1) * n * n + leaves * n) {
      ++bad;
    }
  }
  return {bad == 0, std::to_string(kGraphInstances) + " random trees, " +
                        std::to_string(bad) + " with wrong node/edge counts"};
}

Outcome worked_instance() {
  Outcome o;
  std::ostringstream d;
  const ScenarioData data = fixtures::chain3_sites2();

  // Oracle over all 8 assignments.
  const auto all = oracle::enumerate(data);
  const auto best = std::min_element(all.begin(), all.end(), [](auto& a, auto& b) {
    return a.goals.total_cost() < b.goals.total_cost();
  });
  const bool oracle_ok = all.size() == 8 && best->goals.total_cost() == 190.0 &&
                         best->sites == std::vector<std::string>{"B", "B", "B"};

  const Scenario sc = load_scenario(fixtures::data_path("chain3_sites2.json"));
  const SolveResult dp = solve_tree_dp(sc, GoalWeights{});
  const json lib = json::parse(render(to_json(make_report(sc, dp))));

  int code = -1;
  const std::string cli_out =
      run_cli("solve " + fixtures::data_path("chain3_sites2.json") + " --out machine", &code);
  json cli;
  try {
    cli = json::parse(cli_out);
  } catch (...) {
    o.pass = false;
  }

  std::ifstream in(fixtures::data_path("chain3_sites2.json"));
  std::stringstream text;
  text << in.rdbuf();
  const auto svc = handle_request(ServiceConfig{}, "POST", "/api/solve",
                                  json{{"scenario", json::parse(text.str())}}.dump());
  const json service = json::parse(svc.body);

  const auto same = [&](const json& a, const json& b) {
    return a.dump() == b.dump();
  };
  const bool agree = code == 0 && svc.status == 200 &&
                     same(lib["assignment"], cli["assignment"]) &&
                     same(lib["assignment"], service["assignment"]) &&
                     same(lib["objective"], cli["objective"]) &&
                     same(lib["objective"], service["objective"]) &&
                     same(lib["goals"], cli["goals"]) &&
                     same(lib["goals"], service["goals"]);
  const bool expected = dp.objective == 190.0 &&
                        dp.assignment.site_of == std::vector<std::size_t>{1, 1, 1};
  o.pass = o.pass && oracle_ok && agree && expected;
  d << "oracle optimum " << best->goals.total_cost() << " at "
    << best->sites[0] << best->sites[1] << best->sites[2] << "; dp " << dp.objective
    << "; cli exit " << code << "; service status " << svc.status
    << "; dp/cli/service values " << (agree ? "identical" : "DIFFER");
  o.detail = d.str();
  return o;
}

struct Property {
  std::string name;
  std::function<bool(std::uint64_t)> holds;  // true when no violation
};

// Every optimal assignment under total_cost, by enumeration.
std::set<std::vector<std::size_t>> optimal_set(const Scenario& sc, double* value) {
  FastEvaluator eval(sc);
  std::set<std::vector<std::size_t>> out;
  double best = std::numeric_limits<double>::infinity();
  const std::size_t m = sc.task_count(), n = sc.site_count();
  Assignment a{std::vector<std::size_t>(m, 0)};
  while (true) {
    if (auto g = eval(a)) {
      if (g->total_cost() < best) {
        best = g->total_cost();
        out.clear();
      }
      if (g->total_cost() == best) out.insert(a.site_of);
    }
    std::size_t i = m;
    while (i > 0 && ++a.site_of[i - 1] == n) a.site_of[--i] = 0;
    if (i == 0) break;
  }
  *value = best;
  return out;
}

Outcome invariant_suite() {
  const std::vector<Property> props = {
      {"monotonicity",
       [](std::uint64_t seed) {
         const Scenario sc = small_instance(seed, 6, 4);
         std::mt19937_64 rng(seed);
         const GoalWeights w = separable_weights(rng);
         const double base = solve_tree_dp(sc, w).objective;
         const std::size_t m = sc.task_count(), n = sc.site_count();
         const std::size_t i = rng() % m, p = rng() % n;
         bool ok = true;
         {  // one e_ip up
           ScenarioData d = sc.data();
           const Task& t = d.tasks[i];
           d.tasks[i].cost_overrides[d.sites[p].id] =
               t.effort * d.sites[p].hourly_rate + 1 + double(rng() % 50);
           ok = ok && solve_tree_dp(validate_scenario(d), w).objective >= base;
         }
         if (!sc.edges().empty()) {  // one d_ij up
           ScenarioData d = sc.data();
           d.edges[rng() % d.edges.size()].volume += 1 + double(rng() % 20);
           ok = ok && solve_tree_dp(validate_scenario(d), w).objective >= base;
         }
         if (!sc.data().relation_entries.empty()) {  // one s_pq up
           ScenarioData d = sc.data();
           d.relation_entries[rng() % d.relation_entries.size()].cost += 1 + double(rng() % 4);
           ok = ok && solve_tree_dp(validate_scenario(d), w).objective >= base;
         }
         return ok;
       }},
      {"positive-scaling argmin invariance",
       [](std::uint64_t seed) {
         const Scenario sc = small_instance(seed, 6, 3);
         const double lambda = std::array<double, 4>{0.5, 2, 3, 8}[seed % 4];
         ScenarioData d = sc.data();
         // e scales through the rate, S through s; efforts stay put.
         for (auto& s : d.sites) s.hourly_rate *= lambda;
         for (auto& r : d.relation_entries) r.cost *= lambda;
         const Scenario scaled = validate_scenario(d);
         double v0 = 0, v1 = 0;
         const auto set0 = optimal_set(sc, &v0);
         const auto set1 = optimal_set(scaled, &v1);
         const double dp0 = solve_tree_dp(sc, GoalWeights{}).objective;
         const double dp1 = solve_tree_dp(scaled, GoalWeights{}).objective;
         return set0 == set1 && v1 == lambda * v0 && dp1 == lambda * dp0;
       }},
      {"pin consistency",
       [](std::uint64_t seed) {
         const Scenario sc = small_instance(seed);
         std::mt19937_64 rng(seed);
         const GoalWeights w = separable_weights(rng);
         const SolveResult r = solve_tree_dp(sc, w);
         ScenarioData d = sc.data();
         for (std::size_t i = 0; i < d.tasks.size(); ++i) {
           d.tasks[i].pinned_site = d.sites[r.assignment.site_of[i]].id;
         }
         const Scenario pinned = validate_scenario(d);
         return solve_tree_dp(pinned, w).objective == r.objective &&
                solve_brute_force(pinned, w).objective == r.objective;
       }},
      {"zero-communication decomposition",
       [](std::uint64_t seed) {
         ScenarioData d = small_instance(seed).data();
         for (auto& e : d.edges) e.volume = 0;
         const Scenario sc = validate_scenario(d);
         const SolveResult r = solve_tree_dp(sc, GoalWeights{});
         double sum = 0.0;
         for (std::size_t i = 0; i < sc.task_count(); ++i) {
           std::size_t best = 0;
           for (std::size_t p = 1; p < sc.site_count(); ++p) {
             if (*sc.exec_cost(i, p) < *sc.exec_cost(i, best)) best = p;
           }
           if (r.assignment.site_of[i] != best) return false;
           sum += *sc.exec_cost(i, best);
         }
         return r.objective == sum;
       }},
      {"frontier soundness",
       [](std::uint64_t seed) {
         const Scenario sc = small_instance(seed, 6, 3);
         const ParetoSet set = pareto_frontier(sc);
         const auto all = oracle::enumerate(sc.data());
         for (const auto& pt : set.points) {
           for (const auto& c : all) {
             if (oracle::dominates(c.goals, pt.goals)) return false;
           }
         }
         const auto ref = oracle::frontier(all);
         if (ref.size() != set.points.size()) return false;
         for (std::size_t k = 0; k < ref.size(); ++k) {
           if (!(ref[k] == set.points[k].goals)) return false;
         }
         return true;
       }},
      {"per-goal optima on the frontier",
       [](std::uint64_t seed) {
         const Scenario sc = small_instance(seed, 6, 3);
         const ParetoSet set = pareto_frontier(sc);
         for (const auto& o : per_goal_optima(sc)) {
           const double v = o.result.goals[o.goal];
           const bool found = std::any_of(
               set.points.begin(), set.points.end(),
               [&](const ParetoPoint& pt) { return pt.goals[o.goal] == v; });
           if (!found) return false;
         }
         return true;
       }},
  };

  Outcome o;
  std::ostringstream d;
  for (const auto& prop : props) {
    int violations = 0;
    for (int k = 0; k < kInvariantInstances; ++k) {
      if (!prop.holds(3000 + k)) ++violations;
    }
    o.pass = o.pass && violations == 0;
    d << prop.name << ": " << violations << "/" << kInvariantInstances << "; ";
  }
  o.detail = d.str();
  return o;
}

Outcome interface_round_trips() {
  Outcome o;
  int corpus = 0, round_trip_bad = 0;
  std::vector<Scenario> scenarios;
  for (const auto& entry : std::filesystem::directory_iterator(GSDPLAN_TEST_DATA_DIR)) {
    if (entry.path().extension() == ".json") scenarios.push_back(load_scenario(entry.path()));
  }
  for (int k = 0; k < 20; ++k) scenarios.push_back(small_instance(9000 + k));
  for (const Scenario& sc : scenarios) {
    ++corpus;
    const Scenario again = parse_scenario(serialize_scenario(sc));
    if (!(again == sc) || serialize_scenario(again) != serialize_scenario(sc)) {
      ++round_trip_bad;
    }
  }

  int parity_bad = 0;
  const std::string path = temp_path("gsdplan_parity.json");
  for (int k = 0; k < kParityInstances; ++k) {
    const Scenario sc = small_instance(7000 + k);
    std::ofstream(path) << serialize_scenario(sc);
    int code = -1;
    const std::string cli_out = run_cli("solve " + path + " --out machine", &code);
    const auto svc = handle_request(
        ServiceConfig{}, "POST", "/api/solve",
        json{{"scenario", json::parse(serialize_scenario(sc))}}.dump());
    if (code != 0 || svc.status != 200 || cli_out != svc.body) ++parity_bad;
  }
  o.pass = round_trip_bad == 0 && parity_bad == 0;
  o.detail = "round trip " + std::to_string(corpus - round_trip_bad) + "/" +
             std::to_string(corpus) + " identical; CLI/service parity " +
             std::to_string(kParityInstances - parity_bad) + "/" +
             std::to_string(kParityInstances);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle equivalence (dp == brute force)", oracle_equivalence},
      {"complexity bound O(m n^2)", complexity},
      {"assignment graph shape", graph_shape},
      {"worked 3-task/2-site instance via dp, cli, service", worked_instance},
      {"invariant suite", invariant_suite},
      {"interface round trips", interface_round_trips},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << o.detail
              << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed ? "acceptance: FAILED (" + std::to_string(failed) + ")"
                       : std::string("acceptance: all criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
