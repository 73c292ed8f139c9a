// gsdplan: plan task-to-site assignments from the command line.
//
// Exit codes: 0 success, 1 infeasible / guard / solver refusal,
// 2 usage, parse or validation errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "gsdplan/api.hpp"
#include "gsdplan/bench.hpp"
#include "gsdplan/report.hpp"
#include "gsdplan/scenario_io.hpp"
#include "gsdplan/solver.hpp"

namespace {

using namespace gsdplan;

constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::map<std::string, std::string> parse_pairs(
    const std::vector<std::string>& items, const char* flag) {
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw UsageError(std::string(flag) + " expects name=value, got '" +
                       item + "'");
    }
    if (!out.emplace(item.substr(0, eq), item.substr(eq + 1)).second) {
      throw UsageError(std::string(flag) + " repeats " + item.substr(0, eq));
    }
  }
  return out;
}

std::optional<GoalWeights> parse_weights(const std::vector<std::string>& items) {
  if (items.empty()) return std::nullopt;
  std::map<std::string, double> named;
  for (const auto& [k, v] : parse_pairs(items, "--weights")) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (*end != '\0') throw UsageError("--weights " + k + ": not a number: " + v);
    named.emplace(k, x);
  }
  return GoalWeights::from_map(named);
}

bool machine_output(const std::string& out) { return out == "machine"; }

struct Args {
  std::string file;
  std::string solver = "dp";
  std::string out = "table";
  std::vector<std::string> weights;
  std::vector<std::string> assign;
  std::size_t tasks = 0;
  std::size_t sites = 0;
  std::uint64_t seed = 1;
  std::string shape = "chain";
  bool no_skills = false;
  bool sites_sweep = false;
  bool tasks_sweep = false;
  double min_batch = 0.02;
};

int cmd_validate(const Args& a) {
  const Scenario sc = load_scenario(a.file);
  std::cout << "ok: " << sc.task_count() << " tasks, " << sc.site_count()
            << " sites, " << sc.edges().size() << " edges";
  try {
    check_tree(sc);
    std::cout << ", tree";
  } catch (const SolverError& e) {
    std::cout << ", " << e.what();
  }
  std::cout << '\n';
  return 0;
}

int cmd_solve(const Args& a) {
  const Scenario sc = load_scenario(a.file);
  SolveOptions opt;
  opt.solver = parse_solver_kind(a.solver);
  opt.weights = parse_weights(a.weights);
  opt.brute_guard = brute_guard_from_env();
  if (machine_output(a.out)) {
    std::cout << render(solve_document(sc, opt));
    return 0;
  }
  const GoalWeights w = opt.weights.value_or(sc.goal_weights());
  const SolveResult r = opt.solver == SolverKind::kDp
                            ? solve_tree_dp(sc, w)
                            : solve_brute_force(sc, w, opt.brute_guard);
  std::cout << to_table(make_report(sc, r));
  return 0;
}

int cmd_evaluate(const Args& a) {
  const Scenario sc = load_scenario(a.file);
  const auto weights = parse_weights(a.weights);
  const auto assign = parse_pairs(a.assign, "--assign");
  if (machine_output(a.out)) {
    std::cout << render(evaluate_document(sc, assign, weights));
    return 0;
  }
  const Assignment asg = sc.make_assignment(assign);
  const Evaluation ev = evaluate_assignment(sc, asg);
  if (!ev.feasible()) throw InfeasibleAssignment(ev.infeasibility());
  std::cout << to_table(make_report(
      sc, asg, weights.value_or(sc.goal_weights()), "evaluate"));
  return 0;
}

int cmd_goals(const Args& a) {
  const Scenario sc = load_scenario(a.file);
  const auto optima = per_goal_optima(sc, brute_guard_from_env());
  if (machine_output(a.out)) {
    std::cout << render(goals_report_json(sc, optima));
  } else {
    std::cout << goals_report_table(sc, optima);
  }
  return 0;
}

int cmd_pareto(const Args& a) {
  const Scenario sc = load_scenario(a.file);
  const ParetoSet set = pareto_frontier(sc, brute_guard_from_env());
  if (machine_output(a.out)) {
    std::cout << render(pareto_report_json(sc, set));
  } else {
    std::cout << pareto_report_table(sc, set);
  }
  return 0;
}

int cmd_gen(const Args& a) {
  GeneratorOptions opt;
  opt.skills = !a.no_skills;
  const Scenario sc =
      generate_instance(a.tasks, a.sites, a.seed, parse_shape(a.shape), opt);
  std::cout << serialize_scenario(sc);
  return 0;
}

void print_sweep(const std::vector<BenchPoint>& pts, bool over_sites) {
  std::cout << std::setw(8) << (over_sites ? "n" : "m") << std::setw(16)
            << "seconds" << '\n';
  for (const auto& p : pts) {
    std::cout << std::setw(8) << (over_sites ? p.sites : p.tasks)
              << std::setw(16) << std::scientific << std::setprecision(4)
              << p.seconds << std::defaultfloat << '\n';
  }
  std::cout << "log-log slope: " << std::fixed << std::setprecision(3)
            << loglog_slope(pts, over_sites) << std::defaultfloat << '\n';
}

int cmd_bench(const Args& a) {
  if (!a.sites_sweep && !a.tasks_sweep) {
    throw UsageError("bench needs --sites-sweep and/or --tasks-sweep");
  }
  BenchConfig cfg;
  cfg.seed = a.seed;
  cfg.min_batch_seconds = a.min_batch;
  if (a.sites_sweep) {
    const std::size_t m = a.tasks ? a.tasks : 64;
    std::cout << "solve_tree_dp on chains, m = " << m << '\n';
    print_sweep(sweep_sites(m, {10, 20, 40, 80, 160}, cfg), true);
  }
  if (a.tasks_sweep) {
    const std::size_t n = a.sites ? a.sites : 32;
    std::cout << "solve_tree_dp on chains, n = " << n << '\n';
    print_sweep(sweep_tasks({16, 32, 64, 128, 256}, n, cfg), false);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-criteria task-to-site assignment planner"};
  app.require_subcommand(1);
  Args a;

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", a.file, "Scenario file")->required();
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", a.out, "Output format")
        ->check(CLI::IsMember({"table", "machine"}));
  };
  auto add_weights = [&](CLI::App* sub) {
    sub->add_option("--weights", a.weights,
                    "Goal weights name=value; replaces the file's weights");
  };

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  add_file(validate);

  auto* solve = app.add_subcommand("solve", "Find an optimal assignment");
  add_file(solve);
  solve->add_option("--solver", a.solver, "dp (tree instances) or brute")
      ->check(CLI::IsMember({"dp", "brute"}));
  add_weights(solve);
  add_out(solve);

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a given assignment");
  add_file(evaluate);
  evaluate->add_option("--assign", a.assign, "task=site, one per task")
      ->required();
  add_weights(evaluate);
  add_out(evaluate);

  auto* goals = app.add_subcommand("goals", "Optimize each goal separately");
  add_file(goals);
  add_out(goals);

  auto* pareto = app.add_subcommand("pareto", "Enumerate the Pareto frontier");
  add_file(pareto);
  add_out(pareto);

  auto* gen = app.add_subcommand("gen", "Generate a random scenario");
  gen->add_option("--tasks", a.tasks, "Number of tasks")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--sites", a.sites, "Number of sites")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", a.seed, "Random seed");
  gen->add_option("--shape", a.shape, "Task graph shape")
      ->check(CLI::IsMember({"chain", "random-tree"}));
  gen->add_flag("--no-skills", a.no_skills, "Omit skill requirements");

  auto* bench = app.add_subcommand("bench", "Time the tree DP on chains");
  bench->add_flag("--sites-sweep", a.sites_sweep,
                  "n in {10..160} at fixed m (default 64)");
  bench->add_flag("--tasks-sweep", a.tasks_sweep,
                  "m in {16..256} at fixed n (default 32)");
  bench->add_option("--tasks", a.tasks, "Fixed m for the sites sweep");
  bench->add_option("--sites", a.sites, "Fixed n for the tasks sweep");
  bench->add_option("--seed", a.seed, "Instance seed");
  bench->add_option("--min-batch", a.min_batch,
                    "Seconds each timing batch runs at least");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(a);
    if (*solve) return cmd_solve(a);
    if (*evaluate) return cmd_evaluate(a);
    if (*goals) return cmd_goals(a);
    if (*pareto) return cmd_pareto(a);
    if (*gen) return cmd_gen(a);
    if (*bench) return cmd_bench(a);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SolverError& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitSolver;
  } catch (const InfeasibleAssignment& e) {
    std::cerr << "error (infeasible): " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
