#include "gsdplan/api.hpp"

#include "gsdplan/report.hpp"

namespace gsdplan {

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "dp") return SolverKind::kDp;
  if (name == "brute") return SolverKind::kBrute;
  throw std::invalid_argument("unknown solver " + std::string(name) +
                              " (expected dp or brute)");
}

SolveMode parse_solve_mode(std::string_view name) {
  if (name == "single") return SolveMode::kSingle;
  if (name == "goals") return SolveMode::kGoals;
  if (name == "pareto") return SolveMode::kPareto;
  throw std::invalid_argument("unknown mode " + std::string(name) +
                              " (expected single, goals or pareto)");
}

nlohmann::ordered_json solve_document(const Scenario& sc,
                                      const SolveOptions& options) {
  switch (options.mode) {
    case SolveMode::kGoals:
      return goals_report_json(sc, per_goal_optima(sc, options.brute_guard));
    case SolveMode::kPareto:
      return pareto_report_json(sc, pareto_frontier(sc, options.brute_guard));
    case SolveMode::kSingle:
      break;
  }
  const GoalWeights weights = options.weights.value_or(sc.goal_weights());
  const SolveResult result =
      options.solver == SolverKind::kDp
          ? solve_tree_dp(sc, weights)
          : solve_brute_force(sc, weights, options.brute_guard);
  return to_json(make_report(sc, result));
}

nlohmann::ordered_json evaluate_document(
    const Scenario& sc, const std::map<std::string, std::string>& assign,
    const std::optional<GoalWeights>& weights) {
  const Assignment a = sc.make_assignment(assign);
  const Evaluation ev = evaluate_assignment(sc, a);
  if (!ev.feasible()) throw InfeasibleAssignment(ev.infeasibility());
  return to_json(
      make_report(sc, a, weights.value_or(sc.goal_weights()), "evaluate"));
}

std::string render(const nlohmann::ordered_json& doc) {
  return doc.dump(2) + "\n";
}

}  // namespace gsdplan
