#pragma once

// Human tables and machine documents for solver output.
//
// Machine documents are byte-deterministic: they carry no timing data. Wall
// time appears only in the human table.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsdplan/model.hpp"
#include "gsdplan/solver.hpp"

namespace gsdplan {

struct Report {
  struct Row {
    std::string task;
    std::string site;
    double execution_cost = 0.0;
  };
  struct EdgeRow {
    std::string from;
    std::string to;
    std::string from_site;
    std::string to_site;
    double volume = 0.0;
    double cost = 0.0;
  };

  std::string solver;  // "dp", "brute" or "evaluate"
  std::vector<Row> assignment;
  std::vector<EdgeRow> edges;
  GoalVector goals;
  GoalWeights weights;
  double objective = 0.0;
  std::optional<SolverStats> stats;
};

/// Throws std::invalid_argument when the assignment is infeasible.
Report make_report(const Scenario& scenario, const Assignment& assignment,
                   const GoalWeights& weights, std::string solver,
                   std::optional<SolverStats> stats = std::nullopt);
Report make_report(const Scenario& scenario, const SolveResult& result);

nlohmann::ordered_json goals_to_json(const GoalVector& goals);
nlohmann::ordered_json to_json(const Report& report);
std::string to_table(const Report& report);

nlohmann::ordered_json goals_report_json(const Scenario& scenario,
                                         const std::vector<GoalOptimum>& optima);
std::string goals_report_table(const Scenario& scenario,
                               const std::vector<GoalOptimum>& optima);

nlohmann::ordered_json pareto_report_json(const Scenario& scenario,
                                          const ParetoSet& set);
std::string pareto_report_table(const Scenario& scenario, const ParetoSet& set);

}  // namespace gsdplan
