#include "gsdplan/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace gsdplan {

namespace {

using nlohmann::ordered_json;

ordered_json assignment_json(const Scenario& sc, const Assignment& a) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < a.site_of.size(); ++i) {
    out[sc.tasks()[i].id] = sc.sites()[a.site_of[i]].id;
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

void goals_lines(std::ostringstream& os, const GoalVector& g) {
  for (Goal goal : kAllGoals) {
    os << "  " << std::left << std::setw(20) << goal_name(goal) << num(g[goal])
       << '\n';
  }
}

}  // namespace

Report make_report(const Scenario& sc, const Assignment& a,
                   const GoalWeights& weights, std::string solver,
                   std::optional<SolverStats> stats) {
  const Evaluation ev = evaluate_assignment(sc, a);
  if (!ev.feasible()) {
    throw std::invalid_argument("infeasible assignment: " +
                                ev.infeasibility().reason);
  }
  Report r;
  r.solver = std::move(solver);
  r.goals = ev.goals();
  r.weights = weights;
  r.objective = scalarize(r.goals, weights);
  r.stats = stats;
  const CostBreakdown& b = ev.breakdown();
  for (std::size_t i = 0; i < sc.task_count(); ++i) {
    r.assignment.push_back(
        {sc.tasks()[i].id, sc.sites()[a.site_of[i]].id, b.execution[i]});
  }
  const auto& iedges = sc.indexed_edges();
  for (std::size_t k = 0; k < iedges.size(); ++k) {
    const auto& e = iedges[k];
    r.edges.push_back({sc.tasks()[e.a].id, sc.tasks()[e.b].id,
                       sc.sites()[a.site_of[e.a]].id,
                       sc.sites()[a.site_of[e.b]].id, e.volume,
                       b.transmission[k]});
  }
  return r;
}

Report make_report(const Scenario& sc, const SolveResult& result) {
  return make_report(sc, result.assignment, result.weights, result.solver,
                     result.stats);
}

ordered_json goals_to_json(const GoalVector& goals) {
  ordered_json out;
  for (Goal g : kAllGoals) out[std::string(goal_name(g))] = goals[g];
  return out;
}

ordered_json to_json(const Report& r) {
  ordered_json doc;
  doc["solver"] = r.solver;
  doc["objective"] = r.objective;
  ordered_json weights = ordered_json::object();
  for (const auto& [k, v] : r.weights.to_map()) weights[k] = v;
  doc["weights"] = std::move(weights);

  ordered_json assignment = ordered_json::object();
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.assignment) {
    assignment[row.task] = row.site;
    rows.push_back({{"task", row.task},
                    {"site", row.site},
                    {"execution_cost", row.execution_cost}});
  }
  doc["assignment"] = std::move(assignment);
  doc["tasks"] = std::move(rows);

  ordered_json edges = ordered_json::array();
  for (const auto& e : r.edges) {
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"from_site", e.from_site},
                     {"to_site", e.to_site},
                     {"volume", e.volume},
                     {"cost", e.cost}});
  }
  doc["edges"] = std::move(edges);
  doc["goals"] = goals_to_json(r.goals);
  if (r.stats) {
    doc["statistics"] = {{"dp_table_entries", r.stats->dp_table_entries},
                         {"relaxations", r.stats->relaxations},
                         {"candidates", r.stats->candidates},
                         {"feasible_candidates", r.stats->feasible_candidates}};
  }
  return doc;
}

std::string to_table(const Report& r) {
  std::ostringstream os;
  std::size_t wt = 4;
  std::size_t ws = 4;
  for (const auto& row : r.assignment) {
    wt = std::max(wt, row.task.size());
    ws = std::max(ws, row.site.size());
  }
  os << "solver: " << r.solver << "\n\n";
  os << std::left << std::setw(int(wt) + 2) << "task" << std::setw(int(ws) + 2)
     << "site"
     << "execution_cost\n";
  for (const auto& row : r.assignment) {
    os << std::left << std::setw(int(wt) + 2) << row.task
       << std::setw(int(ws) + 2) << row.site << num(row.execution_cost) << '\n';
  }
  if (!r.edges.empty()) {
    os << "\ncommunication\n";
    for (const auto& e : r.edges) {
      os << "  " << e.from << " (" << e.from_site << ") - " << e.to << " ("
         << e.to_site << ")  volume " << num(e.volume) << "  cost "
         << num(e.cost) << '\n';
    }
  }
  os << "\ngoals\n";
  goals_lines(os, r.goals);
  os << "\nobjective: " << num(r.objective) << '\n';
  if (r.stats) {
    os << "statistics: dp_table_entries=" << r.stats->dp_table_entries
       << " relaxations=" << r.stats->relaxations
       << " candidates=" << r.stats->candidates
       << " feasible=" << r.stats->feasible_candidates << " wall_time="
       << std::fixed << std::setprecision(3)
       << double(r.stats->wall_time.count()) / 1e6 << " ms\n";
  }
  return os.str();
}

ordered_json goals_report_json(const Scenario& sc,
                               const std::vector<GoalOptimum>& optima) {
  ordered_json list = ordered_json::array();
  for (const auto& o : optima) {
    ordered_json entry;
    entry["goal"] = std::string(goal_name(o.goal));
    entry["result"] = to_json(make_report(sc, o.result));
    list.push_back(std::move(entry));
  }
  return {{"goals", std::move(list)}};
}

std::string goals_report_table(const Scenario& sc,
                               const std::vector<GoalOptimum>& optima) {
  std::ostringstream os;
  os << std::left << std::setw(20) << "optimized goal";
  for (Goal g : kAllGoals) os << std::setw(20) << goal_name(g);
  os << "solver  assignment\n";
  for (const auto& o : optima) {
    os << std::setw(20) << goal_name(o.goal);
    for (Goal g : kAllGoals) os << std::setw(20) << num(o.result.goals[g]);
    os << std::setw(8) << o.result.solver;
    for (std::size_t i = 0; i < sc.task_count(); ++i) {
      os << (i ? " " : "") << sc.tasks()[i].id << "="
         << sc.sites()[o.result.assignment.site_of[i]].id;
    }
    os << '\n';
  }
  return os.str();
}

ordered_json pareto_report_json(const Scenario& sc, const ParetoSet& set) {
  ordered_json points = ordered_json::array();
  for (const auto& pt : set.points) {
    points.push_back({{"assignment", assignment_json(sc, pt.assignment)},
                      {"goals", goals_to_json(pt.goals)}});
  }
  ordered_json doc;
  doc["frontier"] = std::move(points);
  doc["statistics"] = {{"candidates", set.candidates},
                       {"feasible_candidates", set.feasible_candidates}};
  return doc;
}

std::string pareto_report_table(const Scenario& sc, const ParetoSet& set) {
  std::ostringstream os;
  os << set.points.size() << " non-dominated of " << set.feasible_candidates
     << " feasible assignments\n\n";
  os << std::left;
  for (Goal g : kAllGoals) os << std::setw(20) << goal_name(g);
  os << "assignment\n";
  for (const auto& pt : set.points) {
    for (Goal g : kAllGoals) os << std::setw(20) << num(pt.goals[g]);
    for (std::size_t i = 0; i < sc.task_count(); ++i) {
      os << (i ? " " : "") << sc.tasks()[i].id << "="
         << sc.sites()[pt.assignment.site_of[i]].id;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace gsdplan
