#pragma once

// Exact solvers over a validated Scenario.
//
// solve_tree_dp realizes the shortest-tree assignment over a layered
// assignment graph: one layer of (task, site) nodes per task, layer edges
// following the rooted task tree. Differences from the textbook layering:
//   * source edges carry e'(root, p) instead of 0, so the tree weight equals
//     the full objective including the root's execution cost;
//   * infeasible (task, site) pairs contribute no edges at all.

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsdplan/model.hpp"

namespace gsdplan {

enum class SolverErrc {
  kNotATree,
  kInfeasibleTask,
  kNonSeparable,
  kTooLarge,
  kNoFeasibleAssignment,
};

std::string_view to_string(SolverErrc code);

class SolverError : public std::runtime_error {
 public:
  SolverError(SolverErrc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  SolverErrc code() const { return code_; }

 private:
  SolverErrc code_;
};

/// Task tree oriented away from its root. Indices are task indices.
struct RootedTree {
  std::size_t root = 0;
  std::vector<std::optional<std::size_t>> parent;
  std::vector<std::size_t> child_count;
  std::vector<double> volume_to_parent;
  std::vector<std::size_t> preorder;  // parents before children

  std::vector<std::size_t> leaves() const;
};

/// Root is the declared root, else the lexicographically lowest task id.
/// Throws SolverError(kNotATree) when disconnected or |E| != |V| - 1.
RootedTree check_tree(const Scenario& scenario);

struct AssignmentGraph {
  enum class NodeKind { kSource, kLayer, kTerminal };

  struct Node {
    NodeKind kind = NodeKind::kSource;
    std::size_t task = 0;  // layer and terminal nodes
    std::size_t site = 0;  // layer nodes
  };

  struct Arc {
    std::size_t from = 0;
    std::size_t to = 0;
    double weight = 0.0;
  };

  std::size_t task_count = 0;
  std::size_t site_count = 0;
  std::vector<Node> nodes;  // [0] source, then m*n layer nodes, then terminals
  std::vector<Arc> arcs;

  static constexpr std::size_t source() { return 0; }
  std::size_t layer_node(std::size_t task, std::size_t site) const {
    return 1 + task * site_count + site;
  }
};

/// Weight-combined separable costs.
///   node(i, p)       = w_cost * e_ip + w_risk * gap_ip
///   edge(d, p, q)    = d * (w_cost * s_pq + w_volume * [p != q])
/// Throws SolverError(kNonSeparable) if the weights use load_imbalance.
class SeparableCosts {
 public:
  SeparableCosts(const Scenario& scenario, const GoalWeights& weights);

  /// nullopt for infeasible pairs.
  std::optional<double> node(std::size_t task, std::size_t site) const;
  double edge(double volume, std::size_t p, std::size_t q) const {
    return volume * unit_(p, q);
  }

 private:
  const Scenario* scenario_;
  double w_cost_;
  double w_risk_;
  Table<double> unit_;
};

AssignmentGraph build_assignment_graph(const Scenario& scenario,
                                       const GoalWeights& weights);

struct SolverStats {
  std::uint64_t dp_table_entries = 0;
  std::uint64_t relaxations = 0;
  std::uint64_t candidates = 0;           // brute force: assignments visited
  std::uint64_t feasible_candidates = 0;
  std::chrono::nanoseconds wall_time{0};
};

struct SolveResult {
  Assignment assignment;
  double objective = 0.0;  // scalarize(goals, weights)
  GoalVector goals;
  GoalWeights weights;
  std::string solver;  // "dp" or "brute"
  SolverStats stats;
};

SolveResult solve_tree_dp(const Scenario& scenario, const GoalWeights& weights);

inline constexpr std::uint64_t kDefaultBruteGuard = 10'000'000;

/// Guard from SOLVER_BRUTE_GUARD when set to a positive integer, else the
/// default.
std::uint64_t brute_guard_from_env();

/// n^m, saturating at UINT64_MAX.
std::uint64_t assignment_space_size(const Scenario& scenario);

/// Exhaustive search; any task graph, any weights. Ties go to the
/// lexicographically smallest assignment.
SolveResult solve_brute_force(const Scenario& scenario,
                              const GoalWeights& weights,
                              std::uint64_t guard = kDefaultBruteGuard);

struct GoalOptimum {
  Goal goal;
  SolveResult result;
};

/// Unit-weight optimum per goal component: DP when separable on a tree,
/// brute force otherwise.
std::vector<GoalOptimum> per_goal_optima(
    const Scenario& scenario, std::uint64_t guard = kDefaultBruteGuard);

struct ParetoPoint {
  Assignment assignment;
  GoalVector goals;
};

struct ParetoSet {
  std::vector<ParetoPoint> points;  // sorted by goal vector
  std::uint64_t candidates = 0;
  std::uint64_t feasible_candidates = 0;
};

/// Non-dominated feasible goal vectors, one representative (the
/// lexicographically smallest assignment) per distinct vector.
ParetoSet pareto_frontier(const Scenario& scenario,
                          std::uint64_t guard = kDefaultBruteGuard);

}  // namespace gsdplan
