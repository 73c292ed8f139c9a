#pragma once

// Transport-independent request operations shared by the CLI and the HTTP
// service, so both emit identical documents for identical inputs.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "gsdplan/model.hpp"
#include "gsdplan/solver.hpp"

namespace gsdplan {

enum class SolverKind { kDp, kBrute };
enum class SolveMode { kSingle, kGoals, kPareto };

/// Throws std::invalid_argument on unknown names.
SolverKind parse_solver_kind(std::string_view name);
SolveMode parse_solve_mode(std::string_view name);

struct SolveOptions {
  SolverKind solver = SolverKind::kDp;
  SolveMode mode = SolveMode::kSingle;
  // Replaces the scenario's weights entirely when set.
  std::optional<GoalWeights> weights;
  std::uint64_t brute_guard = kDefaultBruteGuard;
};

/// Report, goals or frontier document. Throws SolverError.
nlohmann::ordered_json solve_document(const Scenario& scenario,
                                      const SolveOptions& options);

/// Thrown when an explicitly given assignment is infeasible.
class InfeasibleAssignment : public std::runtime_error {
 public:
  explicit InfeasibleAssignment(Infeasibility why)
      : std::runtime_error("infeasible assignment: " + why.reason),
        why_(std::move(why)) {}
  const Infeasibility& why() const { return why_; }

 private:
  Infeasibility why_;
};

/// Report for a caller-supplied assignment. Throws ValidationError when the
/// assignment is not total, InfeasibleAssignment when it is infeasible.
nlohmann::ordered_json evaluate_document(
    const Scenario& scenario, const std::map<std::string, std::string>& assign,
    const std::optional<GoalWeights>& weights);

/// Canonical text of a machine document.
std::string render(const nlohmann::ordered_json& doc);

}  // namespace gsdplan
