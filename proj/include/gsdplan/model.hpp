#pragma once

// Domain model for distributed task-to-site planning.
//
// A Scenario is built once from raw ScenarioData by validate_scenario() and is
// immutable afterwards. Besides the named entities it carries dense,
// index-based tables (execution costs, skill gaps, site relations) so the
// solvers never touch strings in their inner loops.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gsdplan {

/// Ordinal proficiency in [0, 10]; 0 means "none".
class SkillLevel {
 public:
  static constexpr int kMin = 0;
  static constexpr int kMax = 10;

  constexpr SkillLevel() = default;
  /// Throws std::out_of_range outside [kMin, kMax].
  explicit SkillLevel(int value);

  constexpr int value() const { return value_; }
  friend constexpr auto operator<=>(SkillLevel, SkillLevel) = default;

 private:
  int value_ = 0;
};

using SkillMap = std::map<std::string, SkillLevel>;
using AttributeMap = std::map<std::string, double>;

struct Task {
  std::string id;
  double effort = 0.0;  // person-hours, > 0
  SkillMap required_skills;
  std::optional<std::string> pinned_site;
  std::set<std::string> forbidden_sites;
  // Calibrated execution cost at a given site, replacing effort * hourly_rate
  // there. The skill-gap multiplier and constraints still apply.
  std::map<std::string, double> cost_overrides;
  AttributeMap attributes;

  friend bool operator==(const Task&, const Task&) = default;
};

struct Site {
  std::string id;
  double hourly_rate = 0.0;
  std::optional<double> capacity;  // person-hours; nullopt = unbounded
  SkillMap skills;
  AttributeMap attributes;

  friend bool operator==(const Site&, const Site&) = default;
};

struct Edge {
  std::string from;
  std::string to;
  double volume = 0.0;  // d_ij

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected dependency graph over task ids.
struct TaskGraph {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::optional<std::string> root;

  friend bool operator==(const TaskGraph&, const TaskGraph&) = default;
};

struct SiteRelation {
  std::string a;
  std::string b;
  double cost = 0.0;  // s_ab, per unit of volume

  friend bool operator==(const SiteRelation&, const SiteRelation&) = default;
};

enum class CapacityMode { kSoft, kHard };

struct CostModel {
  double skill_gap_penalty = 1.5;        // gamma, > 1
  std::optional<int> hard_skill_floor;   // gap at which a pair is infeasible
  CapacityMode capacity_mode = CapacityMode::kSoft;

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

enum class Goal : std::size_t {
  kTotalCost = 0,
  kCrossSiteVolume = 1,
  kSkillRisk = 2,
  kLoadImbalance = 3,
};

inline constexpr std::size_t kGoalCount = 4;
inline constexpr std::array<Goal, kGoalCount> kAllGoals = {
    Goal::kTotalCost, Goal::kCrossSiteVolume, Goal::kSkillRisk,
    Goal::kLoadImbalance};

std::string_view goal_name(Goal goal);
std::optional<Goal> parse_goal(std::string_view name);

/// Node + edge decomposable, i.e. optimizable by the tree DP.
constexpr bool is_separable(Goal goal) { return goal != Goal::kLoadImbalance; }

/// Multi-objective evaluation result. Ordering is lexicographic by component.
struct GoalVector {
  std::array<double, kGoalCount> values{};

  double& operator[](Goal g) { return values[static_cast<std::size_t>(g)]; }
  double operator[](Goal g) const {
    return values[static_cast<std::size_t>(g)];
  }
  double total_cost() const { return (*this)[Goal::kTotalCost]; }
  double cross_site_volume() const { return (*this)[Goal::kCrossSiteVolume]; }
  double skill_risk() const { return (*this)[Goal::kSkillRisk]; }
  double load_imbalance() const { return (*this)[Goal::kLoadImbalance]; }

  friend auto operator<=>(const GoalVector&, const GoalVector&) = default;
};

/// True when `a` is no worse than `b` everywhere and strictly better once.
bool dominates(const GoalVector& a, const GoalVector& b);

class GoalWeights {
 public:
  /// Defaults to {total_cost: 1}.
  GoalWeights();
  /// Throws ValidationError on unknown names, negative or non-finite weights,
  /// or when no weight is positive.
  static GoalWeights from_map(const std::map<std::string, double>& named);
  static GoalWeights unit(Goal goal);

  double operator[](Goal g) const { return w_[static_cast<std::size_t>(g)]; }
  bool is_separable() const { return (*this)[Goal::kLoadImbalance] == 0.0; }
  /// Only the components with a nonzero weight.
  std::map<std::string, double> to_map() const;

  friend bool operator==(const GoalWeights&, const GoalWeights&) = default;

 private:
  std::array<double, kGoalCount> w_{};
};

/// Weighted sum over raw component values.
double scalarize(const GoalVector& goals, const GoalWeights& weights);

/// One violated invariant, naming the entity and field at fault.
struct Issue {
  std::string entity;
  std::string field;
  std::string message;

  friend bool operator==(const Issue&, const Issue&) = default;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Issue> issues);
  const std::vector<Issue>& issues() const { return issues_; }

 private:
  std::vector<Issue> issues_;
};

/// Raw, unvalidated scenario content; also the serialization model.
struct ScenarioData {
  std::vector<Task> tasks;
  std::vector<Site> sites;
  std::vector<Edge> edges;
  std::optional<std::string> root;
  // Either pairwise entries or a full matrix in site declaration order.
  std::vector<SiteRelation> relation_entries;
  std::optional<std::vector<std::vector<double>>> relation_matrix;
  CostModel cost_model;
  std::map<std::string, double> goal_weights{{"total_cost", 1.0}};
};

/// Total mapping task -> site, as site indices in task declaration order.
struct Assignment {
  std::vector<std::size_t> site_of;

  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

/// Dense row-major m x n table.
template <typename T>
class Table {
 public:
  Table() = default;
  Table(std::size_t rows, std::size_t cols, T fill)
      : cols_(cols), data_(rows * cols, fill) {}

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::size_t cols() const { return cols_; }

  friend bool operator==(const Table&, const Table&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Edge with resolved task indices.
struct IndexedEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double volume = 0.0;
};

class Scenario {
 public:
  std::size_t task_count() const { return data_.tasks.size(); }
  std::size_t site_count() const { return data_.sites.size(); }

  const std::vector<Task>& tasks() const { return data_.tasks; }
  const std::vector<Site>& sites() const { return data_.sites; }
  const std::vector<Edge>& edges() const { return data_.edges; }
  const std::vector<IndexedEdge>& indexed_edges() const { return iedges_; }
  const std::optional<std::string>& root() const { return data_.root; }
  const CostModel& cost_model() const { return data_.cost_model; }
  const GoalWeights& goal_weights() const { return weights_; }
  const ScenarioData& data() const { return data_; }

  std::optional<std::size_t> task_index(std::string_view id) const;
  std::optional<std::size_t> site_index(std::string_view id) const;

  /// s_pq.
  double relation(std::size_t p, std::size_t q) const { return s_(p, q); }
  /// e_ip; nullopt when the pair is infeasible.
  std::optional<double> exec_cost(std::size_t task, std::size_t site) const;
  /// Sum of unmet skill levels of `task` at `site`.
  double skill_gap(std::size_t task, std::size_t site) const {
    return gap_(task, site);
  }
  /// Site indices where the task may run, ascending.
  const std::vector<std::size_t>& feasible_sites(std::size_t task) const {
    return feasible_[task];
  }

  TaskGraph task_graph() const;

  /// Builds an Assignment from task id -> site id. Throws ValidationError
  /// ("assignment not total", unknown ids).
  Assignment make_assignment(const std::map<std::string, std::string>& m) const;
  std::map<std::string, std::string> named(const Assignment& a) const;

  /// Same entities, relations, cost model and weights.
  friend bool operator==(const Scenario& x, const Scenario& y);

 private:
  friend Scenario validate_scenario(ScenarioData data);
  Scenario() = default;

  ScenarioData data_;
  GoalWeights weights_;
  std::map<std::string, std::size_t, std::less<>> task_idx_;
  std::map<std::string, std::size_t, std::less<>> site_idx_;
  std::vector<IndexedEdge> iedges_;
  Table<double> s_;
  Table<double> exec_;       // NaN where infeasible
  Table<double> gap_;
  std::vector<std::vector<std::size_t>> feasible_;
};

/// Checks every invariant and reports all violations at once by throwing
/// ValidationError.
Scenario validate_scenario(ScenarioData data);

/// e_ip = base * gamma^(sum of gaps), base = effort * rate unless overridden.
/// nullopt when the site is forbidden, off the pin, or past the skill floor.
std::optional<double> execution_cost(const Task& task, const Site& site,
                                     const CostModel& cost_model);

/// S(d, s) = d * s.
constexpr double transmission_cost(double volume, double unit_cost) {
  return volume * unit_cost;
}

struct Infeasibility {
  std::string reason;
  std::string task;  // empty when not task-specific
  std::string site;
};

/// Per-term costs behind a GoalVector, in the order they were summed.
struct CostBreakdown {
  std::vector<double> execution;      // per task
  std::vector<double> transmission;   // per edge
  std::vector<double> site_load;      // assigned effort per site
};

/// GoalVector or the reason the assignment is infeasible.
class Evaluation {
 public:
  Evaluation(GoalVector goals, CostBreakdown breakdown)
      : goals_(goals), breakdown_(std::move(breakdown)) {}
  explicit Evaluation(Infeasibility why) : why_(std::move(why)) {}

  bool feasible() const { return !why_.has_value(); }
  /// Throws std::logic_error when infeasible.
  const GoalVector& goals() const;
  const CostBreakdown& breakdown() const;
  const Infeasibility& infeasibility() const;

 private:
  GoalVector goals_{};
  CostBreakdown breakdown_;
  std::optional<Infeasibility> why_;
};

/// f(tasks, sites, mapping) -> goal vector. Pure.
Evaluation evaluate_assignment(const Scenario& scenario,
                               const Assignment& assignment);

/// Allocation-free evaluation for enumeration loops. Same arithmetic as
/// evaluate_assignment; nullopt when infeasible.
class FastEvaluator {
 public:
  explicit FastEvaluator(const Scenario& scenario);
  std::optional<GoalVector> operator()(const Assignment& assignment);

 private:
  const Scenario* scenario_;
  std::vector<double> load_;
};

struct Phase {
  std::string id;  // defaults to T<k> when empty
  double effort = 0.0;
  SkillMap required_skills;
};

struct ChainModel {
  std::vector<Task> tasks;
  TaskGraph graph;
};

/// Sequential phases as a path T1-T2-...-Tm rooted at the first phase.
/// `volumes[k]` links phase k and k+1. Throws std::invalid_argument on an
/// empty phase list or a volume count other than phases - 1.
ChainModel chain_scenario(const std::vector<Phase>& phases,
                          const std::vector<double>& volumes);

}  // namespace gsdplan
