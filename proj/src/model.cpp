#include "gsdplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace gsdplan {

namespace {

constexpr std::array<std::string_view, kGoalCount> kGoalNames = {
    "total_cost", "cross_site_volume", "skill_risk", "load_imbalance"};

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

std::string fmt_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct SkillGap {
  int total = 0;
  int largest = 0;
};

SkillGap skill_gap_of(const Task& task, const Site& site) {
  SkillGap gap;
  for (const auto& [name, required] : task.required_skills) {
    int available = 0;
    if (auto it = site.skills.find(name); it != site.skills.end()) {
      available = it->second.value();
    }
    const int g = std::max(0, required.value() - available);
    gap.total += g;
    gap.largest = std::max(gap.largest, g);
  }
  return gap;
}

// Empty when the pair is feasible.
std::string infeasible_reason(const Task& task, const Site& site,
                              const CostModel& cm) {
  if (task.forbidden_sites.contains(site.id)) {
    return "task " + task.id + " is forbidden at site " + site.id;
  }
  if (task.pinned_site && *task.pinned_site != site.id) {
    return "task " + task.id + " is pinned to site " + *task.pinned_site;
  }
  if (site.capacity && *site.capacity == 0.0) {
    return "site " + site.id + " has zero capacity";
  }
  if (cm.hard_skill_floor) {
    if (skill_gap_of(task, site).largest >= *cm.hard_skill_floor) {
      return "task " + task.id + " has a skill gap at site " + site.id +
             " at or above the hard floor";
    }
  }
  return {};
}

// Shared by evaluate_assignment and FastEvaluator so both produce
// bit-identical sums. `sink` sees every term in summation order.
template <typename Sink>
std::optional<GoalVector> evaluate_core(const Scenario& sc,
                                        const Assignment& a,
                                        std::vector<double>& load,
                                        Infeasibility* why, Sink&& sink) {
  const std::size_t m = sc.task_count();
  load.assign(sc.site_count(), 0.0);

  double total = 0.0;
  double risk = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t p = a.site_of[i];
    const auto e = sc.exec_cost(i, p);
    if (!e) {
      if (why) {
        *why = {infeasible_reason(sc.tasks()[i], sc.sites()[p],
                                  sc.cost_model()),
                sc.tasks()[i].id, sc.sites()[p].id};
      }
      return std::nullopt;
    }
    sink.execution(*e);
    total += *e;
    risk += sc.skill_gap(i, p);
    load[p] += sc.tasks()[i].effort;
  }

  double cross = 0.0;
  for (const auto& edge : sc.indexed_edges()) {
    const std::size_t p = a.site_of[edge.a];
    const std::size_t q = a.site_of[edge.b];
    const double c = transmission_cost(edge.volume, sc.relation(p, q));
    sink.transmission(c);
    total += c;
    if (p != q) cross += edge.volume;
  }

  double imbalance = 0.0;
  for (std::size_t p = 0; p < sc.site_count(); ++p) {
    const auto& cap = sc.sites()[p].capacity;
    if (!cap) continue;
    if (sc.cost_model().capacity_mode == CapacityMode::kHard && load[p] > *cap) {
      if (why) {
        *why = {"capacity exceeded at site " + sc.sites()[p].id + " (load " +
                    fmt_number(load[p]) + " > capacity " + fmt_number(*cap) +
                    ")",
                "", sc.sites()[p].id};
      }
      return std::nullopt;
    }
    // Zero-capacity sites never carry load; see infeasible_reason.
    if (*cap > 0.0) imbalance = std::max(imbalance, load[p] / *cap);
  }

  GoalVector g;
  g[Goal::kTotalCost] = total;
  g[Goal::kCrossSiteVolume] = cross;
  g[Goal::kSkillRisk] = risk;
  g[Goal::kLoadImbalance] = imbalance;
  return g;
}

struct NullSink {
  void execution(double) {}
  void transmission(double) {}
};

struct RecordingSink {
  CostBreakdown* out;
  void execution(double v) { out->execution.push_back(v); }
  void transmission(double v) { out->transmission.push_back(v); }
};

}  // namespace

SkillLevel::SkillLevel(int value) : value_(value) {
  if (value < kMin || value > kMax) {
    throw std::out_of_range("skill level " + std::to_string(value) +
                            " outside [0, 10]");
  }
}

std::string_view goal_name(Goal goal) {
  return kGoalNames[static_cast<std::size_t>(goal)];
}

std::optional<Goal> parse_goal(std::string_view name) {
  for (std::size_t k = 0; k < kGoalCount; ++k) {
    if (kGoalNames[k] == name) return static_cast<Goal>(k);
  }
  return std::nullopt;
}

bool dominates(const GoalVector& a, const GoalVector& b) {
  bool strict = false;
  for (std::size_t k = 0; k < kGoalCount; ++k) {
    if (a.values[k] > b.values[k]) return false;
    if (a.values[k] < b.values[k]) strict = true;
  }
  return strict;
}

GoalWeights::GoalWeights() { w_[0] = 1.0; }

GoalWeights GoalWeights::from_map(const std::map<std::string, double>& named) {
  std::vector<Issue> issues;
  GoalWeights out;
  out.w_.fill(0.0);
  bool any_positive = false;
  for (const auto& [name, value] : named) {
    const auto goal = parse_goal(name);
    if (!goal) {
      issues.push_back({"goal_weights", name, "unknown goal component " + name});
      continue;
    }
    if (!finite_nonneg(value)) {
      issues.push_back({"goal_weights", name,
                        "weight for " + name + " must be finite and >= 0"});
      continue;
    }
    out.w_[static_cast<std::size_t>(*goal)] = value;
    any_positive = any_positive || value > 0.0;
  }
  if (issues.empty() && !any_positive) {
    issues.push_back(
        {"goal_weights", "", "at least one goal weight must be positive"});
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return out;
}

GoalWeights GoalWeights::unit(Goal goal) {
  GoalWeights out;
  out.w_.fill(0.0);
  out.w_[static_cast<std::size_t>(goal)] = 1.0;
  return out;
}

std::map<std::string, double> GoalWeights::to_map() const {
  std::map<std::string, double> out;
  for (Goal g : kAllGoals) {
    if ((*this)[g] != 0.0) out.emplace(goal_name(g), (*this)[g]);
  }
  return out;
}

double scalarize(const GoalVector& goals, const GoalWeights& weights) {
  double s = 0.0;
  for (Goal g : kAllGoals) s += weights[g] * goals[g];
  return s;
}

namespace {

std::string join_issues(const std::vector<Issue>& issues) {
  std::string msg = "invalid scenario:";
  for (const auto& i : issues) msg += "\n  " + i.message;
  return msg;
}

}  // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::optional<std::size_t> Scenario::task_index(std::string_view id) const {
  if (auto it = task_idx_.find(id); it != task_idx_.end()) return it->second;
  return std::nullopt;
}

std::optional<std::size_t> Scenario::site_index(std::string_view id) const {
  if (auto it = site_idx_.find(id); it != site_idx_.end()) return it->second;
  return std::nullopt;
}

std::optional<double> Scenario::exec_cost(std::size_t task,
                                          std::size_t site) const {
  const double e = exec_(task, site);
  if (std::isnan(e)) return std::nullopt;
  return e;
}

TaskGraph Scenario::task_graph() const {
  TaskGraph g;
  for (const auto& t : data_.tasks) g.nodes.push_back(t.id);
  g.edges = data_.edges;
  g.root = data_.root;
  return g;
}

Assignment Scenario::make_assignment(
    const std::map<std::string, std::string>& m) const {
  std::vector<Issue> issues;
  constexpr auto kUnset = std::numeric_limits<std::size_t>::max();
  Assignment a{std::vector<std::size_t>(task_count(), kUnset)};
  for (const auto& [task, site] : m) {
    const auto ti = task_index(task);
    const auto si = site_index(site);
    if (!ti) issues.push_back({"assignment", task, "unknown task " + task});
    if (!si) issues.push_back({"assignment", task, "unknown site " + site});
    if (ti && si) a.site_of[*ti] = *si;
  }
  std::string missing;
  for (std::size_t i = 0; i < task_count(); ++i) {
    if (a.site_of[i] == kUnset && task_index(data_.tasks[i].id)) {
      missing += (missing.empty() ? "" : ", ") + data_.tasks[i].id;
    }
  }
  if (!missing.empty()) {
    issues.push_back(
        {"assignment", "", "assignment not total: missing " + missing});
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return a;
}

std::map<std::string, std::string> Scenario::named(const Assignment& a) const {
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < a.site_of.size(); ++i) {
    out.emplace(data_.tasks[i].id, data_.sites[a.site_of[i]].id);
  }
  return out;
}

bool operator==(const Scenario& x, const Scenario& y) {
  return x.data_.tasks == y.data_.tasks && x.data_.sites == y.data_.sites &&
         x.data_.edges == y.data_.edges && x.data_.root == y.data_.root &&
         x.data_.cost_model == y.data_.cost_model && x.s_ == y.s_ &&
         x.weights_ == y.weights_;
}

std::optional<double> execution_cost(const Task& task, const Site& site,
                                     const CostModel& cost_model) {
  if (!infeasible_reason(task, site, cost_model).empty()) return std::nullopt;
  double base = task.effort * site.hourly_rate;
  if (auto it = task.cost_overrides.find(site.id);
      it != task.cost_overrides.end()) {
    base = it->second;
  }
  const SkillGap gap = skill_gap_of(task, site);
  if (gap.total == 0) return base;
  return base * std::pow(cost_model.skill_gap_penalty, gap.total);
}

Scenario validate_scenario(ScenarioData data) {
  std::vector<Issue> issues;
  auto add = [&](std::string entity, std::string field, std::string msg) {
    issues.push_back({std::move(entity), std::move(field), std::move(msg)});
  };

  Scenario sc;
  const std::size_t m = data.tasks.size();
  const std::size_t n = data.sites.size();
  if (m == 0) add("scenario", "tasks", "scenario needs at least one task");
  if (n == 0) add("scenario", "sites", "scenario needs at least one site");

  for (std::size_t p = 0; p < n; ++p) {
    const Site& s = data.sites[p];
    if (s.id.empty()) add("site #" + std::to_string(p), "id", "empty site id");
    if (!sc.site_idx_.emplace(s.id, p).second) {
      add("site " + s.id, "id", "duplicate site id " + s.id);
    }
    if (!finite_nonneg(s.hourly_rate)) {
      add("site " + s.id, "hourly_rate",
          "site " + s.id + ": hourly_rate must be finite and >= 0");
    }
    if (s.capacity && !finite_nonneg(*s.capacity)) {
      add("site " + s.id, "capacity",
          "site " + s.id + ": capacity must be finite and >= 0");
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    const Task& t = data.tasks[i];
    const std::string ent = "task " + t.id;
    if (t.id.empty()) add("task #" + std::to_string(i), "id", "empty task id");
    if (!sc.task_idx_.emplace(t.id, i).second) {
      add(ent, "id", "duplicate task id " + t.id);
    }
    if (!(std::isfinite(t.effort) && t.effort > 0.0)) {
      add(ent, "effort", ent + ": effort must be finite and > 0");
    }
    if (t.pinned_site) {
      if (!sc.site_idx_.contains(*t.pinned_site)) {
        add(ent, "pinned_site", "unknown site " + *t.pinned_site);
      }
      if (t.forbidden_sites.contains(*t.pinned_site)) {
        add(ent, "pinned_site",
            ent + ": pinned_site " + *t.pinned_site +
                " is also listed in forbidden_sites");
      }
    }
    for (const auto& f : t.forbidden_sites) {
      if (!sc.site_idx_.contains(f)) {
        add(ent, "forbidden_sites", "unknown site " + f);
      }
    }
    for (const auto& [site, cost] : t.cost_overrides) {
      if (!sc.site_idx_.contains(site)) {
        add(ent, "cost_overrides", "unknown site " + site);
      }
      if (!finite_nonneg(cost)) {
        add(ent, "cost_overrides",
            ent + ": cost override at " + site + " must be finite and >= 0");
      }
    }
  }

  std::set<std::pair<std::size_t, std::size_t>> seen_pairs;
  for (const Edge& e : data.edges) {
    const std::string ent = "edge (" + e.from + "," + e.to + ")";
    auto a = sc.task_idx_.find(e.from);
    auto b = sc.task_idx_.find(e.to);
    if (a == sc.task_idx_.end()) add(ent, "from", "unknown task " + e.from);
    if (b == sc.task_idx_.end()) add(ent, "to", "unknown task " + e.to);
    if (!finite_nonneg(e.volume)) {
      add(ent, "volume", ent + ": volume must be finite and >= 0");
    }
    if (a == sc.task_idx_.end() || b == sc.task_idx_.end()) continue;
    if (a->second == b->second) {
      add(ent, "to", ent + ": self-loop");
      continue;
    }
    auto key = std::minmax(a->second, b->second);
    if (!seen_pairs.emplace(key.first, key.second).second) {
      add(ent, "to", ent + ": duplicate edge between the same tasks");
      continue;
    }
    sc.iedges_.push_back({a->second, b->second, e.volume});
  }

  if (data.root && !sc.task_idx_.contains(*data.root)) {
    add("task_graph", "root", "unknown task " + *data.root);
  }

  // Site relations: NaN marks "not given".
  const double unset = std::numeric_limits<double>::quiet_NaN();
  Table<double> s(n, n, unset);
  auto put = [&](std::size_t p, std::size_t q, double v) {
    const std::string& a = data.sites[p].id;
    const std::string& b = data.sites[q].id;
    const std::string ent = "site_relations (" + a + "," + b + ")";
    if (!finite_nonneg(v)) {
      add(ent, "cost", ent + ": cost must be finite and >= 0");
      return;
    }
    for (auto [x, y] : {std::pair{p, q}, std::pair{q, p}}) {
      double& cell = s(x, y);
      if (std::isnan(cell)) {
        cell = v;
      } else if (cell != v) {
        if (p != q) {
          const auto lo = std::min(p, q), hi = std::max(p, q);
          add("site_relations", "cost",
              "site_relations not symmetric at (" + data.sites[lo].id + "," +
                  data.sites[hi].id + ")");
        } else {
          add(ent, "cost", "conflicting entries for " + ent);
        }
        return;
      }
    }
  };
  if (data.relation_matrix) {
    const auto& mat = *data.relation_matrix;
    bool shape_ok = mat.size() == n;
    for (const auto& row : mat) shape_ok = shape_ok && row.size() == n;
    if (!shape_ok) {
      add("site_relations", "matrix",
          "site_relations matrix must be " + std::to_string(n) + "x" +
              std::to_string(n));
    } else {
      for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p; q < n; ++q) {
          if (mat[p][q] != mat[q][p]) {
            add("site_relations", "cost",
                "site_relations not symmetric at (" + data.sites[p].id + "," +
                    data.sites[q].id + ")");
            continue;
          }
          put(p, q, mat[p][q]);
        }
      }
    }
  }
  for (const auto& r : data.relation_entries) {
    auto a = sc.site_idx_.find(r.a);
    auto b = sc.site_idx_.find(r.b);
    if (a == sc.site_idx_.end()) add("site_relations", "a", "unknown site " + r.a);
    if (b == sc.site_idx_.end()) add("site_relations", "b", "unknown site " + r.b);
    if (a != sc.site_idx_.end() && b != sc.site_idx_.end()) {
      put(a->second, b->second, r.cost);
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (std::isnan(s(p, p))) s(p, p) = 0.0;
    for (std::size_t q = p + 1; q < n; ++q) {
      if (std::isnan(s(p, q))) {
        add("site_relations", "cost",
            "site_relations missing pair (" + data.sites[p].id + "," +
                data.sites[q].id + ")");
        s(p, q) = s(q, p) = 0.0;
      }
    }
  }

  const CostModel& cm = data.cost_model;
  if (!(std::isfinite(cm.skill_gap_penalty) && cm.skill_gap_penalty > 1.0)) {
    add("cost_model", "skill_gap_penalty", "skill_gap_penalty must be > 1");
  }
  if (cm.hard_skill_floor && *cm.hard_skill_floor < 1) {
    add("cost_model", "hard_skill_floor", "hard_skill_floor must be >= 1");
  }

  try {
    sc.weights_ = GoalWeights::from_map(data.goal_weights);
  } catch (const ValidationError& e) {
    issues.insert(issues.end(), e.issues().begin(), e.issues().end());
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));

  sc.s_ = std::move(s);
  sc.exec_ = Table<double>(m, n, unset);
  sc.gap_ = Table<double>(m, n, 0.0);
  sc.feasible_.assign(m, {});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      sc.gap_(i, p) = skill_gap_of(data.tasks[i], data.sites[p]).total;
      if (auto e = execution_cost(data.tasks[i], data.sites[p], cm)) {
        sc.exec_(i, p) = *e;
        sc.feasible_[i].push_back(p);
      }
    }
  }
  sc.data_ = std::move(data);
  return sc;
}

const GoalVector& Evaluation::goals() const {
  if (why_) throw std::logic_error("infeasible assignment: " + why_->reason);
  return goals_;
}

const CostBreakdown& Evaluation::breakdown() const {
  if (why_) throw std::logic_error("infeasible assignment: " + why_->reason);
  return breakdown_;
}

const Infeasibility& Evaluation::infeasibility() const {
  if (!why_) throw std::logic_error("assignment is feasible");
  return *why_;
}

Evaluation evaluate_assignment(const Scenario& scenario,
                               const Assignment& assignment) {
  if (assignment.site_of.size() != scenario.task_count()) {
    throw std::invalid_argument("assignment not total");
  }
  for (std::size_t p : assignment.site_of) {
    if (p >= scenario.site_count()) {
      throw std::invalid_argument("assignment references an unknown site");
    }
  }
  CostBreakdown breakdown;
  breakdown.execution.reserve(scenario.task_count());
  breakdown.transmission.reserve(scenario.indexed_edges().size());
  Infeasibility why;
  std::vector<double> load;
  auto goals = evaluate_core(scenario, assignment, load, &why,
                             RecordingSink{&breakdown});
  if (!goals) return Evaluation(std::move(why));
  breakdown.site_load = std::move(load);
  return Evaluation(*goals, std::move(breakdown));
}

FastEvaluator::FastEvaluator(const Scenario& scenario)
    : scenario_(&scenario), load_(scenario.site_count(), 0.0) {}

std::optional<GoalVector> FastEvaluator::operator()(
    const Assignment& assignment) {
  return evaluate_core(*scenario_, assignment, load_, nullptr, NullSink{});
}

ChainModel chain_scenario(const std::vector<Phase>& phases,
                          const std::vector<double>& volumes) {
  if (phases.empty()) throw std::invalid_argument("empty phase list");
  if (volumes.size() != phases.size() - 1) {
    throw std::invalid_argument("expected " +
                                std::to_string(phases.size() - 1) +
                                " volumes between consecutive phases, got " +
                                std::to_string(volumes.size()));
  }
  ChainModel out;
  for (std::size_t k = 0; k < phases.size(); ++k) {
    Task t;
    t.id = phases[k].id.empty() ? "T" + std::to_string(k + 1) : phases[k].id;
    t.effort = phases[k].effort;
    t.required_skills = phases[k].required_skills;
    out.graph.nodes.push_back(t.id);
    out.tasks.push_back(std::move(t));
  }
  for (std::size_t k = 0; k + 1 < phases.size(); ++k) {
    out.graph.edges.push_back(
        {out.tasks[k].id, out.tasks[k + 1].id, volumes[k]});
  }
  out.graph.root = out.tasks.front().id;
  return out;
}

}  // namespace gsdplan
