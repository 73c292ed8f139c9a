#include "gsdplan/solver.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

namespace gsdplan {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();

bool has_hard_capacity(const Scenario& sc) {
  if (sc.cost_model().capacity_mode != CapacityMode::kHard) return false;
  return std::any_of(sc.sites().begin(), sc.sites().end(),
                     [](const Site& s) { return s.capacity.has_value(); });
}

void require_feasible_tasks(const Scenario& sc) {
  for (std::size_t i = 0; i < sc.task_count(); ++i) {
    if (sc.feasible_sites(i).empty()) {
      throw SolverError(SolverErrc::kInfeasibleTask,
                        "task " + sc.tasks()[i].id + " has no feasible site");
    }
  }
}

SolveResult finish(const Scenario& sc, Assignment a, const GoalWeights& w,
                   std::string solver, SolverStats stats, Clock::time_point t0) {
  const Evaluation ev = evaluate_assignment(sc, a);
  SolveResult r;
  r.goals = ev.goals();
  r.objective = scalarize(r.goals, w);
  r.assignment = std::move(a);
  r.weights = w;
  r.solver = std::move(solver);
  r.stats = stats;
  r.stats.wall_time =
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0);
  return r;
}

void check_guard(const Scenario& sc, std::uint64_t guard) {
  const std::uint64_t space = assignment_space_size(sc);
  if (space > guard) {
    const std::string size =
        space == std::numeric_limits<std::uint64_t>::max()
            ? std::string("more than 2^64")
            : std::to_string(space);
    throw SolverError(SolverErrc::kTooLarge,
                      "instance too large for brute force: n^m = " +
                          std::to_string(sc.site_count()) + "^" +
                          std::to_string(sc.task_count()) + " = " + size +
                          " exceeds the guard of " + std::to_string(guard));
  }
}

// Visits feasible-site combinations in lexicographic order of assignment.
template <typename Visit>
void enumerate(const Scenario& sc, Visit&& visit) {
  const std::size_t m = sc.task_count();
  std::vector<std::size_t> digit(m, 0);
  Assignment a{std::vector<std::size_t>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    if (sc.feasible_sites(i).empty()) return;
    a.site_of[i] = sc.feasible_sites(i)[0];
  }
  while (true) {
    visit(a);
    std::size_t i = m;
    while (i > 0) {
      --i;
      const auto& sites = sc.feasible_sites(i);
      if (++digit[i] < sites.size()) {
        a.site_of[i] = sites[digit[i]];
        break;
      }
      digit[i] = 0;
      a.site_of[i] = sites[0];
      if (i == 0) return;
    }
    if (m == 0) return;
  }
}

}  // namespace

std::string_view to_string(SolverErrc code) {
  switch (code) {
    case SolverErrc::kNotATree: return "not_a_tree";
    case SolverErrc::kInfeasibleTask: return "infeasible_task";
    case SolverErrc::kNonSeparable: return "non_separable";
    case SolverErrc::kTooLarge: return "too_large";
    case SolverErrc::kNoFeasibleAssignment: return "no_feasible_assignment";
  }
  return "unknown";
}

std::vector<std::size_t> RootedTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t v : preorder) {
    if (child_count[v] == 0) out.push_back(v);
  }
  return out;
}

RootedTree check_tree(const Scenario& sc) {
  const std::size_t m = sc.task_count();
  const auto& edges = sc.indexed_edges();
  constexpr const char* kHint = "; use the brute-force solver (--solver brute)";

  if (edges.size() + 1 < m) {
    throw SolverError(SolverErrc::kNotATree,
                      std::string("not a tree: disconnected") + kHint);
  }
  if (edges.size() + 1 > m) {
    throw SolverError(
        SolverErrc::kNotATree,
        std::string("not a tree: |E| ≠ |V|−1 (cycle detected)") + kHint);
  }

  RootedTree t;
  if (sc.root()) {
    t.root = *sc.task_index(*sc.root());
  } else {
    const auto& tasks = sc.tasks();
    t.root = static_cast<std::size_t>(
        std::min_element(tasks.begin(), tasks.end(),
                         [](const Task& a, const Task& b) { return a.id < b.id; }) -
        tasks.begin());
  }

  // Adjacency in compressed rows: neighbours of v sit in [start[v], start[v+1]).
  std::vector<std::size_t> start(m + 1, 0);
  for (const auto& e : edges) {
    ++start[e.a + 1];
    ++start[e.b + 1];
  }
  for (std::size_t v = 0; v < m; ++v) start[v + 1] += start[v];
  std::vector<std::pair<std::size_t, double>> adj(2 * edges.size());
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (const auto& e : edges) {
    adj[fill[e.a]++] = {e.b, e.volume};
    adj[fill[e.b]++] = {e.a, e.volume};
  }

  t.parent.assign(m, std::nullopt);
  t.child_count.assign(m, 0);
  t.volume_to_parent.assign(m, 0.0);
  t.preorder.reserve(m);
  std::vector<char> seen(m, 0);
  t.preorder.push_back(t.root);
  seen[t.root] = 1;
  // preorder doubles as the BFS queue.
  for (std::size_t head = 0; head < t.preorder.size(); ++head) {
    const std::size_t v = t.preorder[head];
    for (std::size_t k = start[v]; k < start[v + 1]; ++k) {
      const auto [to, volume] = adj[k];
      if (seen[to]) continue;
      seen[to] = 1;
      t.parent[to] = v;
      t.volume_to_parent[to] = volume;
      ++t.child_count[v];
      t.preorder.push_back(to);
    }
  }
  if (t.preorder.size() != m) {
    // |E| = |V| - 1 yet unreachable nodes: some component holds a cycle.
    throw SolverError(
        SolverErrc::kNotATree,
        std::string("not a tree: disconnected (cycle detected)") + kHint);
  }
  return t;
}

SeparableCosts::SeparableCosts(const Scenario& scenario,
                               const GoalWeights& weights)
    : scenario_(&scenario),
      w_cost_(weights[Goal::kTotalCost]),
      w_risk_(weights[Goal::kSkillRisk]) {
  if (!weights.is_separable()) {
    throw SolverError(SolverErrc::kNonSeparable,
                      "load_imbalance is not separable over tree edges; use "
                      "the brute-force solver (--solver brute)");
  }
  const std::size_t n = scenario.site_count();
  const double w_vol = weights[Goal::kCrossSiteVolume];
  unit_ = Table<double>(n, n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      unit_(p, q) = w_cost_ * scenario.relation(p, q) + (p != q ? w_vol : 0.0);
    }
  }
}

std::optional<double> SeparableCosts::node(std::size_t task,
                                           std::size_t site) const {
  const auto e = scenario_->exec_cost(task, site);
  if (!e) return std::nullopt;
  return w_cost_ * *e + w_risk_ * scenario_->skill_gap(task, site);
}

AssignmentGraph build_assignment_graph(const Scenario& sc,
                                       const GoalWeights& weights) {
  const SeparableCosts costs(sc, weights);
  const RootedTree tree = check_tree(sc);
  require_feasible_tasks(sc);

  const std::size_t m = sc.task_count();
  const std::size_t n = sc.site_count();
  AssignmentGraph g;
  g.task_count = m;
  g.site_count = n;
  g.nodes.push_back({AssignmentGraph::NodeKind::kSource, 0, 0});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      g.nodes.push_back({AssignmentGraph::NodeKind::kLayer, i, p});
    }
  }

  for (std::size_t p : sc.feasible_sites(tree.root)) {
    g.arcs.push_back({AssignmentGraph::source(), g.layer_node(tree.root, p),
                      *costs.node(tree.root, p)});
  }
  for (std::size_t j : tree.preorder) {
    if (!tree.parent[j]) continue;
    const std::size_t i = *tree.parent[j];
    const double d = tree.volume_to_parent[j];
    for (std::size_t p : sc.feasible_sites(i)) {
      for (std::size_t q : sc.feasible_sites(j)) {
        g.arcs.push_back({g.layer_node(i, p), g.layer_node(j, q),
                          *costs.node(j, q) + costs.edge(d, p, q)});
      }
    }
  }
  for (std::size_t leaf : tree.leaves()) {
    const std::size_t terminal = g.nodes.size();
    g.nodes.push_back({AssignmentGraph::NodeKind::kTerminal, leaf, 0});
    for (std::size_t p : sc.feasible_sites(leaf)) {
      g.arcs.push_back({g.layer_node(leaf, p), terminal, 0.0});
    }
  }
  return g;
}

SolveResult solve_tree_dp(const Scenario& sc, const GoalWeights& weights) {
  const auto t0 = Clock::now();
  const SeparableCosts costs(sc, weights);
  if (has_hard_capacity(sc)) {
    throw SolverError(SolverErrc::kNonSeparable,
                      "hard capacity limits are not separable over tree "
                      "edges; use the brute-force solver (--solver brute)");
  }
  const RootedTree tree = check_tree(sc);
  require_feasible_tasks(sc);

  const std::size_t m = sc.task_count();
  const std::size_t n = sc.site_count();
  SolverStats stats;
  stats.dp_table_entries = m * n;

  // best(i, p): cheapest cost of the subtree below task i given i sits at p.
  Table<double> best(m, n, 0.0);
  Table<std::size_t> choice(m, n, 0);
  std::vector<double> base(n, kInf);

  for (auto it = tree.preorder.rbegin(); it != tree.preorder.rend(); ++it) {
    const std::size_t j = *it;
    if (!tree.parent[j]) continue;
    const std::size_t i = *tree.parent[j];
    const double d = tree.volume_to_parent[j];
    const auto& child_sites = sc.feasible_sites(j);
    for (std::size_t q : child_sites) base[q] = *costs.node(j, q) + best(j, q);

    for (std::size_t p : sc.feasible_sites(i)) {
      double min_cost = kInf;
      std::size_t arg = child_sites.front();
      for (std::size_t q : child_sites) {
        const double v = base[q] + costs.edge(d, p, q);
        if (v < min_cost) {
          min_cost = v;
          arg = q;
        }
      }
      best(i, p) += min_cost;
      choice(j, p) = arg;
    }
    stats.relaxations += sc.feasible_sites(i).size() * child_sites.size();
  }

  double min_total = kInf;
  std::size_t root_site = sc.feasible_sites(tree.root).front();
  for (std::size_t p : sc.feasible_sites(tree.root)) {
    const double v = *costs.node(tree.root, p) + best(tree.root, p);
    if (v < min_total) {
      min_total = v;
      root_site = p;
    }
  }
  stats.relaxations += sc.feasible_sites(tree.root).size();

  Assignment a{std::vector<std::size_t>(m, 0)};
  a.site_of[tree.root] = root_site;
  for (std::size_t j : tree.preorder) {
    if (tree.parent[j]) a.site_of[j] = choice(j, a.site_of[*tree.parent[j]]);
  }
  return finish(sc, std::move(a), weights, "dp", stats, t0);
}

std::uint64_t brute_guard_from_env() {
  const char* raw = std::getenv("SOLVER_BRUTE_GUARD");
  if (raw == nullptr || *raw == '\0') return kDefaultBruteGuard;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0 || raw[0] == '-') return kDefaultBruteGuard;
  return v;
}

std::uint64_t assignment_space_size(const Scenario& sc) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t n = sc.site_count();
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < sc.task_count(); ++i) {
    if (n != 0 && size > kMax / n) return kMax;
    size *= n;
  }
  return size;
}

SolveResult solve_brute_force(const Scenario& sc, const GoalWeights& weights,
                              std::uint64_t guard) {
  const auto t0 = Clock::now();
  check_guard(sc, guard);

  SolverStats stats;
  FastEvaluator eval(sc);
  std::optional<Assignment> best;
  double best_value = kInf;
  enumerate(sc, [&](const Assignment& a) {
    ++stats.candidates;
    const auto goals = eval(a);
    if (!goals) return;
    ++stats.feasible_candidates;
    const double v = scalarize(*goals, weights);
    if (!best || v < best_value) {
      best_value = v;
      best = a;
    }
  });
  if (!best) {
    std::string msg = "all assignments are infeasible";
    for (std::size_t i = 0; i < sc.task_count(); ++i) {
      if (sc.feasible_sites(i).empty()) {
        msg += ": task " + sc.tasks()[i].id + " has no feasible site";
        break;
      }
    }
    throw SolverError(SolverErrc::kNoFeasibleAssignment, msg);
  }
  return finish(sc, std::move(*best), weights, "brute", stats, t0);
}

std::vector<GoalOptimum> per_goal_optima(const Scenario& sc,
                                         std::uint64_t guard) {
  bool tree_ok = !has_hard_capacity(sc);
  if (tree_ok) {
    try {
      check_tree(sc);
    } catch (const SolverError&) {
      tree_ok = false;
    }
  }
  std::vector<GoalOptimum> out;
  for (Goal g : kAllGoals) {
    const GoalWeights w = GoalWeights::unit(g);
    if (tree_ok && is_separable(g)) {
      out.push_back({g, solve_tree_dp(sc, w)});
    } else {
      out.push_back({g, solve_brute_force(sc, w, guard)});
    }
  }
  return out;
}

ParetoSet pareto_frontier(const Scenario& sc, std::uint64_t guard) {
  check_guard(sc, guard);
  ParetoSet set;
  FastEvaluator eval(sc);
  std::vector<ParetoPoint>& front = set.points;
  enumerate(sc, [&](const Assignment& a) {
    ++set.candidates;
    const auto goals = eval(a);
    if (!goals) return;
    ++set.feasible_candidates;
    for (const auto& pt : front) {
      // Earlier equal vectors carry the lexicographically smaller assignment.
      if (pt.goals == *goals || dominates(pt.goals, *goals)) return;
    }
    std::erase_if(front, [&](const ParetoPoint& pt) {
      return dominates(*goals, pt.goals);
    });
    front.push_back({a, *goals});
  });
  if (set.feasible_candidates == 0) {
    throw SolverError(SolverErrc::kNoFeasibleAssignment,
                      "all assignments are infeasible");
  }
  std::sort(front.begin(), front.end(),
            [](const ParetoPoint& x, const ParetoPoint& y) {
              return x.goals < y.goals;
            });
  return set;
}

}  // namespace gsdplan
