#include "gsdplan/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gsdplan/scenario_io.hpp"
#include "gsdplan/solver.hpp"

namespace gsdplan {

namespace {

double time_solve(const Scenario& sc, const BenchConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const GoalWeights weights;
  double best = std::numeric_limits<double>::infinity();
  double sink = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    std::size_t reps = 0;
    const auto t0 = Clock::now();
    double elapsed = 0.0;
    do {
      sink += solve_tree_dp(sc, weights).objective;
      ++reps;
      elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    } while (elapsed < cfg.min_batch_seconds);
    best = std::min(best, elapsed / static_cast<double>(reps));
  }
  if (sink < 0.0) throw std::logic_error("negative objective");
  return best;
}

BenchPoint measure(std::size_t m, std::size_t n, const BenchConfig& cfg) {
  const Scenario sc = generate_instance(m, n, cfg.seed, Shape::kChain);
  return {m, n, time_solve(sc, cfg)};
}

}  // namespace

std::vector<BenchPoint> sweep_sites(std::size_t tasks,
                                    const std::vector<std::size_t>& sites,
                                    const BenchConfig& config) {
  std::vector<BenchPoint> out;
  for (std::size_t n : sites) out.push_back(measure(tasks, n, config));
  return out;
}

std::vector<BenchPoint> sweep_tasks(const std::vector<std::size_t>& tasks,
                                    std::size_t sites,
                                    const BenchConfig& config) {
  std::vector<BenchPoint> out;
  for (std::size_t m : tasks) out.push_back(measure(m, sites, config));
  return out;
}

double loglog_slope(const std::vector<BenchPoint>& points, bool over_sites) {
  if (points.size() < 2) throw std::invalid_argument("need at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(points.size());
  for (const auto& p : points) {
    const double x = std::log(double(over_sites ? p.sites : p.tasks));
    const double y = std::log(p.seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

}  // namespace gsdplan
