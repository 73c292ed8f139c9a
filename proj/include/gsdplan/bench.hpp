#pragma once

// Runtime sweeps of solve_tree_dp on generated chains.

#include <cstdint>
#include <vector>

namespace gsdplan {

struct BenchPoint {
  std::size_t tasks = 0;
  std::size_t sites = 0;
  double seconds = 0.0;  // best mean time per solve over the trials
};

struct BenchConfig {
  std::uint64_t seed = 7;
  double min_batch_seconds = 0.02;  // each trial repeats until this elapses
  int trials = 5;
};

std::vector<BenchPoint> sweep_sites(std::size_t tasks,
                                    const std::vector<std::size_t>& sites,
                                    const BenchConfig& config = {});
std::vector<BenchPoint> sweep_tasks(const std::vector<std::size_t>& tasks,
                                    std::size_t sites,
                                    const BenchConfig& config = {});

/// Least-squares slope of log(seconds) against log(sites) or log(tasks).
double loglog_slope(const std::vector<BenchPoint>& points, bool over_sites);

}  // namespace gsdplan
