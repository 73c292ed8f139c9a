#pragma once

#include <string>

#include "gsdplan/model.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) {
  return std::string(GSDPLAN_TEST_DATA_DIR) + "/" + name;
}

/// Chain T1-T2-T3 (d12 = 10, d23 = 5) over sites A, B with s_AB = 2 and
/// execution costs (T1: 100, 80) (T2: 50, 70) (T3: 60, 40).
inline gsdplan::ScenarioData chain3_sites2() {
  using gsdplan::Task;
  gsdplan::ScenarioData d;
  d.tasks = {
      Task{"T1", 100, {}, {}, {}, {{"A", 100}, {"B", 80}}, {}},
      Task{"T2", 50, {}, {}, {}, {{"A", 50}, {"B", 70}}, {}},
      Task{"T3", 60, {}, {}, {}, {{"A", 60}, {"B", 40}}, {}},
  };
  d.sites = {gsdplan::Site{"A", 1.0, {}, {}, {}},
             gsdplan::Site{"B", 1.0, {}, {}, {}}};
  d.edges = {{"T1", "T2", 10}, {"T2", "T3", 5}};
  d.relation_entries = {{"A", "B", 2}};
  return d;
}

}  // namespace fixtures
