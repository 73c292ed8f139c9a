#pragma once

// Scenario documents (JSON, format_version 1) and the random instance
// generator used by tests and benchmarks.
//
// Top-level keys: format_version, tasks, sites, edges, root, site_relations,
// cost_model, goal_weights. Unknown keys anywhere are rejected.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gsdplan/model.hpp"

namespace gsdplan {

inline constexpr int kFormatVersion = 1;

/// Malformed JSON. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Structural decoding only. Throws ValidationError listing every schema
/// problem (unknown keys with their paths, wrong types, missing fields).
ScenarioData scenario_from_json(const nlohmann::json& doc);

/// Parses and validates. Throws ParseError or ValidationError.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::ordered_json scenario_to_json(const Scenario& scenario);
std::string serialize_scenario(const Scenario& scenario);

enum class Shape { kChain, kRandomTree };

/// Throws std::invalid_argument for anything but "chain" / "random-tree".
Shape parse_shape(std::string_view name);

struct GeneratorOptions {
  bool skills = true;
  bool capacities = true;
  double skill_gap_penalty = 1.5;
};

/// Deterministic in (m, n, seed, shape, options). Integer efforts in
/// [10, 200], rates in [1, 5], volumes in [0, 50], symmetric s in [0, 5]
/// with zero diagonal. Random trees attach task k to a uniform task < k.
Scenario generate_instance(std::size_t m, std::size_t n, std::uint64_t seed,
                           Shape shape, const GeneratorOptions& options = {});

}  // namespace gsdplan
