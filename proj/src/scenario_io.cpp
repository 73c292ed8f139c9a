#include "gsdplan/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>

namespace gsdplan {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Collects schema issues while walking the document.
class Decoder {
 public:
  std::vector<Issue> issues;

  void fail(const std::string& path, const std::string& msg) {
    issues.push_back({path.empty() ? "/" : path, last_segment(path), msg});
  }

  bool expect_object(const json& v, const std::string& path) {
    if (v.is_object()) return true;
    fail(path, path + ": expected an object");
    return false;
  }

  bool expect_array(const json& v, const std::string& path) {
    if (v.is_array()) return true;
    fail(path, path + ": expected an array");
    return false;
  }

  void reject_unknown(const json& obj, const std::string& path,
                      std::initializer_list<std::string_view> known) {
    for (const auto& [key, _] : obj.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        fail(path + "/" + key, "unknown key " + path + "/" + key);
      }
    }
  }

  std::optional<double> number(const json& obj, const std::string& path,
                               const char* key, bool required) {
    const std::string p = path + "/" + key;
    if (!obj.contains(key)) {
      if (required) fail(p, "missing required field " + p);
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
      fail(p, p + ": expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<std::string> string(const json& obj, const std::string& path,
                                    const char* key, bool required) {
    const std::string p = path + "/" + key;
    if (!obj.contains(key)) {
      if (required) fail(p, "missing required field " + p);
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_string()) {
      fail(p, p + ": expected a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::map<std::string, double> number_map(const json& obj,
                                           const std::string& path,
                                           const char* key) {
    std::map<std::string, double> out;
    if (!obj.contains(key)) return out;
    const std::string p = path + "/" + key;
    const json& v = obj.at(key);
    if (!expect_object(v, p)) return out;
    for (const auto& [k, x] : v.items()) {
      if (!x.is_number()) {
        fail(p + "/" + k, p + "/" + k + ": expected a number");
        continue;
      }
      out.emplace(k, x.get<double>());
    }
    return out;
  }

  SkillMap skill_map(const json& obj, const std::string& path,
                     const char* key) {
    SkillMap out;
    if (!obj.contains(key)) return out;
    const std::string p = path + "/" + key;
    const json& v = obj.at(key);
    if (!expect_object(v, p)) return out;
    for (const auto& [k, x] : v.items()) {
      const std::string kp = p + "/" + k;
      if (!x.is_number_integer()) {
        fail(kp, kp + ": skill level must be an integer in [0, 10]");
        continue;
      }
      try {
        out.emplace(k, SkillLevel(x.get<int>()));
      } catch (const std::out_of_range&) {
        fail(kp, kp + ": skill level must be an integer in [0, 10]");
      }
    }
    return out;
  }

 private:
  static std::string last_segment(const std::string& path) {
    const auto pos = path.rfind('/');
    return pos == std::string::npos ? path : path.substr(pos + 1);
  }
};

Task decode_task(Decoder& d, const json& v, const std::string& path) {
  Task t;
  if (!d.expect_object(v, path)) return t;
  d.reject_unknown(v, path,
                   {"id", "effort", "required_skills", "pinned_site",
                    "forbidden_sites", "cost_overrides", "attributes"});
  t.id = d.string(v, path, "id", true).value_or("");
  t.effort = d.number(v, path, "effort", true).value_or(0.0);
  t.required_skills = d.skill_map(v, path, "required_skills");
  if (v.contains("pinned_site") && !v.at("pinned_site").is_null()) {
    t.pinned_site = d.string(v, path, "pinned_site", false);
  }
  if (v.contains("forbidden_sites")) {
    const std::string p = path + "/forbidden_sites";
    const json& f = v.at("forbidden_sites");
    if (d.expect_array(f, p)) {
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (!f[k].is_string()) {
          d.fail(p + "/" + std::to_string(k), p + ": expected site id strings");
          continue;
        }
        t.forbidden_sites.insert(f[k].get<std::string>());
      }
    }
  }
  t.cost_overrides = d.number_map(v, path, "cost_overrides");
  t.attributes = d.number_map(v, path, "attributes");
  return t;
}

Site decode_site(Decoder& d, const json& v, const std::string& path) {
  Site s;
  if (!d.expect_object(v, path)) return s;
  d.reject_unknown(v, path,
                   {"id", "hourly_rate", "capacity", "skills", "attributes"});
  s.id = d.string(v, path, "id", true).value_or("");
  s.hourly_rate = d.number(v, path, "hourly_rate", true).value_or(0.0);
  if (v.contains("capacity") && !v.at("capacity").is_null()) {
    s.capacity = d.number(v, path, "capacity", false);
  }
  s.skills = d.skill_map(v, path, "skills");
  s.attributes = d.number_map(v, path, "attributes");
  return s;
}

void decode_relations(Decoder& d, const json& v, ScenarioData& out) {
  const std::string path = "/site_relations";
  if (!d.expect_array(v, path)) return;
  const bool matrix = !v.empty() && v.front().is_array();
  if (matrix) {
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < v.size(); ++r) {
      const std::string rp = path + "/" + std::to_string(r);
      if (!d.expect_array(v[r], rp)) continue;
      std::vector<double> row;
      for (std::size_t c = 0; c < v[r].size(); ++c) {
        if (!v[r][c].is_number()) {
          d.fail(rp + "/" + std::to_string(c), rp + ": expected numbers");
          row.push_back(0.0);
          continue;
        }
        row.push_back(v[r][c].get<double>());
      }
      rows.push_back(std::move(row));
    }
    out.relation_matrix = std::move(rows);
    return;
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string p = path + "/" + std::to_string(k);
    if (!d.expect_object(v[k], p)) continue;
    d.reject_unknown(v[k], p, {"a", "b", "cost"});
    SiteRelation r;
    r.a = d.string(v[k], p, "a", true).value_or("");
    r.b = d.string(v[k], p, "b", true).value_or("");
    r.cost = d.number(v[k], p, "cost", true).value_or(0.0);
    out.relation_entries.push_back(std::move(r));
  }
}

void decode_cost_model(Decoder& d, const json& v, CostModel& cm) {
  const std::string path = "/cost_model";
  if (!d.expect_object(v, path)) return;
  d.reject_unknown(v, path,
                   {"skill_gap_penalty", "hard_skill_floor", "capacity_mode"});
  if (auto g = d.number(v, path, "skill_gap_penalty", false)) {
    cm.skill_gap_penalty = *g;
  }
  if (v.contains("hard_skill_floor") && !v.at("hard_skill_floor").is_null()) {
    const json& f = v.at("hard_skill_floor");
    if (f.is_number_integer()) {
      cm.hard_skill_floor = f.get<int>();
    } else {
      d.fail(path + "/hard_skill_floor",
             path + "/hard_skill_floor: expected an integer");
    }
  }
  if (auto mode = d.string(v, path, "capacity_mode", false)) {
    if (*mode == "soft") {
      cm.capacity_mode = CapacityMode::kSoft;
    } else if (*mode == "hard") {
      cm.capacity_mode = CapacityMode::kHard;
    } else {
      d.fail(path + "/capacity_mode",
             "capacity_mode must be \"soft\" or \"hard\", got \"" + *mode +
                 "\"");
    }
  }
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text,
                                             std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t k = 0; k + 1 < end; ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ordered_json skills_json(const SkillMap& skills) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, v] : skills) out[k] = v.value();
  return out;
}

ordered_json numbers_json(const std::map<std::string, double>& m) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, v] : m) out[k] = v;
  return out;
}

}  // namespace

ScenarioData scenario_from_json(const json& doc) {
  Decoder d;
  ScenarioData out;
  if (!doc.is_object()) {
    d.fail("", "scenario document must be a JSON object");
    throw ValidationError(std::move(d.issues));
  }
  d.reject_unknown(doc, "",
                   {"format_version", "tasks", "sites", "edges", "root",
                    "site_relations", "cost_model", "goal_weights"});

  if (!doc.contains("format_version")) {
    d.fail("/format_version", "missing required field /format_version");
  } else if (!doc.at("format_version").is_number_integer() ||
             doc.at("format_version").get<long long>() != kFormatVersion) {
    d.fail("/format_version", "unsupported format_version " +
                                  doc.at("format_version").dump() +
                                  " (expected " +
                                  std::to_string(kFormatVersion) + ")");
    // Nothing else is meaningful under an unknown format.
    throw ValidationError(std::move(d.issues));
  }

  auto each = [&](const char* key, bool required, auto&& fn) {
    const std::string path = std::string("/") + key;
    if (!doc.contains(key)) {
      if (required) d.fail(path, "missing required field " + path);
      return;
    }
    const json& arr = doc.at(key);
    if (!d.expect_array(arr, path)) return;
    for (std::size_t k = 0; k < arr.size(); ++k) {
      fn(arr[k], path + "/" + std::to_string(k));
    }
  };

  each("tasks", true, [&](const json& v, const std::string& p) {
    out.tasks.push_back(decode_task(d, v, p));
  });
  each("sites", true, [&](const json& v, const std::string& p) {
    out.sites.push_back(decode_site(d, v, p));
  });
  each("edges", false, [&](const json& v, const std::string& p) {
    if (!d.expect_object(v, p)) return;
    d.reject_unknown(v, p, {"from", "to", "volume"});
    Edge e;
    e.from = d.string(v, p, "from", true).value_or("");
    e.to = d.string(v, p, "to", true).value_or("");
    e.volume = d.number(v, p, "volume", true).value_or(0.0);
    out.edges.push_back(std::move(e));
  });
  if (doc.contains("root") && !doc.at("root").is_null()) {
    out.root = d.string(doc, "", "root", false);
  }
  if (doc.contains("site_relations")) {
    decode_relations(d, doc.at("site_relations"), out);
  }
  if (doc.contains("cost_model")) {
    decode_cost_model(d, doc.at("cost_model"), out.cost_model);
  }
  if (doc.contains("goal_weights")) {
    out.goal_weights = d.number_map(doc, "", "goal_weights");
  }

  if (!d.issues.empty()) throw ValidationError(std::move(d.issues));
  return out;
}

Scenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    throw ParseError("parse error at line " + std::to_string(line) +
                         ", column " + std::to_string(col) + ": " + e.what(),
                     line, col);
  }
  return validate_scenario(scenario_from_json(doc));
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open scenario file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

ordered_json scenario_to_json(const Scenario& sc) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;

  ordered_json tasks = ordered_json::array();
  for (const Task& t : sc.tasks()) {
    ordered_json j;
    j["id"] = t.id;
    j["effort"] = t.effort;
    if (!t.required_skills.empty()) {
      j["required_skills"] = skills_json(t.required_skills);
    }
    if (t.pinned_site) j["pinned_site"] = *t.pinned_site;
    if (!t.forbidden_sites.empty()) j["forbidden_sites"] = t.forbidden_sites;
    if (!t.cost_overrides.empty()) {
      j["cost_overrides"] = numbers_json(t.cost_overrides);
    }
    if (!t.attributes.empty()) j["attributes"] = numbers_json(t.attributes);
    tasks.push_back(std::move(j));
  }
  doc["tasks"] = std::move(tasks);

  ordered_json sites = ordered_json::array();
  for (const Site& s : sc.sites()) {
    ordered_json j;
    j["id"] = s.id;
    j["hourly_rate"] = s.hourly_rate;
    if (s.capacity) j["capacity"] = *s.capacity;
    if (!s.skills.empty()) j["skills"] = skills_json(s.skills);
    if (!s.attributes.empty()) j["attributes"] = numbers_json(s.attributes);
    sites.push_back(std::move(j));
  }
  doc["sites"] = std::move(sites);

  ordered_json edges = ordered_json::array();
  for (const Edge& e : sc.edges()) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"volume", e.volume}});
  }
  doc["edges"] = std::move(edges);
  if (sc.root()) doc["root"] = *sc.root();

  ordered_json rel = ordered_json::array();
  for (std::size_t p = 0; p < sc.site_count(); ++p) {
    for (std::size_t q = p; q < sc.site_count(); ++q) {
      if (p == q && sc.relation(p, p) == 0.0) continue;
      rel.push_back({{"a", sc.sites()[p].id},
                     {"b", sc.sites()[q].id},
                     {"cost", sc.relation(p, q)}});
    }
  }
  doc["site_relations"] = std::move(rel);

  const CostModel& cm = sc.cost_model();
  ordered_json cost;
  cost["skill_gap_penalty"] = cm.skill_gap_penalty;
  if (cm.hard_skill_floor) {
    cost["hard_skill_floor"] = *cm.hard_skill_floor;
  } else {
    cost["hard_skill_floor"] = nullptr;
  }
  cost["capacity_mode"] =
      cm.capacity_mode == CapacityMode::kHard ? "hard" : "soft";
  doc["cost_model"] = std::move(cost);
  doc["goal_weights"] = numbers_json(sc.goal_weights().to_map());
  return doc;
}

std::string serialize_scenario(const Scenario& sc) {
  return scenario_to_json(sc).dump(2) + "\n";
}

Shape parse_shape(std::string_view name) {
  if (name == "chain") return Shape::kChain;
  if (name == "random-tree") return Shape::kRandomTree;
  throw std::invalid_argument("unknown shape " + std::string(name) +
                              " (expected chain or random-tree)");
}

Scenario generate_instance(std::size_t m, std::size_t n, std::uint64_t seed,
                           Shape shape, const GeneratorOptions& options) {
  if (m == 0 || n == 0) {
    throw std::invalid_argument("generate_instance needs m >= 1 and n >= 1");
  }
  static constexpr std::array<const char*, 3> kSkills = {"design", "code",
                                                         "test"};
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  ScenarioData data;
  double total_effort = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    Task t;
    t.id = "T" + std::to_string(i + 1);
    t.effort = uniform(10, 200);
    total_effort += t.effort;
    if (options.skills) {
      t.required_skills.emplace(kSkills[uniform(0, 2)],
                                SkillLevel(uniform(1, 5)));
    }
    data.tasks.push_back(std::move(t));
  }
  for (std::size_t p = 0; p < n; ++p) {
    Site s;
    s.id = "S" + std::to_string(p + 1);
    s.hourly_rate = uniform(1, 5);
    if (options.skills) {
      for (const char* skill : kSkills) {
        s.skills.emplace(skill, SkillLevel(uniform(0, 5)));
      }
    }
    if (options.capacities) {
      const double fair = total_effort / static_cast<double>(n);
      s.capacity = uniform(std::max(1, static_cast<int>(fair / 2)),
                           std::max(1, static_cast<int>(fair * 3 / 2)));
    }
    data.sites.push_back(std::move(s));
  }
  for (std::size_t k = 1; k < m; ++k) {
    const std::size_t parent =
        shape == Shape::kChain ? k - 1
                               : static_cast<std::size_t>(uniform(0, static_cast<int>(k) - 1));
    data.edges.push_back(
        {data.tasks[parent].id, data.tasks[k].id, double(uniform(0, 50))});
  }
  data.root = data.tasks.front().id;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      data.relation_entries.push_back(
          {data.sites[p].id, data.sites[q].id, double(uniform(0, 5))});
    }
  }
  data.cost_model.skill_gap_penalty = options.skill_gap_penalty;
  return validate_scenario(std::move(data));
}

}  // namespace gsdplan
