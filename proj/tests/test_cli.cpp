#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "gsdplan/scenario_io.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;  // stdout and stderr
};

Run run(const std::string& args) {
  const std::string cmd = std::string(GSDPLAN_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), got);
  }
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string worked() { return fixtures::data_path("chain3_sites2.json"); }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("cli solve") {
  const Run table = run("solve " + worked());
  CHECK(table.code == 0);
  CHECK(table.out.find("objective: 190") != std::string::npos);

  const Run machine = run("solve " + worked() + " --out machine");
  REQUIRE(machine.code == 0);
  const json doc = json::parse(machine.out);
  CHECK(doc["objective"] == 190.0);
  CHECK(doc["assignment"] == json{{"T1", "B"}, {"T2", "B"}, {"T3", "B"}});

  CHECK(run("solve " + worked() + " --out machine").out == machine.out);

  const Run weighted = run("solve " + worked() +
                           " --solver brute --weights cross_site_volume=1 --out machine");
  CHECK(json::parse(weighted.out)["objective"] == 0.0);
}

TEST_CASE("cli evaluate") {
  const Run partial = run("evaluate " + worked() + " --assign T1=A");
  CHECK(partial.code == 2);
  CHECK(partial.out.find("assignment not total") != std::string::npos);

  const Run full = run("evaluate " + worked() + " --assign T1=A T2=A T3=B --out machine");
  REQUIRE(full.code == 0);
  CHECK(json::parse(full.out)["goals"]["total_cost"] == 200.0);

  CHECK(run("evaluate " + worked() + " --assign T1").code == 2);
}

TEST_CASE("cli error contract") {
  const auto big = gsdplan::serialize_scenario(
      gsdplan::generate_instance(12, 5, 1, gsdplan::Shape::kChain));
  const std::string big_path = temp_file("gsdplan_big.json", big);
  const Run pareto = run("pareto " + big_path);
  CHECK(pareto.code == 1);
  CHECK(pareto.out.find("exceeds the guard") != std::string::npos);

  // Guard override through the environment.
  const Run lowered =
      run("solve " + worked() + " --solver brute");
  CHECK(lowered.code == 0);
  CHECK(::setenv("SOLVER_BRUTE_GUARD", "4", 1) == 0);
  CHECK(run("solve " + worked() + " --solver brute").code == 1);
  ::unsetenv("SOLVER_BRUTE_GUARD");

  CHECK(run("solve " + worked() + " --bogus").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("solve /nonexistent.json").code == 2);

  const std::string v2 = temp_file(
      "gsdplan_v2.json", R"({"format_version": 2, "tasks": [], "sites": []})");
  const Run unsupported = run("validate " + v2);
  CHECK(unsupported.code == 2);
  CHECK(unsupported.out.find("unsupported format_version") != std::string::npos);

  const std::string broken = temp_file("gsdplan_broken.json", "{\n  \"tasks\": \n}");
  const Run parse = run("validate " + broken);
  CHECK(parse.code == 2);
  CHECK(parse.out.find("line 3") != std::string::npos);

  const std::string cyclic = temp_file("gsdplan_cycle.json", R"({
    "format_version": 1,
    "tasks": [{"id": "a", "effort": 1}, {"id": "b", "effort": 1}, {"id": "c", "effort": 1}],
    "sites": [{"id": "s", "hourly_rate": 1}],
    "edges": [{"from": "a", "to": "b", "volume": 1}, {"from": "b", "to": "c", "volume": 1},
              {"from": "c", "to": "a", "volume": 1}]
  })");
  const Run dp = run("solve " + cyclic);
  CHECK(dp.code == 1);
  CHECK(dp.out.find("not a tree") != std::string::npos);
  CHECK(run("solve " + cyclic + " --solver brute").code == 0);
}

TEST_CASE("cli goals, pareto, gen") {
  const Run goals = run("goals " + worked() + " --out machine");
  REQUIRE(goals.code == 0);
  CHECK(json::parse(goals.out)["goals"].size() == 4);

  const Run pareto = run("pareto " + worked() + " --out machine");
  REQUIRE(pareto.code == 0);
  CHECK(json::parse(pareto.out)["frontier"].size() == 1);

  const Run gen1 = run("gen --tasks 6 --sites 3 --seed 9 --shape random-tree");
  const Run gen2 = run("gen --tasks 6 --sites 3 --seed 9 --shape random-tree");
  REQUIRE(gen1.code == 0);
  CHECK(gen1.out == gen2.out);
  const auto sc = gsdplan::parse_scenario(gen1.out);
  CHECK(sc.task_count() == 6);
  CHECK(run("gen --tasks 0 --sites 3").code == 2);
  CHECK(run("validate " + worked()).code == 0);
}
