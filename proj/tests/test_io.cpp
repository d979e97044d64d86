#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hyperlab/experiments.hpp"
#include "hyperlab/scenario.hpp"
#include "json.hpp"

using namespace hyperlab;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(
[space]
builder = interval

[map]
builder = square

[experiment]
kind = omega-report

[params]
points = 0.5
burn_in = 20
window = 20
delta = 0.01
steps = 32
)";

const char* kExample5 = R"(
# fan with two fans, k = 2, m = 1
[space]
builder = fan
n_max = 2
[map]
builder = fan
[experiment]
kind = witness-example5
[params]
k_list = 2
m_list = 1
[output]
name = ex5
)";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hyperlab_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines_of(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("minimal scenario parses") {
  const ScenarioParse p = parse_scenario(kMinimal);
  REQUIRE(p.errors.empty());
  REQUIRE(p.scenario.has_value());
  CHECK(p.scenario->experiment() == ExperimentKind::omega_report);
  CHECK(p.scenario->real("params", "delta") == 0.01);
}

TEST_CASE("zero epsilon is rejected with its line") {
  const ScenarioParse p = parse_scenario(
      "[space]\nbuilder = interval\n[map]\nbuilder = square\n[experiment]\nkind = entropy-profile\n"
      "[params]\neps_list = 0.1, 0\nn_list = 1, 2, 3\nbudget = 5\nseed = 1\n");
  CHECK_FALSE(p.scenario.has_value());
  REQUIRE(p.errors.size() == 1);
  CHECK(p.errors[0].message == "epsilon must be positive");
  CHECK(p.errors[0].line == 8);
}

TEST_CASE("validation errors") {
  const auto errors = [](const std::string& text) { return parse_scenario(text).errors; };
  CHECK_FALSE(errors("[space]\nbuilder = torus\n").empty());
  CHECK_FALSE(errors("[space]\nbuilder = interval\n[map]\nbuilder = square\n").empty());
  CHECK_FALSE(errors("[bogus]\nx = 1\n").empty());
  CHECK_FALSE(errors("[space]\nbuilder = interval\nbuilder = circle\n").empty());
  // Rotation on the interval.
  CHECK_FALSE(errors("[space]\nbuilder = interval\n[map]\nbuilder = rotation\nalpha = 0.1\n"
                     "[experiment]\nkind = components-report\n[params]\ndelta = 0.1\nsteps = 3\n")
                  .empty());
  // Randomized experiments need a seed.
  const auto no_seed = errors(
      "[space]\nbuilder = circle\n[map]\nbuilder = rotation\nalpha = 0.1\n[experiment]\n"
      "kind = liyorke-scan\n[params]\npair_count = 3\nhorizon = 10\ntail = 2\ndelta_prox = 0.1\n"
      "delta_asym = 0.1\n");
  REQUIRE(no_seed.size() == 1);
  CHECK(no_seed[0].message.find("seed") != std::string::npos);
}

TEST_CASE("Example 5 scenario") {
  const ScenarioParse p = parse_scenario(kExample5);
  REQUIRE(p.scenario.has_value());
  const Scenario& s = *p.scenario;
  CHECK(s.integer("space", "n_max") == 2);
  CHECK(s.integers("params", "k_list") == std::vector<long>{2});
  CHECK(s.integers("params", "m_list") == std::vector<long>{1});
  CHECK(scenario_space(s)->edge_count() == 7);
}

TEST_CASE("render round trip") {
  for (const char* text : {kMinimal, kExample5}) {
    const Scenario s = *parse_scenario(text).scenario;
    const ScenarioParse again = parse_scenario(render_scenario(s));
    REQUIRE(again.scenario.has_value());
    CHECK(*again.scenario == s);
    CHECK(scenario_hash(*again.scenario) == scenario_hash(s));
  }
  // Lists are normalized, so spacing does not change the hash.
  const Scenario a = *parse_scenario(std::string(kExample5)).scenario;
  std::string spaced = kExample5;
  spaced.replace(spaced.find("k_list = 2"), 10, "k_list =   2 ");
  CHECK(scenario_hash(*parse_scenario(spaced).scenario) == scenario_hash(a));
}

TEST_CASE("run writes records and a report") {
  const fs::path dir = scratch("run");
  RunOptions opts;
  opts.out_dir = dir.string();
  const RunResult r = run_scenario(*parse_scenario(kExample5).scenario, opts);
  CHECK(r.failures.empty());
  const auto lines = lines_of(r.jsonl_path);
  REQUIRE(lines.size() == 3);
  const auto header = nlohmann::json::parse(lines[0]);
  CHECK(header["record"] == "header");
  CHECK(header["scenario_hash"].get<std::string>().size() == 16);
  const auto rec = nlohmann::json::parse(lines[1]);
  CHECK(rec["cardinality"] == 4);
  CHECK(rec["n"] == 2);
  CHECK(rec["eps_measured"].get<double>() > 0.0);
  CHECK(rec["bound"].get<double>() == doctest::Approx(std::numbers::ln2).epsilon(1e-12));
  CHECK(fs::exists(r.csv_path));

  std::ostringstream report;
  write_report(r.jsonl_path, report);
  CHECK(report.str().find("example5") != std::string::npos);
}

TEST_CASE("identical runs give identical records") {
  const fs::path dir = scratch("det");
  const Scenario s = *parse_scenario(
                          "[space]\nbuilder = circle\n[map]\nbuilder = rotation\nalpha = 0.3\n"
                          "[experiment]\nkind = entropy-profile\n[params]\neps_list = 0.2, 0.1\n"
                          "n_list = 0, 1, 2, 3\nbudget = 30\nseed = 5\n")
                          .scenario;
  RunOptions a;
  a.out_dir = (dir / "a").string();
  RunOptions b;
  b.out_dir = (dir / "b").string();
  const auto la = lines_of(run_scenario(s, a).jsonl_path);
  const auto lb = lines_of(run_scenario(s, b).jsonl_path);
  REQUIRE(la.size() == lb.size());
  for (std::size_t i = 1; i < la.size(); ++i) CHECK(la[i] == lb[i]);
}

TEST_CASE("report of an empty result set") {
  const fs::path dir = scratch("empty");
  const fs::path file = dir / "empty.jsonl";
  std::ofstream(file).close();
  std::ostringstream out;
  write_report(file.string(), out);
  CHECK(out.str().find("no records") != std::string::npos);
  CHECK_THROWS_AS(write_report((dir / "missing.jsonl").string(), out), Error);
}
