// hyperlab: run, check and report hyperspace dynamics scenarios.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error,
// 3 acceptance-check failure (run --assert).

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "hyperlab/experiments.hpp"
#include "hyperlab/parallel.hpp"
#include "hyperlab/scenario.hpp"

namespace {

constexpr int kValidation = 1;
constexpr int kRuntime = 2;
constexpr int kAssert = 3;

int print_validation(const hyperlab::ScenarioError& e, const std::string& file) {
  for (const auto& d : e.errors()) {
    std::cerr << file << ":";
    if (d.line > 0) std::cerr << d.line << ":";
    std::cerr << " error: " << d.message << "\n";
  }
  return kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperlab: entropy and recurrence experiments on hyperspaces of graphs"};
  app.require_subcommand(1);

  std::string scenario_file;
  bool assert_mode = false;
  unsigned threads = 0;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run the experiment named in a scenario file");
  run->add_option("scenario", scenario_file, "Scenario file")->required();
  run->add_flag("--assert", assert_mode, "Exit with code 3 when an acceptance check fails");
  run->add_option("--threads", threads, "Worker threads (default: HYPERLAB_THREADS or all cores)");
  run->add_option("--out", out_dir, "Output directory (overrides [output] dir)");

  std::string result_file;
  auto* report = app.add_subcommand("report", "Summarize a result file");
  report->add_option("result", result_file, "JSONL result file")->required();

  std::string check_file;
  auto* check = app.add_subcommand("check", "Parse and validate a scenario without running it");
  check->add_option("scenario", check_file, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidation;
  }

  if (*check) {
    try {
      const hyperlab::Scenario s = hyperlab::load_scenario(check_file);
      std::cout << check_file << ": ok (" << hyperlab::to_string(s.experiment()) << ", scenario "
                << hyperlab::scenario_hash(s) << ")\n";
      return 0;
    } catch (const hyperlab::ScenarioError& e) {
      return print_validation(e, check_file);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kValidation;
    }
  }

  if (*report) {
    try {
      hyperlab::write_report(result_file, std::cout);
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kRuntime;
    }
  }

  hyperlab::Scenario s;
  try {
    s = hyperlab::load_scenario(scenario_file);
  } catch (const hyperlab::ScenarioError& e) {
    return print_validation(e, scenario_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  if (threads != 0) hyperlab::set_thread_count(threads);
  try {
    hyperlab::RunOptions opts;
    opts.out_dir = out_dir;
    opts.default_name = std::filesystem::path(scenario_file).stem().string();
    const hyperlab::RunResult r = hyperlab::run_scenario(s, opts);
    std::cout << hyperlab::to_string(s.experiment()) << ": " << r.records << " records in "
              << r.seconds << " s -> " << r.jsonl_path << "\n";
    for (const auto& f : r.failures) std::cout << "check failed: " << f << "\n";
    if (r.failures.empty()) std::cout << "all checks passed\n";
    if (assert_mode && !r.failures.empty()) return kAssert;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
