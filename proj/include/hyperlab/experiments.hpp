#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hyperlab/scenario.hpp"
#include "hyperlab/spaces.hpp"

namespace hyperlab {

std::shared_ptr<const Space> scenario_space(const Scenario& s);
Homeo scenario_map(const Scenario& s, std::shared_ptr<const Space> space);
/// Scenario position to a point: interval parameter, circle turns, or the
/// parameter along edge 0 on other spaces.
GraphPoint scenario_point(const Space& space, double position);

struct RunOptions {
  /// Overrides [output] dir when non-empty.
  std::string out_dir;
  /// Used when [output] name is absent.
  std::string default_name = "results";
};

struct RunResult {
  std::string jsonl_path;
  std::string csv_path;
  std::size_t records = 0;
  /// Failed acceptance checks (what --assert turns into exit code 3).
  std::vector<std::string> failures;
  double seconds = 0.0;
};

/// Runs the scenario's experiment. Records are appended to the JSONL file
/// one line at a time as they are produced; the CSV mirror is written at
/// the end. Throws Error on runtime failures.
RunResult run_scenario(const Scenario& s, const RunOptions& options = {});

/// Human-readable tables for a JSONL result file. Throws Error when the
/// file cannot be read or a line is not valid JSON.
void write_report(const std::string& result_file, std::ostream& out);

}  // namespace hyperlab
