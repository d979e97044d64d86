#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperlab/errors.hpp"

namespace hyperlab {

enum class ExperimentKind {
  entropy_profile,
  witness_example5,
  witness_lemma32,
  liyorke_scan,
  omega_report,
  components_report,
  condition_check,
};

std::string to_string(ExperimentKind kind);

/// Validated scenario. Values are kept as normalized text per section and
/// key; the typed getters below convert on demand and cannot fail for keys
/// that passed validation.
class Scenario {
 public:
  using Section = std::map<std::string, std::string>;

  bool has(const std::string& section, const std::string& key) const;
  const std::string& text(const std::string& section, const std::string& key) const;
  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback) const;
  double real(const std::string& section, const std::string& key) const;
  double real(const std::string& section, const std::string& key, double fallback) const;
  long integer(const std::string& section, const std::string& key) const;
  long integer(const std::string& section, const std::string& key, long fallback) const;
  bool flag(const std::string& section, const std::string& key, bool fallback) const;
  std::vector<double> reals(const std::string& section, const std::string& key) const;
  std::vector<long> integers(const std::string& section, const std::string& key) const;
  std::optional<std::uint64_t> seed() const;

  ExperimentKind experiment() const;

  /// Raw storage, section -> key -> normalized value.
  std::map<std::string, Section> values;
  /// Source line of each key (0 when the scenario was not parsed from text).
  std::map<std::string, std::map<std::string, int>> lines;

  friend bool operator==(const Scenario& a, const Scenario& b) { return a.values == b.values; }
};

struct ScenarioDiagnostic {
  int line = 0;  // 0 = whole file
  std::string message;
};

struct ScenarioParse {
  std::optional<Scenario> scenario;
  std::vector<ScenarioDiagnostic> errors;
};

/// Parses and validates; on any error `scenario` is empty.
ScenarioParse parse_scenario(const std::string& text);

/// Canonical text form: fixed section order, keys sorted.
std::string render_scenario(const Scenario& s);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string scenario_hash(const Scenario& s);

class ScenarioError : public Error {
 public:
  explicit ScenarioError(std::vector<ScenarioDiagnostic> errors);
  const std::vector<ScenarioDiagnostic>& errors() const { return errors_; }

 private:
  std::vector<ScenarioDiagnostic> errors_;
};

/// Reads and parses a file; throws ScenarioError on validation failure and
/// Error when the file cannot be read.
Scenario load_scenario(const std::string& path);

}  // namespace hyperlab
