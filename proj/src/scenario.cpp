#include "hyperlab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hyperlab {

namespace {

enum class Kind { real, integer, unsigned64, real_list, int_list, word, boolean, path };

struct KeySpec {
  const char* section;
  const char* key;
  Kind kind;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  /// Strict lower bound (value must exceed lo) when set.
  bool open_lo = false;
  std::vector<std::string> choices = {};
};

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> table = {
      {"space", "builder", Kind::word, 0, 0, false, {"interval", "circle", "star", "fan"}},
      {"space", "circumference", Kind::real, 0, kInf, true},
      {"space", "branches", Kind::integer, 3, 64},
      {"space", "branch_length", Kind::real, 0, kInf, true},
      {"space", "n_max", Kind::integer, 1, 24},

      {"map", "builder", Kind::word, 0, 0, false, {"identity", "square", "rotation", "fan", "pl"}},
      {"map", "alpha", Kind::real, -1e6, 1e6},
      {"map", "xs", Kind::real_list, 0, 1},
      {"map", "ys", Kind::real_list, 0, 1},

      {"experiment", "kind", Kind::word, 0, 0, false,
       {"entropy-profile", "witness-example5", "witness-lemma32", "liyorke-scan", "omega-report",
        "components-report", "condition-check"}},
      {"experiment", "max_slope", Kind::real},
      {"experiment", "min_slope", Kind::real},
      {"experiment", "expect_components", Kind::integer, 0, 1e6},
      {"experiment", "expect_cover", Kind::boolean},
      {"experiment", "max_omega_cells", Kind::integer, 0, 1e6},
      {"experiment", "expect_label", Kind::word, 0, 0, false,
       {"DISTAL", "PROXIMAL_ONLY", "ASYMPTOTIC", "LI_YORKE"}},
      {"experiment", "max_seconds", Kind::real, 0, kInf, true},

      {"params", "eps_list", Kind::real_list, 0, kInf, true},
      {"params", "n_list", Kind::int_list, 0, 4096},
      {"params", "delta", Kind::real, 0, kInf, true},
      {"params", "net_delta", Kind::real, 0, kInf, true},
      {"params", "net_mode", Kind::word, 0, 0, false, {"full", "connected"}},
      {"params", "method", Kind::word, 0, 0, false, {"exact", "greedy"}},
      {"params", "budget", Kind::integer, 1, 100000},
      {"params", "max_points", Kind::integer, 1, 1000},
      {"params", "seed", Kind::unsigned64},
      {"params", "spacing", Kind::real, 0, kInf, true},
      {"params", "horizon", Kind::integer, 1, 1e6},
      {"params", "tail", Kind::integer, 1, 1e6},
      {"params", "delta_prox", Kind::real, 0, kInf, true},
      {"params", "delta_asym", Kind::real, 0, kInf, true},
      {"params", "tol", Kind::real, 0, kInf},
      {"params", "burn_in", Kind::integer, 1, 1e7},
      {"params", "window", Kind::integer, 1, 1e7},
      {"params", "steps", Kind::integer, 1, 1e6},
      {"params", "k", Kind::integer, 1, 16},
      {"params", "k_list", Kind::int_list, 2, 1000},
      {"params", "m_list", Kind::int_list, 1, 12},
      {"params", "points", Kind::real_list, 0, 1},
      {"params", "backward_depth", Kind::integer, 2, 4096},
      {"params", "pair_count", Kind::integer, 1, 1e6},
      {"params", "pair_region", Kind::word, 0, 0, false, {"anywhere", "wandering"}},
      {"params", "arc_max", Kind::real, 0, 1, true},
      {"params", "p_max", Kind::integer, 1, 1e5},
      {"params", "q_max", Kind::integer, 1, 1e5},
      {"params", "inject_witness", Kind::boolean},

      {"output", "dir", Kind::path},
      {"output", "name", Kind::word},
  };
  return table;
}

const std::vector<std::string>& section_order() {
  static const std::vector<std::string> order = {"space", "map", "experiment", "params", "output"};
  return order;
}

const KeySpec* find_spec(const std::string& section, const std::string& key) {
  for (const KeySpec& k : schema()) {
    if (section == k.section && key == k.key) return &k;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> to_real(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long> to_integer(const std::string& s) {
  long v = 0;
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) return std::nullopt;
  return v;
}

std::string range_text(const KeySpec& k) {
  std::ostringstream out;
  if (k.open_lo && k.lo == 0.0 && k.hi == kInf) return "must be positive";
  out << "must be in " << (k.open_lo ? "(" : "[") << k.lo << ", " << k.hi << "]";
  return out.str();
}

bool in_range(const KeySpec& k, double v) {
  return (k.open_lo ? v > k.lo : v >= k.lo) && v <= k.hi;
}

std::string subject(const KeySpec& k) {
  if (std::string(k.key) == "eps_list") return "epsilon";
  return k.key;
}

/// Checks one value against its spec and returns the normalized text, or
/// an error message.
std::pair<std::string, std::string> check_value(const KeySpec& k, const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty()) return {"", std::string(k.key) + ": empty value"};
  switch (k.kind) {
    case Kind::real: {
      const auto x = to_real(v);
      if (!x) return {"", std::string(k.key) + ": not a number: '" + v + "'"};
      if (!in_range(k, *x)) return {"", subject(k) + " " + range_text(k)};
      return {v, ""};
    }
    case Kind::integer: {
      const auto x = to_integer(v);
      if (!x) return {"", std::string(k.key) + ": not an integer: '" + v + "'"};
      if (!in_range(k, static_cast<double>(*x))) return {"", subject(k) + " " + range_text(k)};
      return {v, ""};
    }
    case Kind::unsigned64: {
      std::uint64_t x = 0;
      const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
      if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
        return {"", std::string(k.key) + ": not an unsigned integer: '" + v + "'"};
      }
      return {v, ""};
    }
    case Kind::real_list:
    case Kind::int_list: {
      std::string norm;
      for (const std::string& item : split_list(v)) {
        if (item.empty()) return {"", std::string(k.key) + ": empty list item"};
        double x = 0.0;
        if (k.kind == Kind::real_list) {
          const auto r = to_real(item);
          if (!r) return {"", std::string(k.key) + ": not a number: '" + item + "'"};
          x = *r;
        } else {
          const auto r = to_integer(item);
          if (!r) return {"", std::string(k.key) + ": not an integer: '" + item + "'"};
          x = static_cast<double>(*r);
        }
        if (!in_range(k, x)) return {"", subject(k) + " " + range_text(k)};
        norm += (norm.empty() ? "" : ", ") + item;
      }
      return {norm, ""};
    }
    case Kind::word:
      if (!k.choices.empty() && std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end()) {
        std::string all;
        for (const auto& c : k.choices) all += (all.empty() ? "" : ", ") + c;
        return {"", std::string(k.key) + ": unknown value '" + v + "' (expected one of " + all + ")"};
      }
      if (k.choices.empty() && v.find_first_of(" \t/\\") != std::string::npos) {
        return {"", std::string(k.key) + ": must be a single word"};
      }
      return {v, ""};
    case Kind::boolean:
      if (v != "true" && v != "false") return {"", std::string(k.key) + ": expected true or false"};
      return {v, ""};
    case Kind::path:
      return {v, ""};
  }
  return {v, ""};
}

struct Validator {
  const Scenario& s;
  std::vector<ScenarioDiagnostic>& errors;

  int line(const std::string& section, const std::string& key) const {
    const auto sec = s.lines.find(section);
    if (sec == s.lines.end()) return 0;
    const auto it = sec->second.find(key);
    return it == sec->second.end() ? 0 : it->second;
  }
  void fail(const std::string& section, const std::string& key, const std::string& msg) {
    errors.push_back({line(section, key), msg});
  }
  bool require(const std::string& section, const std::string& key, const std::string& why) {
    if (s.has(section, key)) return true;
    errors.push_back({0, "missing field [" + section + "] " + key + " (" + why + ")"});
    return false;
  }
};

void validate(const Scenario& s, std::vector<ScenarioDiagnostic>& errors) {
  Validator v{s, errors};
  const bool has_space = v.require("space", "builder", "every scenario names a space");
  const bool has_map = v.require("map", "builder", "every scenario names a map");
  const bool has_kind = v.require("experiment", "kind", "every scenario names an experiment");

  std::string space;
  if (has_space) {
    space = s.text("space", "builder");
    if (space == "fan") v.require("space", "n_max", "the fan space needs a truncation");
  }
  if (has_map && has_space) {
    const std::string map = s.text("map", "builder");
    const auto mismatch = [&](const std::string& need) {
      if (space != need) {
        v.fail("map", "builder", "map '" + map + "' acts on the " + need + " space, not '" + space + "'");
      }
    };
    if (map == "square" || map == "pl") mismatch("interval");
    if (map == "rotation") mismatch("circle");
    if (map == "fan") mismatch("fan");
    if (map == "rotation") v.require("map", "alpha", "rotation angle in turns");
    if (map == "pl" && v.require("map", "xs", "PL knots") && v.require("map", "ys", "PL values")) {
      const auto xs = s.reals("map", "xs");
      const auto ys = s.reals("map", "ys");
      if (xs.size() != ys.size() || xs.size() < 2) {
        v.fail("map", "ys", "xs and ys must have the same length (at least 2)");
      }
    }
  }
  if (!has_kind) return;

  const auto need = [&](std::initializer_list<const char*> keys, const std::string& why) {
    for (const char* key : keys) v.require("params", key, why);
  };
  switch (s.experiment()) {
    case ExperimentKind::entropy_profile:
      need({"eps_list", "n_list", "budget", "seed"}, "entropy-profile");
      if (s.flag("params", "inject_witness", false)) {
        need({"points", "k"}, "injected witness");
        if (space != "interval") v.fail("params", "inject_witness", "witness injection needs the interval");
      }
      break;
    case ExperimentKind::witness_example5:
      need({"k_list", "m_list"}, "witness-example5");
      if (space != "fan") v.fail("space", "builder", "witness-example5 needs the fan space");
      if (s.has("params", "k_list") && s.has("params", "m_list")) {
        const auto ks = s.integers("params", "k_list");
        const auto ms = s.integers("params", "m_list");
        if (ks.size() != ms.size()) v.fail("params", "m_list", "k_list and m_list must have equal length");
        if (space == "fan" && s.has("space", "n_max")) {
          const long n_max = s.integer("space", "n_max");
          for (long m : ms) {
            if (2 * m > n_max) v.fail("params", "m_list", "m_list entries need 2m <= n_max");
          }
        }
      }
      break;
    case ExperimentKind::witness_lemma32:
      need({"points", "k"}, "witness-lemma32");
      if (s.has("params", "points") && s.has("params", "k")) {
        const long depth = s.integer("params", "backward_depth", 64);
        const long k = s.integer("params", "k");
        if (4 * k > 3 * depth) v.fail("params", "backward_depth", "backward_depth must be >= 4k/3");
        if (static_cast<long>(s.reals("params", "points").size()) * k > 16) {
          v.fail("params", "k", "family size 2^(n k) exceeds 2^16");
        }
      }
      break;
    case ExperimentKind::liyorke_scan:
      need({"pair_count", "horizon", "tail", "delta_prox", "delta_asym", "seed"}, "liyorke-scan");
      if (s.text("params", "pair_region", "anywhere") == "wandering") {
        need({"delta", "steps"}, "pairs sampled from the wandering region");
      }
      break;
    case ExperimentKind::omega_report:
      need({"points", "burn_in", "window", "delta", "steps"}, "omega-report");
      break;
    case ExperimentKind::components_report:
      need({"delta", "steps"}, "components-report");
      break;
    case ExperimentKind::condition_check:
      need({"delta", "steps", "p_max", "q_max", "tol"}, "condition-check");
      break;
  }
  if (s.has("params", "horizon") && s.has("params", "tail") &&
      s.integer("params", "tail") >= s.integer("params", "horizon")) {
    v.fail("params", "tail", "tail must be smaller than horizon");
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::entropy_profile: return "entropy-profile";
    case ExperimentKind::witness_example5: return "witness-example5";
    case ExperimentKind::witness_lemma32: return "witness-lemma32";
    case ExperimentKind::liyorke_scan: return "liyorke-scan";
    case ExperimentKind::omega_report: return "omega-report";
    case ExperimentKind::components_report: return "components-report";
    case ExperimentKind::condition_check: return "condition-check";
  }
  return "unknown";
}

bool Scenario::has(const std::string& section, const std::string& key) const {
  const auto it = values.find(section);
  return it != values.end() && it->second.count(key) != 0;
}

const std::string& Scenario::text(const std::string& section, const std::string& key) const {
  const auto it = values.find(section);
  if (it == values.end() || it->second.count(key) == 0) {
    throw ParameterError("scenario has no [" + section + "] " + key);
  }
  return it->second.at(key);
}

std::string Scenario::text(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? text(section, key) : fallback;
}

double Scenario::real(const std::string& section, const std::string& key) const {
  const auto v = to_real(text(section, key));
  if (!v) throw ParameterError("[" + section + "] " + key + " is not a number");
  return *v;
}

double Scenario::real(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? real(section, key) : fallback;
}

long Scenario::integer(const std::string& section, const std::string& key) const {
  const auto v = to_integer(text(section, key));
  if (!v) throw ParameterError("[" + section + "] " + key + " is not an integer");
  return *v;
}

long Scenario::integer(const std::string& section, const std::string& key, long fallback) const {
  return has(section, key) ? integer(section, key) : fallback;
}

bool Scenario::flag(const std::string& section, const std::string& key, bool fallback) const {
  return has(section, key) ? text(section, key) == "true" : fallback;
}

std::vector<double> Scenario::reals(const std::string& section, const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : split_list(text(section, key))) {
    const auto v = to_real(item);
    if (!v) throw ParameterError("[" + section + "] " + key + " has a bad entry");
    out.push_back(*v);
  }
  return out;
}

std::vector<long> Scenario::integers(const std::string& section, const std::string& key) const {
  std::vector<long> out;
  for (const std::string& item : split_list(text(section, key))) {
    const auto v = to_integer(item);
    if (!v) throw ParameterError("[" + section + "] " + key + " has a bad entry");
    out.push_back(*v);
  }
  return out;
}

std::optional<std::uint64_t> Scenario::seed() const {
  if (!has("params", "seed")) return std::nullopt;
  const std::string& v = text("params", "seed");
  std::uint64_t x = 0;
  std::from_chars(v.data(), v.data() + v.size(), x);
  return x;
}

ExperimentKind Scenario::experiment() const {
  const std::string& k = text("experiment", "kind");
  for (ExperimentKind e :
       {ExperimentKind::entropy_profile, ExperimentKind::witness_example5,
        ExperimentKind::witness_lemma32, ExperimentKind::liyorke_scan, ExperimentKind::omega_report,
        ExperimentKind::components_report, ExperimentKind::condition_check}) {
    if (to_string(e) == k) return e;
  }
  throw ParameterError("unknown experiment '" + k + "'");
}

ScenarioParse parse_scenario(const std::string& text) {
  ScenarioParse out;
  Scenario s;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        out.errors.push_back({line_no, "malformed section header"});
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      const auto& order = section_order();
      if (std::find(order.begin(), order.end(), section) == order.end()) {
        out.errors.push_back({line_no, "unknown section [" + section + "]"});
        section.clear();
        continue;
      }
      if (s.values.count(section) != 0) {
        out.errors.push_back({line_no, "duplicate section [" + section + "]"});
      }
      s.values[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      out.errors.push_back({line_no, "expected 'key = value'"});
      continue;
    }
    if (section.empty()) {
      out.errors.push_back({line_no, "key outside of a known section"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const KeySpec* spec = find_spec(section, key);
    if (spec == nullptr) {
      out.errors.push_back({line_no, "unknown key '" + key + "' in [" + section + "]"});
      continue;
    }
    if (s.values[section].count(key) != 0) {
      out.errors.push_back({line_no, "duplicate key '" + key + "'"});
      continue;
    }
    auto [value, error] = check_value(*spec, line.substr(eq + 1));
    if (!error.empty()) {
      out.errors.push_back({line_no, error});
      continue;
    }
    s.values[section][key] = value;
    s.lines[section][key] = line_no;
  }
  if (out.errors.empty()) validate(s, out.errors);
  if (out.errors.empty()) out.scenario = std::move(s);
  return out;
}

std::string render_scenario(const Scenario& s) {
  std::string out;
  for (const std::string& section : section_order()) {
    const auto it = s.values.find(section);
    if (it == s.values.end()) continue;
    if (!out.empty()) out += "\n";
    out += "[" + section + "]\n";
    for (const auto& [key, value] : it->second) out += key + " = " + value + "\n";
  }
  return out;
}

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : render_scenario(s)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string join_errors(const std::vector<ScenarioDiagnostic>& errors) {
  std::string msg;
  for (const auto& e : errors) {
    if (!msg.empty()) msg += "\n";
    msg += e.line > 0 ? "line " + std::to_string(e.line) + ": " + e.message : e.message;
  }
  return msg;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<ScenarioDiagnostic> errors)
    : Error(join_errors(errors)), errors_(std::move(errors)) {}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  ScenarioParse p = parse_scenario(buf.str());
  if (!p.scenario) throw ScenarioError(std::move(p.errors));
  return std::move(*p.scenario);
}

}  // namespace hyperlab
