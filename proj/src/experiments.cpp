#include "hyperlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "hyperlab/dynamics.hpp"
#include "hyperlab/entropy.hpp"
#include "hyperlab/parallel.hpp"
#include "json.hpp"

#ifndef HYPERLAB_VERSION
#define HYPERLAB_VERSION "0.0.0"
#endif

namespace hyperlab {

using Json = nlohmann::ordered_json;

std::shared_ptr<const Space> scenario_space(const Scenario& s) {
  const std::string b = s.text("space", "builder");
  if (b == "interval") return build_interval();
  if (b == "circle") return build_circle(s.real("space", "circumference", 1.0));
  if (b == "star") {
    return build_star(static_cast<int>(s.integer("space", "branches", 3)),
                      s.real("space", "branch_length", 1.0));
  }
  if (b == "fan") return build_fan_space({static_cast<int>(s.integer("space", "n_max"))});
  throw ParameterError("unknown space builder '" + b + "'");
}

Homeo scenario_map(const Scenario& s, std::shared_ptr<const Space> space) {
  const std::string b = s.text("map", "builder");
  if (b == "identity") return build_identity(space);
  if (b == "square") return build_square_map(space);
  if (b == "rotation") return build_rotation(space, s.real("map", "alpha"));
  if (b == "fan") return build_fan_map(space);
  if (b == "pl") return build_interval_map(space, s.reals("map", "xs"), s.reals("map", "ys"));
  throw ParameterError("unknown map builder '" + b + "'");
}

GraphPoint scenario_point(const Space& space, double position) {
  if (space.kind() == SpaceKind::circle) return circle_point(space, position);
  return canonical(space, {0, position});
}

namespace {

Json mask_json(const SubsetMask& m) {
  Json out = Json::array();
  for (EdgeId e = 0; e < m.edge_count(); ++e) {
    for (const Interval& iv : m.on(e)) out.push_back(Json::array({e, iv.lo, iv.hi}));
  }
  return out;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

double mask_length(const Space& space, const SubsetMask& m) {
  double total = 0.0;
  for (EdgeId e = 0; e < m.edge_count(); ++e) {
    for (const Interval& iv : m.on(e)) total += (iv.hi - iv.lo) * space.edge(e).length;
  }
  return total;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Streams records to JSONL (flushed per line) and keeps them for the CSV.
class RecordSink {
 public:
  RecordSink(const std::string& jsonl, const std::string& csv) : csv_path_(csv) {
    out_.open(jsonl, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error("cannot write result file '" + jsonl + "'");
  }

  void header(const Json& h) { emit(h); }

  void record(Json r) {
    emit(r);
    rows_.push_back(std::move(r));
  }

  std::size_t count() const { return rows_.size(); }

  void finish() {
    std::vector<std::string> columns;
    for (const Json& r : rows_) {
      for (auto it = r.begin(); it != r.end(); ++it) {
        if (std::find(columns.begin(), columns.end(), it.key()) == columns.end()) {
          columns.push_back(it.key());
        }
      }
    }
    std::ofstream csv(csv_path_, std::ios::binary | std::ios::trunc);
    if (!csv) throw Error("cannot write CSV file '" + csv_path_ + "'");
    for (std::size_t c = 0; c < columns.size(); ++c) csv << (c ? "," : "") << columns[c];
    csv << "\n";
    for (const Json& r : rows_) {
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) csv << ",";
        if (!r.contains(columns[c])) continue;
        const Json& v = r[columns[c]];
        csv << cell(v.is_string() ? v.get<std::string>() : v.dump());
      }
      csv << "\n";
    }
    if (!csv) throw Error("failed writing CSV file '" + csv_path_ + "'");
  }

 private:
  void emit(const Json& j) {
    out_ << j.dump() << "\n";
    out_.flush();
    if (!out_) throw Error("failed writing result record");
  }

  static std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }

  std::ofstream out_;
  std::string csv_path_;
  std::vector<Json> rows_;
};

struct Context {
  const Scenario& s;
  std::shared_ptr<const Space> space;
  const Homeo& h;
  RecordSink& sink;
  std::vector<std::string>& failures;

  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void run_entropy_profile(Context& c) {
  const Scenario& s = c.s;
  const auto eps = s.reals("params", "eps_list");
  std::vector<int> ns;
  for (long n : s.integers("params", "n_list")) ns.push_back(static_cast<int>(n));
  const double net_delta =
      s.real("params", "net_delta", *std::min_element(eps.begin(), eps.end()));
  const NetMode mode =
      s.text("params", "net_mode", "connected") == "full" ? NetMode::full : NetMode::connected;
  const SepMethod method =
      s.text("params", "method", "exact") == "greedy" ? SepMethod::greedy : SepMethod::exact;
  HyperNetOptions net_opts;
  net_opts.max_points = static_cast<int>(s.integer("params", "max_points", 6));
  const HyperNet net = hyper_net(*c.space, net_delta, mode,
                                 static_cast<std::size_t>(s.integer("params", "budget")),
                                 *s.seed(), net_opts);
  std::vector<CompactSet> family = net.elements;
  c.sink.record(Json{{"record", "net"},
                     {"mode", mode == NetMode::full ? "full" : "connected"},
                     {"delta", net_delta},
                     {"size", net.elements.size()}});
  if (s.flag("params", "inject_witness", false)) {
    std::vector<GraphPoint> seeds;
    for (double p : s.reals("params", "points")) seeds.push_back(scenario_point(*c.space, p));
    Lemma32Options lo;
    lo.backward_depth = static_cast<int>(s.integer("params", "backward_depth", 64));
    const Lemma32Witness w = witness_lemma32(c.h, seeds, static_cast<int>(s.integer("params", "k")), lo);
    if (!w.accepted) throw Error("injected witness refused: " + w.diagnostic);
    family.insert(family.end(), w.family.begin(), w.family.end());
    c.sink.record(Json{{"record", "injected_witness"},
                       {"size", w.family.size()},
                       {"margin", w.margin},
                       {"horizon", w.horizon}});
  }
  ProfileOptions po;
  po.bundle.hausdorff.spacing = s.real("params", "spacing", 0.0);
  const EntropyProfile p = entropy_profile(c.h, family, eps, ns, method, po);
  for (const ProfileEntry& e : p.entries) {
    c.sink.record(Json{{"record", "sep"},
                       {"eps", e.eps},
                       {"n", e.n},
                       {"count", e.sep.count},
                       {"method", to_string(e.sep.method)},
                       {"fell_back", e.sep.fell_back}});
  }
  for (const ProfileSlope& sl : p.slopes) {
    c.sink.record(Json{{"record", "slope"}, {"eps", sl.eps}, {"slope", optional_json(sl.slope)}});
    if (s.has("experiment", "max_slope")) {
      const double lim = s.real("experiment", "max_slope");
      c.check(sl.slope && *sl.slope < lim,
              "slope at eps=" + fmt(sl.eps) + " is not below " + fmt(lim));
    }
    if (s.has("experiment", "min_slope")) {
      const double lim = s.real("experiment", "min_slope");
      c.check(sl.slope && *sl.slope >= lim,
              "slope at eps=" + fmt(sl.eps) + " is below " + fmt(lim));
    }
  }
  for (const std::string& v : profile_monotonicity_violations(p)) c.check(false, v);
}

void run_witness_example5(Context& c) {
  const auto ks = c.s.integers("params", "k_list");
  const auto ms = c.s.integers("params", "m_list");
  std::map<long, std::vector<std::pair<long, double>>> bounds_by_m;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const int k = static_cast<int>(ks[i]);
    const int m = static_cast<int>(ms[i]);
    const Example5Witness w = witness_example5(*c.space, k, m);
    const bool connected = std::all_of(w.family.begin(), w.family.end(),
                                       [](const CompactSet& a) { return a.connected(); });
    const SeparationCheck chk = verify_separated(c.h, w.family, 2 * m, 1.0 / k);
    const double bound = witness_bound(w.family.size(), 2 * m);
    const double expected = std::pow(static_cast<double>(k), 2 * m);
    c.sink.record(Json{{"record", "example5"},
                       {"k", k},
                       {"m", m},
                       {"n", 2 * m},
                       {"cardinality", w.family.size()},
                       {"expected_cardinality", expected},
                       {"all_connected", connected},
                       {"eps_measured", chk.eps_measured},
                       {"error_bound", chk.error_bound},
                       {"eps_claimed", 1.0 / k},
                       {"meets_claim", chk.eps_measured >= 1.0 / k},
                       {"bound", bound},
                       {"ln_k", std::log(static_cast<double>(k))}});
    const std::string tag = "k=" + std::to_string(k) + ", m=" + std::to_string(m) + ": ";
    c.check(static_cast<double>(w.family.size()) == expected, tag + "cardinality is not k^(2m)");
    c.check(connected, tag + "a family member is not connected");
    c.check(chk.eps_measured > 0.0, tag + "measured separation is not positive");
    c.check(std::abs(bound - std::log(static_cast<double>(k))) <= 1e-12,
            tag + "bound differs from ln k");
    bounds_by_m[m].emplace_back(k, bound);
  }
  for (auto& [m, list] : bounds_by_m) {
    std::sort(list.begin(), list.end());
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i].first == list[i - 1].first) continue;
      c.check(list[i].second > list[i - 1].second,
              "bounds do not increase with k at m=" + std::to_string(m));
    }
  }
}

void run_witness_lemma32(Context& c) {
  std::vector<GraphPoint> seeds;
  const auto positions = c.s.reals("params", "points");
  for (double p : positions) seeds.push_back(scenario_point(*c.space, p));
  const int k = static_cast<int>(c.s.integer("params", "k"));
  Lemma32Options lo;
  lo.backward_depth = static_cast<int>(c.s.integer("params", "backward_depth", 64));
  const Lemma32Witness w = witness_lemma32(c.h, seeds, k, lo);
  Json r{{"record", "lemma32"},
         {"points", positions},
         {"k", k},
         {"accepted", w.accepted},
         {"diagnostic", w.diagnostic},
         {"margin", w.margin},
         {"alpha_resolution", w.alpha_resolution},
         {"cardinality", w.family.size()}};
  c.check(w.accepted, "witness refused: " + w.diagnostic);
  if (w.accepted) {
    const SeparationCheck chk = verify_separated(c.h, w.family, k, w.margin);
    const double bound = witness_bound(w.family.size(), k);
    const double target = static_cast<double>(seeds.size()) * std::numbers::ln2;
    r["eps_measured"] = chk.eps_measured;
    r["error_bound"] = chk.error_bound;
    r["bound"] = bound;
    r["n_ln2"] = target;
    c.check(w.family.size() == (std::size_t{1} << (seeds.size() * static_cast<std::size_t>(k))),
            "family size is not 2^(n k)");
    c.check(chk.eps_measured >= w.margin, "measured separation below the validator margin");
    c.check(bound >= target - 0.05, "derived slope below n ln 2 - 0.05");
  }
  c.sink.record(std::move(r));
}

std::pair<EdgeId, Interval> random_arc(std::mt19937_64& rng, const Space& space,
                                       const std::vector<std::pair<EdgeId, Interval>>& region,
                                       double arc_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EdgeId e = 0;
  double a = 0.0, b = 1.0;
  if (region.empty()) {
    e = static_cast<EdgeId>(rng() % space.edge_count());
  } else {
    const auto& pick = region[rng() % region.size()];
    e = pick.first;
    a = pick.second.lo;
    b = pick.second.hi;
  }
  // Stay strictly inside the region so closures do not reach its ends.
  const double pad = 1e-3 * (b - a);
  const double lo = a + pad + (b - a - 2 * pad) * u(rng);
  const double hi = std::min(b - pad, lo + (b - a) * arc_max * u(rng));
  return {e, Interval{lo, std::max(lo, hi)}};
}

void run_liyorke_scan(Context& c) {
  const Scenario& s = c.s;
  const auto count = static_cast<std::size_t>(s.integer("params", "pair_count"));
  const int horizon = static_cast<int>(s.integer("params", "horizon"));
  const int tail = static_cast<int>(s.integer("params", "tail"));
  const double dprox = s.real("params", "delta_prox");
  const double dasym = s.real("params", "delta_asym");
  const double arc_max = s.real("params", "arc_max", 0.5);
  std::vector<std::pair<EdgeId, Interval>> region;
  if (s.text("params", "pair_region", "anywhere") == "wandering") {
    const auto comps = wandering_components(c.h, s.real("params", "delta"),
                                            static_cast<int>(s.integer("params", "steps")));
    if (comps.empty()) throw Error("no wandering region to sample pairs from");
    for (EdgeId e = 0; e < comps[0].closure.edge_count(); ++e) {
      for (const Interval& iv : comps[0].closure.on(e)) {
        if (iv.hi > iv.lo) region.emplace_back(e, iv);
      }
    }
  }
  std::mt19937_64 rng(*s.seed());
  std::vector<std::pair<CompactSet, CompactSet>> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    const auto a = random_arc(rng, *c.space, region, arc_max);
    const auto b = random_arc(rng, *c.space, region, arc_max);
    pairs.emplace_back(CompactSet::arc(*c.space, a.first, a.second.lo, a.second.hi),
                       CompactSet::arc(*c.space, b.first, b.second.lo, b.second.hi));
  }
  HausdorffOptions ho;
  ho.spacing = s.real("params", "spacing", 0.0);
  std::vector<PairVerdict> verdicts(count);
  parallel_for(count, [&](std::size_t i) {
    verdicts[i] = classify_pair(c.h, pairs[i].first, pairs[i].second, horizon, tail, dprox, dasym, ho);
  });
  std::map<std::string, std::size_t> tally{
      {"DISTAL", 0}, {"PROXIMAL_ONLY", 0}, {"ASYMPTOTIC", 0}, {"LI_YORKE", 0}};
  for (std::size_t i = 0; i < count; ++i) {
    const std::string label = to_string(verdicts[i].label);
    ++tally[label];
    c.sink.record(Json{{"record", "pair"},
                       {"index", i},
                       {"a", mask_json(pairs[i].first.mask())},
                       {"b", mask_json(pairs[i].second.mask())},
                       {"label", label},
                       {"min_distance", verdicts[i].min_distance},
                       {"tail_max", verdicts[i].tail_max}});
  }
  Json t{{"record", "tally"}, {"pairs", count}, {"horizon", horizon}, {"tail", tail},
         {"delta_prox", dprox}, {"delta_asym", dasym}};
  for (const auto& [label, n] : tally) t[label] = n;
  c.sink.record(std::move(t));
  if (s.has("experiment", "expect_label")) {
    const std::string want = s.text("experiment", "expect_label");
    c.check(tally[want] == count, std::to_string(count - tally[want]) + " of " +
                                      std::to_string(count) + " pairs are not " + want);
  } else {
    c.check(tally["LI_YORKE"] == 0, std::to_string(tally["LI_YORKE"]) + " LI_YORKE verdicts");
  }
}

void run_omega_report(Context& c) {
  const Scenario& s = c.s;
  const int burn_in = static_cast<int>(s.integer("params", "burn_in"));
  const int window = static_cast<int>(s.integer("params", "window"));
  const double delta = s.real("params", "delta");
  for (double p : s.reals("params", "points")) {
    const GraphPoint x = scenario_point(*c.space, p);
    for (bool forward : {true, false}) {
      const OmegaEstimate est = forward ? omega_limit_estimate(c.h, x, burn_in, window, delta)
                                        : alpha_limit_estimate(c.h, x, burn_in, window, delta);
      c.sink.record(Json{{"record", forward ? "omega" : "alpha"},
                         {"position", p},
                         {"points", est.estimate.mask().interval_count()},
                         {"resolution", est.resolution},
                         {"diameter", set_diameter(*c.space, est.estimate)},
                         {"estimate", mask_json(est.estimate.mask())}});
    }
  }
  const SubsetMask omega =
      nonwandering_estimate(c.h, delta, static_cast<int>(s.integer("params", "steps")));
  const bool covers = directed_hausdorff(*c.space, SubsetMask::full(*c.space), omega) <= 1e-12;
  double total = 0.0;
  for (const Edge& e : c.space->edges()) total += e.length;
  c.sink.record(Json{{"record", "nonwandering"},
                     {"delta", delta},
                     {"steps", s.integer("params", "steps")},
                     {"covers_space", covers},
                     {"length_fraction", mask_length(*c.space, omega) / total},
                     {"mask", mask_json(omega)}});
  if (s.has("experiment", "expect_cover")) {
    const bool want = s.flag("experiment", "expect_cover", false);
    c.check(covers == want, want ? "non-wandering estimate does not cover the space"
                                 : "non-wandering estimate covers the space");
  }
}

/// Components of the non-wandering mask itself.
std::vector<SubsetMask> omega_pieces(const Space& space, const SubsetMask& omega) {
  return components_of_difference(space, omega, SubsetMask(space.edge_count()));
}

void run_components_report(Context& c) {
  const double delta = c.s.real("params", "delta");
  const int steps = static_cast<int>(c.s.integer("params", "steps"));
  const SubsetMask omega = nonwandering_estimate(c.h, delta, steps);
  const auto pieces = omega_pieces(*c.space, omega);
  const auto comps = wandering_components(c.h, delta, steps);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const WanderingComponent& w = comps[i];
    std::size_t cells = 0;
    for (const SubsetMask& p : pieces) {
      if (set_gap(*c.space, p, w.closure) <= 1e-12) ++cells;
    }
    c.sink.record(Json{{"record", "component"},
                       {"index", i},
                       {"closure", mask_json(w.closure)},
                       {"diameter", w.diameter},
                       {"min_return_distance", w.min_return_distance},
                       {"first_return", optional_json(w.first_return)},
                       {"omega_cells", cells}});
    if (c.s.has("experiment", "max_omega_cells")) {
      const long lim = c.s.integer("experiment", "max_omega_cells");
      c.check(static_cast<long>(cells) <= lim, "component " + std::to_string(i) + " meets " +
                                                   std::to_string(cells) + " omega cells");
    }
  }
  c.sink.record(Json{{"record", "components"},
                     {"delta", delta},
                     {"steps", steps},
                     {"count", comps.size()},
                     {"omega_pieces", pieces.size()}});
  if (c.s.has("experiment", "expect_components")) {
    const long want = c.s.integer("experiment", "expect_components");
    c.check(static_cast<long>(comps.size()) == want,
            "found " + std::to_string(comps.size()) + " components, expected " + std::to_string(want));
  }
}

void run_condition_check(Context& c) {
  const Scenario& s = c.s;
  const double delta = s.real("params", "delta");
  const int steps = static_cast<int>(s.integer("params", "steps"));
  const double tol = s.real("params", "tol");
  const SubsetMask omega = nonwandering_estimate(c.h, delta, steps);
  const auto wandering = connected_components(*c.space, omega);
  const auto pieces = omega_pieces(*c.space, omega);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const CompactSet a(*c.space, pieces[i]);
    const auto period =
        detect_period(c.h, a, static_cast<int>(s.integer("params", "p_max")), tol);
    Json r{{"record", "periodic_candidate"},
           {"index", i},
           {"set", mask_json(pieces[i])},
           {"period", optional_json(period)}};
    if (period) {
      const auto v = check_condition_iii(*c.space, a, wandering);
      Json msgs = Json::array();
      for (const auto& x : v) msgs.push_back(x.message);
      r["condition_iii"] = msgs;
      violations += v.size();
    }
    c.sink.record(std::move(r));
  }
  c.check(violations == 0, std::to_string(violations) + " condition (iii) violations");

  // Returns of components are judged at the estimate's own resolution too.
  const ConditionIvReport iv = check_condition_iv(c.h, CompactSet(*c.space, omega),
                                                  CompactSet::whole(*c.space),
                                                  static_cast<int>(s.integer("params", "q_max")),
                                                  tol + delta);
  Json returns = Json::array();
  Json comps = Json::array();
  for (std::size_t i = 0; i < iv.components.size(); ++i) {
    comps.push_back(mask_json(iv.components[i]));
    returns.push_back(optional_json(iv.returns[i]));
  }
  c.sink.record(Json{{"record", "condition_iv"},
                     {"components", comps},
                     {"returns", returns},
                     {"return_tol", tol + delta},
                     {"holds", iv.holds}});
  c.check(iv.holds, "condition (iv) fails: a component has no return within q_max");
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();
  const auto space = scenario_space(s);
  const Homeo h = scenario_map(s, space);

  const fs::path dir =
      options.out_dir.empty() ? fs::path(s.text("output", "dir", "results")) : fs::path(options.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  const std::string name = s.text("output", "name", options.default_name);
  RunResult result;
  result.jsonl_path = (dir / (name + ".jsonl")).string();
  result.csv_path = (dir / (name + ".csv")).string();

  RecordSink sink(result.jsonl_path, result.csv_path);
  HausdorffOptions ho;
  ho.spacing = s.real("params", "spacing", 0.0);
  Json resolutions{{"map_sup_error", h.sup_error()},
                   {"map_inverse_sup_error", h.inverse_sup_error()},
                   {"hausdorff_spacing", effective_spacing(*space, ho)}};
  if (s.has("params", "delta")) resolutions["delta"] = s.real("params", "delta");
  const auto seed = s.seed();
  sink.header(Json{{"record", "header"},
                   {"tool", "hyperlab"},
                   {"version", HYPERLAB_VERSION},
                   {"experiment", to_string(s.experiment())},
                   {"scenario_hash", scenario_hash(s)},
                   {"seed", seed ? Json(*seed) : Json(nullptr)},
                   {"space", space->name()},
                   {"map", h.name()},
                   {"resolutions", resolutions},
                   {"scenario", render_scenario(s)},
                   {"created", utc_timestamp()}});

  Context c{s, space, h, sink, result.failures};
  switch (s.experiment()) {
    case ExperimentKind::entropy_profile: run_entropy_profile(c); break;
    case ExperimentKind::witness_example5: run_witness_example5(c); break;
    case ExperimentKind::witness_lemma32: run_witness_lemma32(c); break;
    case ExperimentKind::liyorke_scan: run_liyorke_scan(c); break;
    case ExperimentKind::omega_report: run_omega_report(c); break;
    case ExperimentKind::components_report: run_components_report(c); break;
    case ExperimentKind::condition_check: run_condition_check(c); break;
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (s.has("experiment", "max_seconds")) {
    c.check(result.seconds < s.real("experiment", "max_seconds"),
            "run took longer than " + s.text("experiment", "max_seconds") + " s");
  }
  Json failures = Json::array();
  for (const auto& f : result.failures) failures.push_back(f);
  sink.record(Json{{"record", "assertions"}, {"passed", result.failures.empty()}, {"failures", failures}});
  sink.finish();
  result.records = sink.count();
  return result;
}

namespace {

std::string cell_text(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_array()) return "[" + std::to_string(v.size()) + " items]";
  return v.dump();
}

void print_table(std::ostream& out, const std::vector<std::string>& head,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  const auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      out << (c ? "  " : "") << r[c] << std::string(width[c] - r[c].size(), ' ');
    }
    out << "\n";
  };
  line(head);
  std::vector<std::string> rule;
  for (std::size_t w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& r : rows) line(r);
}

}  // namespace

void write_report(const std::string& result_file, std::ostream& out) {
  std::ifstream in(result_file, std::ios::binary);
  if (!in) throw Error("cannot read result file '" + result_file + "'");
  std::vector<Json> records;
  std::optional<Json> header;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(result_file + ":" + std::to_string(line_no) + ": invalid record: " + e.what());
    }
    if (j.value("record", "") == "header") {
      header = std::move(j);
    } else {
      records.push_back(std::move(j));
    }
  }
  if (header) {
    out << "experiment " << header->value("experiment", "?") << " on " << header->value("space", "?")
        << " under " << header->value("map", "?") << " (scenario " << header->value("scenario_hash", "?")
        << ", version " << header->value("version", "?") << ")\n";
  }
  if (records.empty()) {
    out << "no records\n";
    return;
  }

  std::vector<std::string> kinds;
  for (const Json& r : records) {
    const std::string k = r.value("record", "?");
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  for (const std::string& kind : kinds) {
    out << "\n" << kind << "\n";
    if (kind == "sep") {
      // Counts: one row per eps, one column per n.
      std::vector<double> eps;
      std::vector<long> ns;
      std::map<std::pair<double, long>, std::string> cells;
      for (const Json& r : records) {
        if (r.value("record", "") != kind) continue;
        const double e = r["eps"].get<double>();
        const long n = r["n"].get<long>();
        if (std::find(eps.begin(), eps.end(), e) == eps.end()) eps.push_back(e);
        if (std::find(ns.begin(), ns.end(), n) == ns.end()) ns.push_back(n);
        cells[{e, n}] = cell_text(r["count"]) + (r.value("fell_back", false) ? "*" : "");
      }
      std::vector<std::string> head{"eps \\ n"};
      for (long n : ns) head.push_back(std::to_string(n));
      std::vector<std::vector<std::string>> rows;
      for (double e : eps) {
        std::vector<std::string> row{fmt(e)};
        for (long n : ns) row.push_back(cells.count({e, n}) ? cells[{e, n}] : "-");
        rows.push_back(std::move(row));
      }
      print_table(out, head, rows);
      continue;
    }
    if (kind == "pair") {
      std::size_t n = 0;
      for (const Json& r : records) n += r.value("record", "") == kind;
      out << n << " pair verdicts (see tally)\n";
      continue;
    }
    std::vector<std::string> head;
    for (const Json& r : records) {
      if (r.value("record", "") != kind) continue;
      for (auto it = r.begin(); it != r.end(); ++it) {
        if (it.key() == "record") continue;
        if (std::find(head.begin(), head.end(), it.key()) == head.end()) head.push_back(it.key());
      }
    }
    std::vector<std::vector<std::string>> rows;
    for (const Json& r : records) {
      if (r.value("record", "") != kind) continue;
      std::vector<std::string> row;
      for (const std::string& h : head) row.push_back(r.contains(h) ? cell_text(r[h]) : "-");
      rows.push_back(std::move(row));
    }
    print_table(out, head, rows);
    if (kind == "assertions") {
      for (const Json& r : records) {
        if (r.value("record", "") != kind) continue;
        for (const Json& f : r["failures"]) out << "  FAILED: " << f.get<std::string>() << "\n";
      }
    }
  }
}

}  // namespace hyperlab
