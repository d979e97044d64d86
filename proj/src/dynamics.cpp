#include "hyperlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperlab/errors.hpp"
#include "hyperlab/parallel.hpp"

namespace hyperlab {

namespace {

OmegaEstimate limit_estimate(const Homeo& h, GraphPoint x, int burn_in, int window, double delta,
                             bool backward) {
  if (burn_in < 1 || window < 1) throw ParameterError("limit estimate: burn_in and window must be >= 1");
  if (!(delta > 0.0)) throw ParameterError("limit estimate: delta must be positive");
  const Space& space = h.space();
  GraphPoint p = canonical(space, x);
  const auto step = [&](GraphPoint q) { return backward ? h.apply_inverse(q) : h.apply(q); };
  for (int j = 0; j < burn_in; ++j) p = step(p);
  std::vector<GraphPoint> kept;
  for (int j = 0; j <= window; ++j) {
    const bool far = std::all_of(kept.begin(), kept.end(), [&](GraphPoint q) {
      return point_distance(space, p, q) >= delta;
    });
    if (far) kept.push_back(p);
    p = step(p);
  }
  const double resolution = delta + (backward ? h.inverse_sup_error() : h.sup_error());
  return OmegaEstimate{canonical(space, x), CompactSet::points(space, kept, resolution), burn_in,
                       window, delta, resolution};
}

std::size_t net_pieces(double length, double spacing) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(length / spacing - 1e-12)));
}

}  // namespace

OmegaEstimate omega_limit_estimate(const Homeo& h, GraphPoint x, int burn_in, int window,
                                   double delta) {
  return limit_estimate(h, x, burn_in, window, delta, false);
}

OmegaEstimate alpha_limit_estimate(const Homeo& h, GraphPoint x, int burn_in, int window,
                                   double delta) {
  return limit_estimate(h, x, burn_in, window, delta, true);
}

SubsetMask nonwandering_estimate(const Homeo& h, double delta, int steps) {
  if (!(delta > 0.0)) throw ParameterError("nonwandering_estimate: delta must be positive");
  if (steps < 1) throw ParameterError("nonwandering_estimate: N must be >= 1");
  const Space& space = h.space();
  const double spacing = delta / 2.0;
  const std::vector<GraphPoint> grid = sample_net(space, spacing);
  std::vector<char> recurrent(grid.size(), 0);
  parallel_for(grid.size(), [&](std::size_t i) {
    GraphPoint p = grid[i];
    for (int j = 1; j <= steps; ++j) {
      p = h.apply(p);
      if (point_distance(space, p, grid[i]) < delta) {
        recurrent[i] = 1;
        return;
      }
    }
  });
  SubsetMask mask(space.edge_count(), delta);
  const auto add_cell = [&](EdgeId e, double t) {
    const double half = 0.5 / static_cast<double>(net_pieces(space.edge(e).length, spacing));
    mask.add(e, std::max(0.0, t - half), std::min(1.0, t + half));
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!recurrent[i]) continue;
    const GraphPoint p = grid[i];
    if (auto v = vertex_of(space, p)) {
      for (EdgeId e : space.incident(*v)) add_cell(e, space.edge(e).from == *v ? 0.0 : 1.0);
    } else {
      add_cell(p.edge, p.t);
    }
  }
  return canonicalize(space, std::move(mask));
}

std::vector<WanderingComponent> wandering_components(const Homeo& h, double delta, int steps) {
  const Space& space = h.space();
  const SubsetMask omega = nonwandering_estimate(h, delta, steps);
  std::vector<WanderingComponent> out;
  for (SubsetMask& closure : connected_components(space, omega)) {
    WanderingComponent c;
    const CompactSet set(space, closure);
    c.diameter = set_diameter(space, set);
    c.min_return_distance = std::numeric_limits<double>::infinity();
    CompactSet image = set;
    for (int j = 1; j <= steps; ++j) {
      image = induced_apply(h, image);
      const double d = hausdorff(space, image, set).value;
      c.min_return_distance = std::min(c.min_return_distance, d);
      if (!c.first_return && d <= delta) c.first_return = j;
    }
    c.closure = std::move(closure);
    out.push_back(std::move(c));
  }
  return out;
}

std::string to_string(PairLabel label) {
  switch (label) {
    case PairLabel::distal: return "DISTAL";
    case PairLabel::proximal_only: return "PROXIMAL_ONLY";
    case PairLabel::asymptotic: return "ASYMPTOTIC";
    case PairLabel::li_yorke: return "LI_YORKE";
  }
  return "UNKNOWN";
}

PairVerdict classify_pair(const Homeo& h, const CompactSet& a, const CompactSet& b, int horizon,
                          int tail, double delta_prox, double delta_asym,
                          const HausdorffOptions& options) {
  if (tail < 1 || horizon <= tail) throw ParameterError("classify_pair: need horizon > tail >= 1");
  if (!(delta_prox > 0.0) || !(delta_asym > 0.0)) {
    throw ParameterError("classify_pair: thresholds must be positive");
  }
  const Space& space = h.space();
  PairVerdict v;
  v.horizon = horizon;
  v.tail = tail;
  v.delta_prox = delta_prox;
  v.delta_asym = delta_asym;
  v.min_distance = std::numeric_limits<double>::infinity();
  CompactSet fa = a;
  CompactSet fb = b;
  for (int j = 0; j <= horizon; ++j) {
    if (j > 0) {
      fa = induced_apply(h, fa);
      fb = induced_apply(h, fb);
    }
    const double d = hausdorff(space, fa, fb, options).value;
    v.min_distance = std::min(v.min_distance, d);
    if (j >= horizon - tail) v.tail_max = std::max(v.tail_max, d);
  }
  const bool proximal = v.min_distance < delta_prox;
  const bool asymptotic = v.tail_max < delta_asym;
  if (asymptotic) {
    v.label = PairLabel::asymptotic;
  } else if (proximal && v.tail_max > kLiYorkeHysteresis * delta_asym) {
    v.label = PairLabel::li_yorke;
  } else if (proximal) {
    v.label = PairLabel::proximal_only;
  } else {
    v.label = PairLabel::distal;
  }
  return v;
}

NullFamilyReport null_family_check(const Space& space, const std::vector<CompactSet>& family,
                                   std::vector<double> eps_grid, const HausdorffOptions& options) {
  NullFamilyReport r;
  for (const CompactSet& a : family) r.diameters.push_back(set_diameter(space, a, options));
  std::sort(eps_grid.begin(), eps_grid.end());
  r.eps_grid = eps_grid;
  for (double eps : eps_grid) {
    r.large_counts.push_back(static_cast<std::size_t>(
        std::count_if(r.diameters.begin(), r.diameters.end(), [eps](double d) { return d >= eps; })));
  }
  for (std::size_t i = 1; i < r.large_counts.size(); ++i) {
    if (r.large_counts[i] > r.large_counts[i - 1]) r.null_consistent = false;
  }
  return r;
}

std::optional<int> detect_period(const Homeo& h, const CompactSet& a, int p_max, double tol,
                                 const HausdorffOptions& options) {
  if (p_max < 1) throw ParameterError("detect_period: p_max must be >= 1");
  CompactSet image = a;
  for (int p = 1; p <= p_max; ++p) {
    image = induced_apply(h, image);
    if (hausdorff(h.space(), image, a, options).value <= tol) return p;
  }
  return std::nullopt;
}

std::vector<ConditionViolation> check_condition_iii(const Space& space, const CompactSet& a,
                                                    const std::vector<SubsetMask>& components,
                                                    const HausdorffOptions& options) {
  std::vector<ConditionViolation> out;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const SubsetMask& c = components[i];
    if (c.empty()) continue;
    const double res = a.resolution() + c.resolution();
    if (set_gap(space, a.mask(), c) > res) continue;
    const double excess = directed_hausdorff(space, c, a.mask(), options);
    if (excess > res) {
      out.push_back({i, "component " + std::to_string(i) + " meets the periodic set but reaches " +
                            std::to_string(excess) + " outside it (resolution " +
                            std::to_string(res) + ")"});
    }
  }
  return out;
}

ConditionIvReport check_condition_iv(const Homeo& h, const CompactSet& a, const CompactSet& b,
                                     int q_max, double tol, const HausdorffOptions& options) {
  const Space& space = h.space();
  if (q_max < 1) throw ParameterError("check_condition_iv: q_max must be >= 1");
  const double res = a.resolution() + b.resolution();
  if (directed_hausdorff(space, a.mask(), b.mask(), options) > res) {
    throw ParameterError("check_condition_iv: A must be contained in B");
  }
  ConditionIvReport r;
  r.components = components_of_difference(space, b.mask(), a.mask());
  for (const SubsetMask& m : r.components) {
    const CompactSet c(space, m);
    std::optional<int> found;
    CompactSet image = c;
    for (int q = 1; q <= q_max && !found; ++q) {
      image = induced_apply(h, image);
      if (hausdorff(space, image, c, options).value <= tol) found = q;
    }
    if (!found) r.holds = false;
    r.returns.push_back(found);
  }
  return r;
}

}  // namespace hyperlab
