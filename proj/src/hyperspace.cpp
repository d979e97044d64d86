#include "hyperlab/hyperspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <tuple>

#include "hyperlab/errors.hpp"

namespace hyperlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Segment {
  Vec2 a;
  Vec2 b;
};

double point_segment_distance(Vec2 p, const Segment& s) {
  const double dx = s.b.x - s.a.x;
  const double dy = s.b.y - s.a.y;
  const double len2 = dx * dx + dy * dy;
  double u = 0.0;
  if (len2 > 0.0) u = std::clamp(((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / len2, 0.0, 1.0);
  return planar_distance(p, {s.a.x + u * dx, s.a.y + u * dy});
}

double cross(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

double segment_segment_distance(const Segment& s, const Segment& t) {
  const double d1 = cross(s.a, s.b, t.a);
  const double d2 = cross(s.a, s.b, t.b);
  const double d3 = cross(t.a, t.b, s.a);
  const double d4 = cross(t.a, t.b, s.b);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return 0.0;
  }
  return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                   point_segment_distance(t.a, s), point_segment_distance(t.b, s)});
}

/// Pieces of the planar image of mask intervals.
std::vector<Segment> mask_segments(const Space& space, const SubsetMask& mask) {
  std::vector<Segment> out;
  for (EdgeId e = 0; e < mask.edge_count(); ++e) {
    const auto& poly = space.edge(e).polyline;
    if (mask.on(e).empty()) continue;
    std::vector<double> corner_t(poly.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 1; i < poly.size(); ++i) {
      total += planar_distance(poly[i - 1], poly[i]);
      corner_t[i] = total;
    }
    for (double& c : corner_t) c = total > 0.0 ? c / total : 0.0;
    for (const Interval& iv : mask.on(e)) {
      Vec2 prev = space.embed({e, iv.lo});
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        if (corner_t[i] > iv.lo && corner_t[i] < iv.hi) {
          out.push_back({prev, poly[i]});
          prev = poly[i];
        }
      }
      out.push_back({prev, space.embed({e, iv.hi})});
    }
  }
  return out;
}

/// Sample parameters of one interval at the given arclength spacing,
/// endpoints included.
std::vector<double> interval_samples(const Interval& iv, double length, double spacing) {
  if (iv.hi - iv.lo <= 0.0) return {iv.lo};
  const double arc = (iv.hi - iv.lo) * length;
  const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(arc / spacing - 1e-12)));
  std::vector<double> out(pieces + 1);
  for (std::size_t i = 0; i <= pieces; ++i) {
    out[i] = iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / static_cast<double>(pieces);
  }
  out.back() = iv.hi;
  return out;
}

std::vector<GraphPoint> mask_samples(const Space& space, const SubsetMask& mask, double spacing) {
  std::vector<GraphPoint> out;
  for (EdgeId e = 0; e < mask.edge_count(); ++e) {
    for (const Interval& iv : mask.on(e)) {
      for (double t : interval_samples(iv, space.edge(e).length, spacing)) out.push_back({e, t});
    }
  }
  return out;
}

/// Geodesic distance from every vertex to the mask.
std::vector<double> vertex_distances_to(const Space& space, const SubsetMask& mask) {
  std::vector<double> out(space.vertex_count(), kInf);
  for (EdgeId e = 0; e < mask.edge_count(); ++e) {
    const auto& list = mask.on(e);
    if (list.empty()) continue;
    const Edge& ed = space.edge(e);
    const double to_from = list.front().lo * ed.length;
    const double to_to = (1.0 - list.back().hi) * ed.length;
    for (VertexId v = 0; v < space.vertex_count(); ++v) {
      out[v] = std::min({out[v], space.vertex_distance(v, ed.from) + to_from,
                         space.vertex_distance(v, ed.to) + to_to});
    }
  }
  return out;
}

/// On an edge of length L the distance to a set is, between consecutive
/// pieces of the set, the minimum of one rising line L*s + rise and one
/// falling line -L*s + fall (or zero inside the set).
struct Region {
  double lo;
  double hi;
  bool inside;
  double rise;
  double fall;
};

std::vector<Region> edge_regions(const Space& space, EdgeId e, const SubsetMask& b,
                                 const std::vector<double>& db) {
  const Edge& ed = space.edge(e);
  const double L = ed.length;
  const double from_u = db[ed.from];
  const double via_v = L + db[ed.to];
  const auto& list = b.on(e);
  std::vector<Region> out;
  if (list.empty()) {
    out.push_back({0.0, 1.0, false, from_u, via_v});
    return out;
  }
  out.push_back({0.0, list.front().lo, false, from_u, std::min(L * list.front().lo, via_v)});
  for (std::size_t k = 0; k < list.size(); ++k) {
    out.push_back({list[k].lo, list[k].hi, true, 0.0, 0.0});
    const double next_lo = k + 1 < list.size() ? list[k + 1].lo : 1.0;
    const double fall = k + 1 < list.size() ? std::min(L * next_lo, via_v) : via_v;
    out.push_back({list[k].hi, next_lo, false, std::min(-L * list[k].hi, from_u), fall});
  }
  return out;
}

double region_max(const Region& r, double L, double p, double q) {
  if (r.inside) return 0.0;
  const double s = std::clamp((r.fall - r.rise) / (2.0 * L), p, q);
  return std::max(0.0, std::min(L * s + r.rise, -L * s + r.fall));
}

double region_value(const Region& r, double L, double s) {
  if (r.inside) return 0.0;
  return std::max(0.0, std::min(L * s + r.rise, -L * s + r.fall));
}

double directed_geodesic(const Space& space, const SubsetMask& a, const SubsetMask& b) {
  const std::vector<double> db = vertex_distances_to(space, b);
  double best = 0.0;
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& list = a.on(e);
    if (list.empty()) continue;
    const double L = space.edge(e).length;
    const std::vector<Region> regions = edge_regions(space, e, b, db);
    std::size_t r = 0;
    for (const Interval& iv : list) {
      while (r + 1 < regions.size() && regions[r].hi < iv.lo) ++r;
      for (std::size_t k = r; k < regions.size() && regions[k].lo <= iv.hi; ++k) {
        const double p = std::max(iv.lo, regions[k].lo);
        const double q = std::min(iv.hi, regions[k].hi);
        if (p > q) continue;
        best = std::max(best, region_max(regions[k], L, p, q));
      }
    }
  }
  return best;
}

double directed_euclidean(const Space& space, const SubsetMask& a, const SubsetMask& b,
                          double spacing) {
  const std::vector<Segment> target = mask_segments(space, b);
  double best = 0.0;
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    const auto& list = a.on(e);
    if (list.empty()) continue;
    const Edge& ed = space.edge(e);
    const bool straight = ed.polyline.size() == 2;
    for (const Interval& iv : list) {
      for (double t : interval_samples(iv, ed.length, spacing)) {
        const Vec2 p = straight ? Vec2{ed.polyline[0].x + t * (ed.polyline[1].x - ed.polyline[0].x),
                                       ed.polyline[0].y + t * (ed.polyline[1].y - ed.polyline[0].y)}
                                : space.embed({e, t});
        double near = kInf;
        for (const Segment& s : target) {
          near = std::min(near, point_segment_distance(p, s));
          if (near <= best) break;
        }
        best = std::max(best, near);
      }
    }
  }
  return best;
}

double directed_sampled(const Space& space, const SubsetMask& a, const SubsetMask& b,
                        double spacing) {
  const auto as = mask_samples(space, a, spacing);
  const auto bs = mask_samples(space, b, spacing);
  double best = 0.0;
  for (const GraphPoint& p : as) {
    double near = kInf;
    for (const GraphPoint& q : bs) {
      near = std::min(near, point_distance(space, p, q));
      if (near <= best) break;
    }
    best = std::max(best, near);
  }
  return best;
}

void require_nonempty(const SubsetMask& m) {
  if (m.empty()) throw DomainError("compact set must be non-empty");
}

CompactSet map_set(const Space& space, const EdgeMap& map, const SubsetMask& mask,
                   double lipschitz, double sup_error) {
  SubsetMask out(space.edge_count());
  for (EdgeId e = 0; e < mask.edge_count(); ++e) {
    for (const Interval& iv : mask.on(e)) {
      for (const MapPiece& piece : map[e]) {
        const double x0 = std::max(iv.lo, piece.lo);
        const double x1 = std::min(iv.hi, piece.hi);
        if (x0 > x1) continue;
        out.add(piece.target, std::clamp(piece.curve(x0), 0.0, 1.0),
                std::clamp(piece.curve(x1), 0.0, 1.0));
      }
    }
  }
  out.set_resolution(std::min(space.diameter(), mask.resolution() * lipschitz + sup_error));
  return CompactSet(space, canonicalize(space, std::move(out)));
}

}  // namespace

CompactSet::CompactSet(const Space& space, SubsetMask mask) {
  require_nonempty(mask);
  if (mask.edge_count() != space.edge_count()) throw DomainError("mask does not match the space");
  mask_ = canonicalize(space, std::move(mask));
  connected_ = mask_connected(space, mask_);
}

CompactSet CompactSet::point(const Space& space, GraphPoint p) {
  return CompactSet(space, SubsetMask::point(space, p));
}

CompactSet CompactSet::points(const Space& space, const std::vector<GraphPoint>& pts,
                              double resolution) {
  SubsetMask m(space.edge_count(), resolution);
  for (const GraphPoint& p : pts) m.add_point(space, p);
  return CompactSet(space, std::move(m));
}

CompactSet CompactSet::arc(const Space& space, EdgeId e, double lo, double hi) {
  SubsetMask m(space.edge_count());
  m.add(e, lo, hi);
  return CompactSet(space, std::move(m));
}

CompactSet CompactSet::whole(const Space& space) { return CompactSet(space, SubsetMask::full(space)); }

double effective_spacing(const Space& space, const HausdorffOptions& options) {
  return options.spacing > 0.0 ? options.spacing : 1e-3 * space.diameter();
}

double directed_hausdorff(const Space& space, const SubsetMask& a, const SubsetMask& b,
                          const HausdorffOptions& options) {
  require_nonempty(a);
  require_nonempty(b);
  const double spacing = effective_spacing(space, options);
  if (options.method == HausdorffMethod::sampled) return directed_sampled(space, a, b, spacing);
  if (space.mode() == MetricMode::geodesic) return directed_geodesic(space, a, b);
  return directed_euclidean(space, a, b, spacing);
}

HausdorffResult hausdorff(const Space& space, const CompactSet& a, const CompactSet& b,
                          const HausdorffOptions& options) {
  HausdorffResult r;
  r.value = std::max(directed_hausdorff(space, a.mask(), b.mask(), options),
                     directed_hausdorff(space, b.mask(), a.mask(), options));
  r.error_bound = a.resolution() + b.resolution();
  if (options.method == HausdorffMethod::sampled || space.mode() == MetricMode::ambient_euclidean) {
    r.error_bound += effective_spacing(space, options);
  }
  return r;
}

double distance_to_set(const Space& space, GraphPoint p, const SubsetMask& set) {
  require_nonempty(set);
  validate_point(space, p);
  if (space.mode() == MetricMode::ambient_euclidean) {
    const Vec2 at = space.embed(p);
    double near = kInf;
    for (const Segment& s : mask_segments(space, set)) near = std::min(near, point_segment_distance(at, s));
    return near;
  }
  const std::vector<double> db = vertex_distances_to(space, set);
  const double L = space.edge(p.edge).length;
  for (const Region& r : edge_regions(space, p.edge, set, db)) {
    if (p.t >= r.lo && p.t <= r.hi) return region_value(r, L, p.t);
  }
  return 0.0;
}

double set_gap(const Space& space, const SubsetMask& a, const SubsetMask& b) {
  require_nonempty(a);
  require_nonempty(b);
  if (space.mode() == MetricMode::ambient_euclidean) {
    const auto sa = mask_segments(space, a);
    const auto sb = mask_segments(space, b);
    double near = kInf;
    for (const Segment& s : sa) {
      for (const Segment& t : sb) near = std::min(near, segment_segment_distance(s, t));
    }
    return near;
  }
  // With no overlap on an edge, each A interval lies in one gap of B where
  // the distance is concave, so the minimum sits at an interval end.
  double near = kInf;
  for (EdgeId e = 0; e < a.edge_count(); ++e) {
    for (const Interval& iv : a.on(e)) {
      for (const Interval& jv : b.on(e)) {
        if (iv.lo <= jv.hi + kParamTol && jv.lo <= iv.hi + kParamTol) return 0.0;
      }
      near = std::min({near, distance_to_set(space, {e, iv.lo}, b),
                       distance_to_set(space, {e, iv.hi}, b)});
    }
  }
  return near;
}

double set_diameter(const Space& space, const CompactSet& a, const HausdorffOptions& options) {
  double diam = 0.0;
  if (space.mode() == MetricMode::ambient_euclidean) {
    std::vector<Vec2> corners;
    for (const Segment& s : mask_segments(space, a.mask())) {
      corners.push_back(s.a);
      corners.push_back(s.b);
    }
    for (std::size_t i = 0; i < corners.size(); ++i) {
      for (std::size_t j = i + 1; j < corners.size(); ++j) diam = std::max(diam, planar_distance(corners[i], corners[j]));
    }
    return diam;
  }
  const auto pts = mask_samples(space, a.mask(), effective_spacing(space, options));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, point_distance(space, pts[i], pts[j]));
  }
  return diam;
}

CompactSet induced_apply(const Homeo& h, const CompactSet& a) {
  CompactSet out = map_set(h.space(), h.forward(), a.mask(), h.lipschitz(), h.sup_error());
  return out;
}

CompactSet induced_apply_inverse(const Homeo& h, const CompactSet& a) {
  return map_set(h.space(), h.backward(), a.mask(), h.inverse_lipschitz(), h.inverse_sup_error());
}

CompactSet union_sets(const Space& space, const std::vector<CompactSet>& sets) {
  if (sets.empty()) throw DomainError("union of an empty family");
  SubsetMask acc = sets.front().mask();
  for (std::size_t i = 1; i < sets.size(); ++i) acc = mask_union(space, acc, sets[i].mask());
  return CompactSet(space, std::move(acc));
}

bool is_connected(const Space& space, const CompactSet& a) { return mask_connected(space, a.mask()); }

UnionStabilityResult union_stability_check(
    const Space& space, const std::vector<std::pair<CompactSet, CompactSet>>& pairs, double eps,
    const HausdorffOptions& options) {
  UnionStabilityResult out;
  if (pairs.empty()) throw DomainError("union stability needs at least one pair");
  std::vector<CompactSet> left;
  std::vector<CompactSet> right;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (hausdorff(space, pairs[i].first, pairs[i].second, options).value > eps) {
      out.offending_pairs.push_back(i);
    }
    left.push_back(pairs[i].first);
    right.push_back(pairs[i].second);
  }
  out.precondition_ok = out.offending_pairs.empty();
  if (!out.precondition_ok) return out;
  const HausdorffResult r = hausdorff(space, union_sets(space, left), union_sets(space, right), options);
  out.measured = r.value;
  out.error_bound = r.error_bound;
  out.holds = r.value <= eps + r.error_bound + 1e-12;
  return out;
}

namespace {

using MaskKey = std::vector<std::tuple<EdgeId, double, double>>;

MaskKey key_of(const SubsetMask& m) {
  MaskKey key;
  for (EdgeId e = 0; e < m.edge_count(); ++e) {
    for (const Interval& iv : m.on(e)) key.emplace_back(e, iv.lo, iv.hi);
  }
  return key;
}

struct GrowEnd {
  EdgeId edge;
  double at;
  int direction;  // +1 grows towards t=1, -1 towards t=0
};

SubsetMask grow_connected(const Space& space, GraphPoint seed, int steps, double increment,
                          std::mt19937_64& rng) {
  SubsetMask m = SubsetMask::point(space, seed);
  std::uniform_int_distribution<int> quanta(1, 4);
  for (int s = 0; s < steps; ++s) {
    std::vector<GrowEnd> ends;
    for (EdgeId e = 0; e < m.edge_count(); ++e) {
      for (const Interval& iv : m.on(e)) {
        if (iv.lo > kParamTol) ends.push_back({e, iv.lo, -1});
        if (iv.hi < 1.0 - kParamTol) ends.push_back({e, iv.hi, +1});
      }
    }
    for (VertexId v = 0; v < space.vertex_count(); ++v) {
      if (!m.covers_vertex(space, v)) continue;
      for (EdgeId e : space.incident(v)) {
        const bool at_from = space.edge(e).from == v;
        const auto& list = m.on(e);
        const bool touching = !list.empty() && (at_from ? list.front().lo <= kParamTol
                                                        : list.back().hi >= 1.0 - kParamTol);
        if (!touching) ends.push_back({e, at_from ? 0.0 : 1.0, at_from ? +1 : -1});
      }
    }
    if (ends.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
    const GrowEnd end = ends[pick(rng)];
    const double step = quanta(rng) * increment / space.edge(end.edge).length;
    const double other = std::clamp(end.at + end.direction * step, 0.0, 1.0);
    m.add(end.edge, end.at, other);
  }
  return canonicalize(space, std::move(m));
}

}  // namespace

HyperNet hyper_net(const Space& space, double delta, NetMode mode, std::size_t budget,
                   std::uint64_t seed, const HyperNetOptions& options) {
  if (!(delta > 0.0)) throw ParameterError("hyper_net: delta must be positive");
  if (budget < 1) throw ParameterError("hyper_net: budget must be at least 1");
  HyperNet net;
  net.mode = mode;
  net.delta = delta;
  const std::vector<GraphPoint> grid = sample_net(space, delta);
  std::mt19937_64 rng(seed);
  std::set<MaskKey> seen;
  double total_length = 0.0;
  for (const Edge& ed : space.edges()) total_length += ed.length;
  const int max_steps = options.max_growth_steps > 0
                            ? options.max_growth_steps
                            : static_cast<int>(std::ceil(2.0 * total_length / delta));
  const std::size_t attempts = 50 * budget + 100;
  std::uniform_int_distribution<std::size_t> pick_point(0, grid.size() - 1);
  for (std::size_t attempt = 0; attempt < attempts && net.elements.size() < budget; ++attempt) {
    SubsetMask m(space.edge_count());
    if (mode == NetMode::full) {
      const int cap = std::max(1, std::min<int>(options.max_points, static_cast<int>(grid.size())));
      std::uniform_int_distribution<int> count(1, cap);
      const int c = count(rng);
      for (int i = 0; i < c; ++i) m.add_point(space, grid[pick_point(rng)]);
      m = canonicalize(space, std::move(m));
    } else {
      std::uniform_int_distribution<int> steps(0, max_steps);
      const GraphPoint start = grid[pick_point(rng)];
      const int s = steps(rng);
      m = grow_connected(space, start, s, delta / 4.0, rng);
    }
    if (!seen.insert(key_of(m)).second) continue;
    net.elements.emplace_back(space, std::move(m));
  }
  return net;
}

}  // namespace hyperlab
