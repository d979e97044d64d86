#include "hyperlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "hyperlab/errors.hpp"

namespace hyperlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double polyline_length(const std::vector<Vec2>& poly) {
  double total = 0.0;
  for (std::size_t i = 1; i < poly.size(); ++i) total += planar_distance(poly[i - 1], poly[i]);
  return total;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

double planar_distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Space::Space(std::string name, std::size_t vertex_count, std::vector<Edge> edges,
             MetricMode mode, SpaceKind kind)
    : name_(std::move(name)),
      kind_(kind),
      mode_(mode),
      vertex_count_(vertex_count),
      edges_(std::move(edges)) {
  if (edges_.empty()) throw ParameterError("space needs at least one edge");
  incident_.assign(vertex_count_, {});
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.from >= vertex_count_ || ed.to >= vertex_count_) {
      throw ParameterError("edge " + std::to_string(e) + " references a missing vertex");
    }
    if (ed.from == ed.to) {
      throw ParameterError("edge " + std::to_string(e) + " is a self-loop");
    }
    if (!(ed.length > 0.0) || !std::isfinite(ed.length)) {
      throw ParameterError("edge " + std::to_string(e) + " has non-positive length");
    }
    incident_[ed.from].push_back(e);
    incident_[ed.to].push_back(e);
  }
  for (VertexId v = 0; v < vertex_count_; ++v) {
    if (incident_[v].empty()) throw ParameterError("isolated vertex " + std::to_string(v));
  }

  // connectivity
  std::vector<bool> seen(vertex_count_, false);
  std::queue<VertexId> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const VertexId v = frontier.front();
    frontier.pop();
    for (EdgeId e : incident_[v]) {
      const VertexId w = edges_[e].from == v ? edges_[e].to : edges_[e].from;
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  if (reached != vertex_count_) throw ParameterError("space graph is not connected");

  embedded_ = std::all_of(edges_.begin(), edges_.end(),
                          [](const Edge& ed) { return ed.polyline.size() >= 2; });
  if (mode_ == MetricMode::ambient_euclidean && !embedded_) {
    throw ParameterError("ambient_euclidean metric requires an embedding of every edge");
  }
  if (embedded_) {
    std::vector<std::optional<Vec2>> position(vertex_count_);
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      const Edge& ed = edges_[e];
      const double len = polyline_length(ed.polyline);
      if (std::abs(len - ed.length) > 1e-9 * ed.length) {
        throw ParameterError("edge " + std::to_string(e) +
                             " embedded length differs from declared length");
      }
      for (auto [v, at] : {std::pair{ed.from, ed.polyline.front()},
                           std::pair{ed.to, ed.polyline.back()}}) {
        if (!position[v]) {
          position[v] = at;
        } else if (planar_distance(*position[v], at) > 1e-9) {
          throw ParameterError("embedding of edge " + std::to_string(e) +
                               " disagrees at a shared vertex");
        }
      }
    }
  }

  // Floyd-Warshall over vertices.
  const std::size_t n = vertex_count_;
  apsp_.assign(n * n, kInf);
  for (VertexId v = 0; v < n; ++v) apsp_[v * n + v] = 0.0;
  for (const Edge& ed : edges_) {
    double& ab = apsp_[ed.from * n + ed.to];
    ab = std::min(ab, ed.length);
    apsp_[ed.to * n + ed.from] = ab;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ik = apsp_[i * n + k];
      if (ik == kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double cand = ik + apsp_[k * n + j];
        if (cand < apsp_[i * n + j]) apsp_[i * n + j] = cand;
      }
    }
  }

  if (mode_ == MetricMode::ambient_euclidean) {
    std::vector<Vec2> corners;
    for (const Edge& ed : edges_) corners.insert(corners.end(), ed.polyline.begin(), ed.polyline.end());
    for (std::size_t i = 0; i < corners.size(); ++i) {
      for (std::size_t j = i + 1; j < corners.size(); ++j) {
        diameter_ = std::max(diameter_, planar_distance(corners[i], corners[j]));
      }
    }
  } else {
    std::vector<GraphPoint> grid;
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      for (int i = 0; i <= 64; ++i) grid.push_back({e, i / 64.0});
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        diameter_ = std::max(diameter_, point_distance(*this, grid[i], grid[j]));
      }
    }
  }
}

Vec2 Space::embed(GraphPoint p) const {
  if (!embedded_) throw TypeError("space '" + name_ + "' has no planar embedding");
  validate_point(*this, p);
  const auto& poly = edges_[p.edge].polyline;
  const double target = p.t * polyline_length(poly);
  double walked = 0.0;
  for (std::size_t i = 1; i < poly.size(); ++i) {
    const double seg = planar_distance(poly[i - 1], poly[i]);
    if (walked + seg >= target || i + 1 == poly.size()) {
      const double u = seg > 0.0 ? std::clamp((target - walked) / seg, 0.0, 1.0) : 0.0;
      return {poly[i - 1].x + u * (poly[i].x - poly[i - 1].x),
              poly[i - 1].y + u * (poly[i].y - poly[i - 1].y)};
    }
    walked += seg;
  }
  return poly.back();
}

std::optional<double> Space::parameter(const std::string& key) const {
  for (const auto& [k, v] : parameters_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void Space::set_parameter(const std::string& key, double value) {
  for (auto& [k, v] : parameters_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  parameters_.emplace_back(key, value);
}

void validate_point(const Space& space, GraphPoint p) {
  if (p.edge >= space.edge_count()) {
    throw InvalidPointError("point references nonexistent edge " + std::to_string(p.edge));
  }
  if (!(p.t >= -kParamTol && p.t <= 1.0 + kParamTol)) {
    std::ostringstream msg;
    msg << "point parameter " << p.t << " outside [0,1]";
    throw InvalidPointError(msg.str());
  }
}

std::optional<VertexId> vertex_of(const Space& space, GraphPoint p) {
  const Edge& ed = space.edge(p.edge);
  if (p.t <= kParamTol) return ed.from;
  if (p.t >= 1.0 - kParamTol) return ed.to;
  return std::nullopt;
}

GraphPoint canonical(const Space& space, GraphPoint p) {
  validate_point(space, p);
  p.t = std::clamp(p.t, 0.0, 1.0);
  if (auto v = vertex_of(space, p)) {
    const EdgeId owner = space.owner_edge(*v);
    return {owner, space.edge(owner).from == *v ? 0.0 : 1.0};
  }
  return p;
}

double point_distance(const Space& space, GraphPoint p, GraphPoint q) {
  validate_point(space, p);
  validate_point(space, q);
  if (space.mode() == MetricMode::ambient_euclidean) {
    return planar_distance(space.embed(p), space.embed(q));
  }
  const Edge& ep = space.edge(p.edge);
  const Edge& eq = space.edge(q.edge);
  double best = kInf;
  if (p.edge == q.edge) best = std::abs(p.t - q.t) * ep.length;
  const VertexId pv[2] = {ep.from, ep.to};
  const double po[2] = {p.t * ep.length, (1.0 - p.t) * ep.length};
  const VertexId qv[2] = {eq.from, eq.to};
  const double qo[2] = {q.t * eq.length, (1.0 - q.t) * eq.length};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      best = std::min(best, po[a] + space.vertex_distance(pv[a], qv[b]) + qo[b]);
    }
  }
  return best;
}

std::vector<GraphPoint> sample_net(const Space& space, double delta) {
  if (!(delta > 0.0)) throw ParameterError("sample_net: delta must be positive");
  std::vector<GraphPoint> out;
  for (EdgeId e = 0; e < space.edge_count(); ++e) {
    const Edge& ed = space.edge(e);
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(ed.length / delta - 1e-12)));
    for (std::size_t i = 0; i <= pieces; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(pieces);
      const GraphPoint p{e, t};
      if ((i == 0 || i == pieces) && canonical(space, p).edge != e) continue;
      out.push_back(p);
    }
  }
  return out;
}

SubsetMask::SubsetMask(std::size_t edge_count, double resolution)
    : edges_(edge_count), resolution_(resolution) {}

SubsetMask SubsetMask::full(const Space& space) {
  SubsetMask m(space.edge_count());
  for (EdgeId e = 0; e < space.edge_count(); ++e) m.add(e, 0.0, 1.0);
  return m;
}

SubsetMask SubsetMask::point(const Space& space, GraphPoint p) {
  SubsetMask m(space.edge_count());
  m.add_point(space, p);
  return m;
}

void SubsetMask::add(EdgeId e, double lo, double hi) {
  if (e >= edges_.size()) throw InvalidPointError("mask interval on nonexistent edge");
  if (lo > hi) std::swap(lo, hi);
  if (!(lo >= -kParamTol && hi <= 1.0 + kParamTol)) {
    throw ParameterError("mask interval outside [0,1]");
  }
  edges_[e].push_back({std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0)});
  normalize_edge(e);
}

void SubsetMask::add_point(const Space& space, GraphPoint p) {
  const GraphPoint c = canonical(space, p);
  add(c.edge, c.t, c.t);
}

void SubsetMask::normalize_edge(EdgeId e) {
  auto& list = edges_[e];
  std::sort(list.begin(), list.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> merged;
  merged.reserve(list.size());
  for (const Interval& iv : list) {
    if (!merged.empty() && iv.lo <= merged.back().hi + kParamTol) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  list = std::move(merged);
}

bool SubsetMask::empty() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const auto& l) { return l.empty(); });
}

std::size_t SubsetMask::interval_count() const {
  std::size_t n = 0;
  for (const auto& l : edges_) n += l.size();
  return n;
}

bool SubsetMask::covers_vertex(const Space& space, VertexId v) const {
  for (EdgeId e : space.incident(v)) {
    const auto& list = edges_[e];
    if (list.empty()) continue;
    const Edge& ed = space.edge(e);
    if (ed.from == v && list.front().lo <= kParamTol) return true;
    if (ed.to == v && list.back().hi >= 1.0 - kParamTol) return true;
  }
  return false;
}

bool SubsetMask::contains(const Space& space, GraphPoint p) const {
  validate_point(space, p);
  if (auto v = vertex_of(space, p)) return covers_vertex(space, *v);
  for (const Interval& iv : edges_[p.edge]) {
    if (p.t >= iv.lo - kParamTol && p.t <= iv.hi + kParamTol) return true;
  }
  return false;
}

SubsetMask canonicalize(const Space& space, SubsetMask mask) {
  std::vector<VertexId> vertex_points;
  SubsetMask out(mask.edge_count(), mask.resolution());
  for (EdgeId e = 0; e < mask.edge_count(); ++e) {
    for (const Interval& iv : mask.on(e)) {
      if (iv.hi - iv.lo <= kParamTol) {
        if (auto v = vertex_of(space, {e, iv.lo})) {
          vertex_points.push_back(*v);
          continue;
        }
      }
      out.add(e, iv.lo, iv.hi);
    }
  }
  std::sort(vertex_points.begin(), vertex_points.end());
  vertex_points.erase(std::unique(vertex_points.begin(), vertex_points.end()), vertex_points.end());
  for (VertexId v : vertex_points) {
    if (!out.covers_vertex(space, v)) {
      const EdgeId owner = space.owner_edge(v);
      const double t = space.edge(owner).from == v ? 0.0 : 1.0;
      out.add(owner, t, t);
    }
  }
  return out;
}

SubsetMask mask_union(const Space& space, const SubsetMask& a, const SubsetMask& b) {
  SubsetMask out(a.edge_count(), std::max(a.resolution(), b.resolution()));
  for (const SubsetMask* m : {&a, &b}) {
    for (EdgeId e = 0; e < m->edge_count(); ++e) {
      for (const Interval& iv : m->on(e)) out.add(e, iv.lo, iv.hi);
    }
  }
  return canonicalize(space, std::move(out));
}

namespace {

struct Piece {
  EdgeId edge;
  Interval closure;
  bool open_lo;
  bool open_hi;
};

std::vector<Piece> subtract_on_edge(EdgeId e, const std::vector<Interval>& base,
                                    const std::vector<Interval>& removed) {
  std::vector<Piece> out;
  for (const Interval& b : base) {
    double start = b.lo;
    bool start_open = false;
    bool alive = true;
    for (const Interval& r : removed) {
      if (r.hi < start - kParamTol || r.lo > b.hi + kParamTol) continue;
      if (r.lo > start + kParamTol) {
        out.push_back({e, {start, r.lo}, start_open, true});
      }
      if (r.hi >= b.hi - kParamTol) {
        alive = false;
        break;
      }
      start = std::max(start, r.hi);
      start_open = true;
    }
    if (!alive) continue;
    if (b.hi - start > kParamTol || !start_open) {
      out.push_back({e, {start, b.hi}, start_open, false});
    }
  }
  return out;
}

}  // namespace

std::vector<SubsetMask> components_of_difference(const Space& space, const SubsetMask& base,
                                                 const SubsetMask& removed) {
  std::vector<Piece> pieces;
  for (EdgeId e = 0; e < space.edge_count(); ++e) {
    auto part = subtract_on_edge(e, base.on(e), removed.on(e));
    pieces.insert(pieces.end(), part.begin(), part.end());
  }
  const std::size_t np = pieces.size();
  DisjointSets sets(np + space.vertex_count());
  std::vector<bool> vertex_removed(space.vertex_count());
  for (VertexId v = 0; v < space.vertex_count(); ++v) {
    vertex_removed[v] = removed.covers_vertex(space, v);
  }
  for (std::size_t i = 0; i < np; ++i) {
    const Piece& p = pieces[i];
    const Edge& ed = space.edge(p.edge);
    if (p.closure.lo <= kParamTol && !p.open_lo && !vertex_removed[ed.from]) {
      sets.unite(i, np + ed.from);
    }
    if (p.closure.hi >= 1.0 - kParamTol && !p.open_hi && !vertex_removed[ed.to]) {
      sets.unite(i, np + ed.to);
    }
  }
  std::vector<std::size_t> roots;
  std::vector<SubsetMask> out;
  const double res = std::max(base.resolution(), removed.resolution());
  for (std::size_t i = 0; i < np; ++i) {
    const std::size_t root = sets.find(i);
    auto it = std::find(roots.begin(), roots.end(), root);
    std::size_t slot;
    if (it == roots.end()) {
      roots.push_back(root);
      out.emplace_back(space.edge_count(), res);
      slot = out.size() - 1;
    } else {
      slot = static_cast<std::size_t>(it - roots.begin());
    }
    out[slot].add(pieces[i].edge, pieces[i].closure.lo, pieces[i].closure.hi);
  }
  for (auto& m : out) m = canonicalize(space, std::move(m));
  return out;
}

std::vector<SubsetMask> connected_components(const Space& space, const SubsetMask& removed) {
  return components_of_difference(space, SubsetMask::full(space), removed);
}

bool mask_connected(const Space& space, const SubsetMask& mask) {
  std::vector<std::pair<EdgeId, Interval>> items;
  for (EdgeId e = 0; e < mask.edge_count(); ++e) {
    for (const Interval& iv : mask.on(e)) items.emplace_back(e, iv);
  }
  if (items.empty()) return false;
  const std::size_t n = items.size();
  DisjointSets sets(n + space.vertex_count());
  for (std::size_t i = 0; i < n; ++i) {
    const Edge& ed = space.edge(items[i].first);
    if (items[i].second.lo <= kParamTol) sets.unite(i, n + ed.from);
    if (items[i].second.hi >= 1.0 - kParamTol) sets.unite(i, n + ed.to);
  }
  const std::size_t root = sets.find(0);
  for (std::size_t i = 1; i < n; ++i) {
    if (sets.find(i) != root) return false;
  }
  return true;
}

}  // namespace hyperlab
