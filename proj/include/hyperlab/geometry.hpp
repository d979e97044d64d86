#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hyperlab {

using EdgeId = std::size_t;
using VertexId = std::size_t;

enum class MetricMode { geodesic, ambient_euclidean };

/// Which builder produced a space. Map constructors use it to reject
/// spaces they cannot act on.
enum class SpaceKind { custom, interval, circle, star, fan };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double planar_distance(Vec2 a, Vec2 b);

struct Edge {
  VertexId from = 0;
  VertexId to = 0;
  double length = 1.0;
  /// Planar image of the edge, from `from` to `to`. Empty when the space
  /// carries no embedding.
  std::vector<Vec2> polyline;
};

/// A point of a metric graph: arclength fraction t along an edge, measured
/// from the edge's `from` vertex.
struct GraphPoint {
  EdgeId edge = 0;
  double t = 0.0;

  friend bool operator==(const GraphPoint&, const GraphPoint&) = default;
};

/// Finite connected metric graph. Immutable after construction; the
/// vertex-to-vertex shortest path table is filled by the constructor.
class Space {
 public:
  Space(std::string name, std::size_t vertex_count, std::vector<Edge> edges,
        MetricMode mode, SpaceKind kind = SpaceKind::custom);

  const std::string& name() const { return name_; }
  SpaceKind kind() const { return kind_; }
  MetricMode mode() const { return mode_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_embedding() const { return embedded_; }

  /// Shortest-path length between two vertices along the graph.
  double vertex_distance(VertexId a, VertexId b) const {
    return apsp_[a * vertex_count_ + b];
  }

  /// Edges incident to v, in increasing id order.
  const std::vector<EdgeId>& incident(VertexId v) const { return incident_.at(v); }

  /// Lowest-indexed edge incident to v; vertex points are stored on it.
  EdgeId owner_edge(VertexId v) const { return incident_.at(v).front(); }

  /// Diameter of the space (exact for the Euclidean mode, sampled on a
  /// 64-per-edge grid for the geodesic mode).
  double diameter() const { return diameter_; }

  /// Planar image of a point; requires an embedding.
  Vec2 embed(GraphPoint p) const;

  /// Free-form numeric parameters recorded by the builders (circumference,
  /// n_max, ...).
  std::optional<double> parameter(const std::string& key) const;
  void set_parameter(const std::string& key, double value);

 private:
  std::string name_;
  SpaceKind kind_;
  MetricMode mode_;
  std::size_t vertex_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<double> apsp_;
  std::vector<std::pair<std::string, double>> parameters_;
  bool embedded_ = false;
  double diameter_ = 0.0;
};

/// Throws InvalidPointError when p does not lie on the space.
void validate_point(const Space& space, GraphPoint p);

/// If p is a vertex, returns the representation on the vertex's owner edge.
GraphPoint canonical(const Space& space, GraphPoint p);

/// The vertex p sits on, if any (t within 1e-12 of an edge end).
std::optional<VertexId> vertex_of(const Space& space, GraphPoint p);

double point_distance(const Space& space, GraphPoint p, GraphPoint q);

/// Deterministic delta-dense sample: each edge cut into ceil(length/delta)
/// equal pieces, endpoints included, vertices reported once.
std::vector<GraphPoint> sample_net(const Space& space, double delta);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool degenerate() const { return hi <= lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of closed parameter intervals, stored per edge. `resolution`
/// bounds the Hausdorff distance to the compact set the mask stands for.
class SubsetMask {
 public:
  SubsetMask() = default;
  explicit SubsetMask(std::size_t edge_count, double resolution = 0.0);

  static SubsetMask full(const Space& space);
  static SubsetMask point(const Space& space, GraphPoint p);

  /// Adds [lo, hi] on edge e (arguments may be given in either order) and
  /// re-normalizes that edge.
  void add(EdgeId e, double lo, double hi);
  void add_point(const Space& space, GraphPoint p);

  const std::vector<Interval>& on(EdgeId e) const { return edges_.at(e); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const;
  std::size_t interval_count() const;

  double resolution() const { return resolution_; }
  void set_resolution(double r) { resolution_ = r; }

  /// True when the mask covers the vertex through any incident edge.
  bool covers_vertex(const Space& space, VertexId v) const;
  bool contains(const Space& space, GraphPoint p) const;

  friend bool operator==(const SubsetMask& a, const SubsetMask& b) {
    return a.edges_ == b.edges_;
  }

 private:
  void normalize_edge(EdgeId e);

  std::vector<std::vector<Interval>> edges_;
  double resolution_ = 0.0;
};

/// Tolerance used to decide whether a parameter sits on an edge end or
/// whether two interval ends touch.
inline constexpr double kParamTol = 1e-12;

/// Moves vertex singletons to their owner edge and drops them when the
/// vertex is already covered, so equal sets get equal masks.
SubsetMask canonicalize(const Space& space, SubsetMask mask);

SubsetMask mask_union(const Space& space, const SubsetMask& a, const SubsetMask& b);

/// Closures of the connected components of `base` minus `removed`.
std::vector<SubsetMask> components_of_difference(const Space& space,
                                                 const SubsetMask& base,
                                                 const SubsetMask& removed);

/// Closures of the connected components of the complement of `removed`.
std::vector<SubsetMask> connected_components(const Space& space,
                                             const SubsetMask& removed);

/// True when the mask (viewed as a point set) is connected.
bool mask_connected(const Space& space, const SubsetMask& mask);

}  // namespace hyperlab
