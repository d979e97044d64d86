#include "hyperlab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperlab/errors.hpp"

namespace hyperlab {

namespace {

constexpr int kSquareGrid = 4096;

PlCurve linear(double x0, double x1, double y0, double y1) { return PlCurve{{x0, x1}, {y0, y1}}; }

const MapPiece& locate(const std::vector<MapPiece>& pieces, double t) {
  auto it = std::lower_bound(pieces.begin(), pieces.end(), t,
                             [](const MapPiece& p, double value) { return p.hi < value; });
  if (it == pieces.end()) --it;
  return *it;
}

void validate_curve(const PlCurve& c, double lo, double hi, EdgeId e) {
  const auto where = [e] { return "edge " + std::to_string(e) + ": "; };
  if (c.xs.size() < 2 || c.xs.size() != c.ys.size()) {
    throw ParameterError(where() + "map piece needs at least two knots");
  }
  if (std::abs(c.xs.front() - lo) > kParamTol || std::abs(c.xs.back() - hi) > kParamTol) {
    throw ParameterError(where() + "map piece knots do not span the piece");
  }
  const bool up = c.ys.back() > c.ys.front();
  for (std::size_t i = 1; i < c.xs.size(); ++i) {
    if (!(c.xs[i] > c.xs[i - 1])) throw ParameterError(where() + "knots must increase");
    if (up ? !(c.ys[i] > c.ys[i - 1]) : !(c.ys[i] < c.ys[i - 1])) {
      throw ParameterError(where() + "map piece is not strictly monotone");
    }
  }
  for (double y : c.ys) {
    if (y < -kParamTol || y > 1.0 + kParamTol) throw ParameterError(where() + "image outside [0,1]");
  }
}

void require_kind(const Space& space, SpaceKind kind, const char* what) {
  if (space.kind() != kind) {
    throw TypeError(std::string(what) + " cannot act on space '" + space.name() + "'");
  }
}

double stretch(const Space& space, const EdgeMap& map) {
  double out = 1.0;
  for (EdgeId e = 0; e < map.size(); ++e) {
    for (const MapPiece& p : map[e]) {
      const double scale = space.edge(p.target).length / space.edge(e).length;
      for (std::size_t i = 1; i < p.curve.xs.size(); ++i) {
        const double slope = std::abs(p.curve.ys[i] - p.curve.ys[i - 1]) /
                             (p.curve.xs[i] - p.curve.xs[i - 1]);
        out = std::max(out, slope * scale);
      }
    }
  }
  return out;
}

}  // namespace

double PlCurve::operator()(double x) const {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double x0 = xs[i - 1];
  const double x1 = xs[i];
  const double u = (x - x0) / (x1 - x0);
  return ys[i - 1] + u * (ys[i] - ys[i - 1]);
}

PlCurve PlCurve::inverted() const {
  PlCurve inv{ys, xs};
  if (!increasing()) {
    std::reverse(inv.xs.begin(), inv.xs.end());
    std::reverse(inv.ys.begin(), inv.ys.end());
  }
  return inv;
}

Homeo::Homeo(std::shared_ptr<const Space> space, EdgeMap forward, std::string name,
             double sup_error, double inverse_sup_error)
    : space_(std::move(space)),
      forward_(std::move(forward)),
      name_(std::move(name)),
      sup_error_(sup_error),
      inverse_sup_error_(inverse_sup_error) {
  if (!space_) throw ParameterError("homeomorphism needs a space");
  if (forward_.size() != space_->edge_count()) {
    throw ParameterError("edge map must list pieces for every edge");
  }
  backward_.assign(space_->edge_count(), {});
  for (EdgeId e = 0; e < forward_.size(); ++e) {
    if (forward_[e].empty()) throw ParameterError("edge " + std::to_string(e) + " has no image");
    for (const MapPiece& p : forward_[e]) {
      if (!(p.hi > p.lo)) throw ParameterError("map piece with empty source range");
      if (p.target >= space_->edge_count()) throw ParameterError("map piece targets a missing edge");
      validate_curve(p.curve, p.lo, p.hi, e);
      PlCurve inv = p.curve.inverted();
      backward_[p.target].push_back({inv.xs.front(), inv.xs.back(), e, std::move(inv)});
    }
  }
  for (auto& list : backward_) {
    std::sort(list.begin(), list.end(),
              [](const MapPiece& a, const MapPiece& b) { return a.lo < b.lo; });
  }
  lipschitz_ = stretch(*space_, forward_);
  inverse_lipschitz_ = stretch(*space_, backward_);
}

Homeo::Homeo(std::shared_ptr<const Space> space, EdgeMap forward, EdgeMap backward,
             std::string name, double sup_error, double inverse_sup_error)
    : space_(std::move(space)),
      forward_(std::move(forward)),
      backward_(std::move(backward)),
      name_(std::move(name)),
      sup_error_(sup_error),
      inverse_sup_error_(inverse_sup_error) {
  lipschitz_ = stretch(*space_, forward_);
  inverse_lipschitz_ = stretch(*space_, backward_);
}

GraphPoint Homeo::apply(GraphPoint p) const {
  validate_point(*space_, p);
  const MapPiece& piece = locate(forward_[p.edge], p.t);
  return canonical(*space_, {piece.target, std::clamp(piece.curve(p.t), 0.0, 1.0)});
}

GraphPoint Homeo::apply_inverse(GraphPoint p) const {
  validate_point(*space_, p);
  const auto& pieces = backward_[p.edge];
  if (pieces.empty()) throw InvalidPointError("point outside the image of the map");
  const MapPiece& piece = locate(pieces, p.t);
  return canonical(*space_, {piece.target, std::clamp(piece.curve(p.t), 0.0, 1.0)});
}

Homeo Homeo::inverse() const {
  return Homeo(space_, backward_, forward_, name_ + "^-1", inverse_sup_error_, sup_error_);
}

GraphPoint apply_point(const Homeo& h, GraphPoint p) { return h.apply(p); }

Homeo invert(const Homeo& h) { return h.inverse(); }

std::vector<std::string> check_homeomorphism(const Homeo& h) {
  const Space& space = h.space();
  std::vector<std::string> out;
  const auto report = [&out](const std::string& msg) { out.push_back(msg); };
  constexpr double kTol = 1e-9;

  for (EdgeId e = 0; e < space.edge_count(); ++e) {
    const auto& pieces = h.forward()[e];
    if (std::abs(pieces.front().lo) > kTol || std::abs(pieces.back().hi - 1.0) > kTol) {
      report("edge " + std::to_string(e) + ": pieces do not cover [0,1]");
    }
    for (std::size_t i = 1; i < pieces.size(); ++i) {
      if (std::abs(pieces[i].lo - pieces[i - 1].hi) > kTol) {
        report("edge " + std::to_string(e) + ": gap or overlap between source pieces");
      }
      const GraphPoint left{pieces[i - 1].target, pieces[i - 1].curve(pieces[i - 1].hi)};
      const GraphPoint right{pieces[i].target, pieces[i].curve(pieces[i].lo)};
      if (point_distance(space, left, right) > kTol) {
        report("edge " + std::to_string(e) + ": image discontinuous at t=" +
               std::to_string(pieces[i].lo));
      }
    }
  }

  // Images must tile every edge, overlapping only at endpoints.
  std::vector<std::vector<Interval>> covered(space.edge_count());
  for (EdgeId e = 0; e < space.edge_count(); ++e) {
    for (const MapPiece& p : h.forward()[e]) {
      const double a = p.curve.ys.front();
      const double b = p.curve.ys.back();
      covered[p.target].push_back({std::min(a, b), std::max(a, b)});
    }
  }
  for (EdgeId e = 0; e < space.edge_count(); ++e) {
    auto& list = covered[e];
    const std::string tag = "edge " + std::to_string(e) + ": ";
    if (list.empty()) {
      report(tag + "not in the image");
      continue;
    }
    std::sort(list.begin(), list.end(), [](const Interval& a, const Interval& b) {
      return a.lo < b.lo;
    });
    if (list.front().lo > kTol || list.back().hi < 1.0 - kTol) report(tag + "image does not reach both ends");
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i].lo < list[i - 1].hi - kTol) {
        std::ostringstream msg;
        msg << tag << "image overlap on [" << list[i].lo << ", "
            << std::min(list[i].hi, list[i - 1].hi) << "]";
        report(msg.str());
      } else if (list[i].lo > list[i - 1].hi + kTol) {
        report(tag + "image gap");
      }
    }
  }

  for (VertexId v = 0; v < space.vertex_count(); ++v) {
    std::vector<GraphPoint> images;
    for (EdgeId e : space.incident(v)) {
      const double t = space.edge(e).from == v ? 0.0 : 1.0;
      const MapPiece& piece = locate(h.forward()[e], t);
      images.push_back({piece.target, piece.curve(t)});
    }
    for (std::size_t i = 1; i < images.size(); ++i) {
      if (point_distance(space, images[0], images[i]) > kTol) {
        report("vertex " + std::to_string(v) + ": incident edges disagree on its image");
        break;
      }
    }
  }

  for (EdgeId e = 0; e < space.edge_count(); ++e) {
    for (const MapPiece& p : h.forward()[e]) {
      for (double x : p.curve.xs) {
        const GraphPoint start{e, x};
        const GraphPoint back = h.apply_inverse(h.apply(start));
        if (point_distance(space, start, back) > kTol * space.edge(e).length + 1e-15) {
          report("edge " + std::to_string(e) + ": inverse does not undo the map at t=" +
                 std::to_string(x));
          break;
        }
      }
    }
  }
  return out;
}

std::shared_ptr<const Space> build_interval() {
  auto s = std::make_shared<Space>(
      "interval", 2, std::vector<Edge>{Edge{0, 1, 1.0, {{0.0, 0.0}, {1.0, 0.0}}}},
      MetricMode::geodesic, SpaceKind::interval);
  return s;
}

std::shared_ptr<const Space> build_circle(double circumference) {
  if (!(circumference > 0.0) || !std::isfinite(circumference)) {
    throw ParameterError("circle circumference must be positive");
  }
  const double half = circumference / 2.0;
  auto s = std::make_shared<Space>("circle", 2,
                                   std::vector<Edge>{Edge{0, 1, half, {}}, Edge{1, 0, half, {}}},
                                   MetricMode::geodesic, SpaceKind::circle);
  s->set_parameter("circumference", circumference);
  return s;
}

std::shared_ptr<const Space> build_star(int branches, double branch_length) {
  if (branches < 3) throw ParameterError("star needs at least 3 branches");
  if (!(branch_length > 0.0) || !std::isfinite(branch_length)) {
    throw ParameterError("star branch length must be positive");
  }
  std::vector<Edge> edges;
  for (int i = 0; i < branches; ++i) {
    edges.push_back({0, static_cast<VertexId>(i + 1), branch_length, {}});
  }
  auto s = std::make_shared<Space>("star", static_cast<std::size_t>(branches + 1),
                                   std::move(edges), MetricMode::geodesic, SpaceKind::star);
  s->set_parameter("branches", branches);
  s->set_parameter("branch_length", branch_length);
  return s;
}

EdgeId fan_edge(int n, int i) {
  return static_cast<EdgeId>(1 + n * (n - 1) + (i - 1));
}

Vec2 fan_tip(int n, int i) {
  if (n < 1 || i < 1 || i > 2 * n) throw ParameterError("fan segment index out of range");
  if (i > n) {
    const Vec2 upper = fan_tip(n, n - (i - n) + 1);
    return {upper.x, -upper.y};
  }
  const double nn = n;
  const double denom = nn - i + 1.0 + nn * (nn - 1.0) / 2.0;
  return {i / nn, 1.0 / denom};
}

double fan_truncation_diameter(int n_max) {
  // Fan diameters decrease towards 1 with n, so the first dropped fan
  // attains the supremum.
  const int n = n_max + 1;
  std::vector<Vec2> pts{{0.0, 0.0}};
  for (int i = 1; i <= 2 * n; ++i) pts.push_back(fan_tip(n, i));
  double diam = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) diam = std::max(diam, planar_distance(pts[a], pts[b]));
  }
  return diam;
}

std::shared_ptr<const Space> build_fan_space(FanSpec spec) {
  if (spec.n_max < 1) throw ParameterError("fan space needs n_max >= 1");
  std::vector<Edge> edges;
  edges.push_back({0, 1, 1.0, {{0.0, 0.0}, {0.0, 1.0}}});
  VertexId next = 2;
  for (int n = 1; n <= spec.n_max; ++n) {
    for (int i = 1; i <= 2 * n; ++i) {
      const Vec2 tip = fan_tip(n, i);
      edges.push_back({0, next++, std::hypot(tip.x, tip.y), {{0.0, 0.0}, tip}});
    }
  }
  auto s = std::make_shared<Space>("fan", next, std::move(edges), MetricMode::ambient_euclidean,
                                   SpaceKind::fan);
  s->set_parameter("n_max", spec.n_max);
  return s;
}

Homeo build_identity(std::shared_ptr<const Space> space) {
  EdgeMap fwd(space->edge_count());
  for (EdgeId e = 0; e < space->edge_count(); ++e) fwd[e].push_back({0.0, 1.0, e, linear(0, 1, 0, 1)});
  return Homeo(std::move(space), std::move(fwd), "identity");
}

Homeo build_square_map(std::shared_ptr<const Space> interval) {
  require_kind(*interval, SpaceKind::interval, "square map");
  PlCurve curve;
  curve.xs.resize(kSquareGrid + 1);
  curve.ys.resize(kSquareGrid + 1);
  for (int i = 0; i <= kSquareGrid; ++i) {
    const double t = static_cast<double>(i) / kSquareGrid;
    curve.xs[i] = t;
    curve.ys[i] = t * t;
  }
  const double h = 1.0 / kSquareGrid;
  // Chord of t^2 over a cell of width h sits at most h^2/4 above the curve.
  const double forward_error = h * h / 4.0;
  // Chord of sqrt over [a^2, b^2] is furthest below the curve where the
  // tangent slope equals the chord slope 1/(a+b).
  double inverse_error = 0.0;
  for (int i = 0; i < kSquareGrid; ++i) {
    const double a = i * h;
    const double b = (i + 1) * h;
    const double s = (a + b) * (a + b) / 4.0;
    inverse_error = std::max(inverse_error, (a + b) / 2.0 - (a + (s - a * a) / (a + b)));
  }
  EdgeMap fwd(1);
  fwd[0].push_back({0.0, 1.0, 0, std::move(curve)});
  return Homeo(std::move(interval), std::move(fwd), "square", forward_error, inverse_error);
}

Homeo build_interval_map(std::shared_ptr<const Space> interval, std::vector<double> xs,
                         std::vector<double> ys) {
  require_kind(*interval, SpaceKind::interval, "interval map");
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw ParameterError("interval map needs matching knot lists of length >= 2");
  }
  if (xs.front() != 0.0 || xs.back() != 1.0 || ys.front() != 0.0 || ys.back() != 1.0) {
    throw ParameterError("interval map knots must start at 0 and end at 1");
  }
  EdgeMap fwd(1);
  fwd[0].push_back({0.0, 1.0, 0, PlCurve{std::move(xs), std::move(ys)}});
  return Homeo(std::move(interval), std::move(fwd), "interval_pl");
}

GraphPoint circle_point(const Space& circle, double turns) {
  require_kind(circle, SpaceKind::circle, "circle_point");
  turns -= std::floor(turns);
  if (turns < 0.5) return canonical(circle, {0, 2.0 * turns});
  return canonical(circle, {1, std::min(1.0, 2.0 * turns - 1.0)});
}

double circle_turns(const Space& circle, GraphPoint p) {
  require_kind(circle, SpaceKind::circle, "circle_turns");
  const double turns = p.edge == 0 ? p.t / 2.0 : 0.5 + p.t / 2.0;
  return turns >= 1.0 ? turns - 1.0 : turns;
}

Homeo build_rotation(std::shared_ptr<const Space> circle, double alpha) {
  require_kind(*circle, SpaceKind::circle, "rotation");
  if (!std::isfinite(alpha)) throw ParameterError("rotation angle must be finite");
  const double a = alpha - std::floor(alpha);
  EdgeMap fwd(2);
  for (EdgeId e = 0; e < 2; ++e) {
    const double theta0 = 0.5 * static_cast<double>(e);
    const double start = theta0 + a;
    // Image arc [start, start + 0.5] meets at most one half-turn boundary.
    const double boundary = 0.5 * std::floor(start / 0.5) + 0.5;
    double split = 2.0 * (boundary - start);
    if (split < 1e-15 || split > 1.0 - 1e-15) split = -1.0;
    const auto half_of = [](double theta) {
      const long k = static_cast<long>(std::floor(theta / 0.5 + 1e-12));
      return k;
    };
    if (split < 0.0) {
      const long k = half_of(start);
      const EdgeId target = static_cast<EdgeId>(((k % 2) + 2) % 2);
      const double y0 = std::clamp(2.0 * (start - 0.5 * static_cast<double>(k)), 0.0, 1.0);
      fwd[e].push_back({0.0, 1.0, target, linear(0.0, 1.0, y0 < 1e-15 ? 0.0 : y0, 1.0)});
    } else {
      const long k = half_of(start);
      const EdgeId first = static_cast<EdgeId>(((k % 2) + 2) % 2);
      const EdgeId second = 1 - first;
      const double y0 = std::clamp(2.0 * (start - 0.5 * static_cast<double>(k)), 0.0, 1.0);
      fwd[e].push_back({0.0, split, first, linear(0.0, split, y0, 1.0)});
      fwd[e].push_back({split, 1.0, second, linear(split, 1.0, 0.0, y0)});
    }
  }
  std::ostringstream name;
  name << "rotation(" << a << ")";
  return Homeo(std::move(circle), std::move(fwd), name.str());
}

Homeo build_fan_map(std::shared_ptr<const Space> fan) {
  require_kind(*fan, SpaceKind::fan, "fan map");
  const int n_max = static_cast<int>(*fan->parameter("n_max"));
  EdgeMap fwd(fan->edge_count());
  fwd[0].push_back({0.0, 1.0, 0, linear(0, 1, 0, 1)});
  for (int n = 1; n <= n_max; ++n) {
    for (int i = 1; i <= 2 * n; ++i) {
      const int next = i % (2 * n) + 1;
      fwd[fan_edge(n, i)].push_back({0.0, 1.0, fan_edge(n, next), linear(0, 1, 0, 1)});
    }
  }
  return Homeo(std::move(fan), std::move(fwd), "fan");
}

}  // namespace hyperlab
