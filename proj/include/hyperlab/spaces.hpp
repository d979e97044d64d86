#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hyperlab/geometry.hpp"

namespace hyperlab {

/// Monotone piecewise-linear correspondence between parameter ranges.
/// `xs` strictly increasing; `ys` strictly increasing or strictly decreasing.
struct PlCurve {
  std::vector<double> xs;
  std::vector<double> ys;

  double operator()(double x) const;
  bool increasing() const { return ys.back() > ys.front(); }
  /// The inverse correspondence (swapped table, re-sorted by x).
  PlCurve inverted() const;
};

/// Part of an edge's image: source parameters [lo, hi] of one edge go onto
/// `target` along `curve`.
struct MapPiece {
  double lo = 0.0;
  double hi = 1.0;
  EdgeId target = 0;
  PlCurve curve;
};

using EdgeMap = std::vector<std::vector<MapPiece>>;

/// Homeomorphism of a metric graph given by edge correspondences; the
/// inverse tables are derived on construction.
class Homeo {
 public:
  /// `sup_error` bounds the distance between this PL map and the map it
  /// approximates; `inverse_sup_error` does the same for the inverse.
  Homeo(std::shared_ptr<const Space> space, EdgeMap forward, std::string name,
        double sup_error = 0.0, double inverse_sup_error = 0.0);

  const Space& space() const { return *space_; }
  std::shared_ptr<const Space> space_ptr() const { return space_; }
  const std::string& name() const { return name_; }
  const EdgeMap& forward() const { return forward_; }
  const EdgeMap& backward() const { return backward_; }
  double sup_error() const { return sup_error_; }
  double inverse_sup_error() const { return inverse_sup_error_; }
  /// Upper bound on the stretch of any piece (target arclength over source
  /// arclength).
  double lipschitz() const { return lipschitz_; }
  double inverse_lipschitz() const { return inverse_lipschitz_; }

  GraphPoint apply(GraphPoint p) const;
  GraphPoint apply_inverse(GraphPoint p) const;
  Homeo inverse() const;

 private:
  Homeo(std::shared_ptr<const Space> space, EdgeMap forward, EdgeMap backward, std::string name,
        double sup_error, double inverse_sup_error);

  std::shared_ptr<const Space> space_;
  EdgeMap forward_;
  EdgeMap backward_;
  std::string name_;
  double sup_error_;
  double inverse_sup_error_;
  double lipschitz_ = 1.0;
  double inverse_lipschitz_ = 1.0;
};

GraphPoint apply_point(const Homeo& h, GraphPoint p);
Homeo invert(const Homeo& h);

/// Violations of the homeomorphism invariants: piece coverage, image tiling,
/// continuity across piece boundaries and vertices, inverse consistency.
/// Empty means the map passed.
std::vector<std::string> check_homeomorphism(const Homeo& h);

// Spaces.
std::shared_ptr<const Space> build_interval();
std::shared_ptr<const Space> build_circle(double circumference);
std::shared_ptr<const Space> build_star(int branches, double branch_length);

struct FanSpec {
  int n_max = 1;
};

/// Spine (0,0)-(0,1) plus fans 1..n_max; fan n has 2n segments from the
/// origin, the lower n mirroring the upper n.
std::shared_ptr<const Space> build_fan_space(FanSpec spec);

/// Edge id of segment i (1-based, 1 <= i <= 2n) of fan n.
EdgeId fan_edge(int n, int i);
/// Tip of segment i of fan n in the plane.
Vec2 fan_tip(int n, int i);
/// Largest diameter among the fans dropped by a truncation at n_max.
double fan_truncation_diameter(int n_max);

// Maps.
Homeo build_identity(std::shared_ptr<const Space> space);

/// t -> t^2 on the interval as a PL table with 2^12 uniform breakpoints.
Homeo build_square_map(std::shared_ptr<const Space> interval);

/// Increasing PL homeomorphism of the interval through the knots (xs, ys);
/// both lists must start at 0 and end at 1.
Homeo build_interval_map(std::shared_ptr<const Space> interval, std::vector<double> xs,
                         std::vector<double> ys);

/// Rigid rotation by `alpha` turns.
Homeo build_rotation(std::shared_ptr<const Space> circle, double alpha);

/// Fixes the spine, rotates each fan n by one segment (i -> i+1 mod 2n),
/// preserving the arclength fraction from the origin.
Homeo build_fan_map(std::shared_ptr<const Space> fan);

/// Point of the circle at angular position `turns` (in [0,1)).
GraphPoint circle_point(const Space& circle, double turns);
/// Angular position in [0,1) of a circle point.
double circle_turns(const Space& circle, GraphPoint p);

}  // namespace hyperlab
