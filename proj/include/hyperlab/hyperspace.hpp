#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hyperlab/geometry.hpp"
#include "hyperlab/spaces.hpp"

namespace hyperlab {

/// Non-empty compact subset of a space, stored as a mask. The connected
/// flag is computed from the mask, never assumed.
class CompactSet {
 public:
  /// Throws DomainError on an empty mask.
  CompactSet(const Space& space, SubsetMask mask);

  static CompactSet point(const Space& space, GraphPoint p);
  static CompactSet points(const Space& space, const std::vector<GraphPoint>& pts,
                           double resolution = 0.0);
  static CompactSet arc(const Space& space, EdgeId e, double lo, double hi);
  static CompactSet whole(const Space& space);

  const SubsetMask& mask() const { return mask_; }
  bool connected() const { return connected_; }
  double resolution() const { return mask_.resolution(); }

  friend bool operator==(const CompactSet& a, const CompactSet& b) { return a.mask_ == b.mask_; }

 private:
  SubsetMask mask_;
  bool connected_ = false;
};

enum class HausdorffMethod {
  /// Exact on geodesic spaces; Euclidean spaces sample the first argument
  /// and measure exact point-to-segment distances to the second.
  automatic,
  /// Both sets sampled at the configured spacing, endpoints included.
  sampled,
};

struct HausdorffOptions {
  /// Sampling spacing in arclength; <= 0 means 1e-3 * space diameter.
  double spacing = 0.0;
  HausdorffMethod method = HausdorffMethod::automatic;
};

struct HausdorffResult {
  double value = 0.0;
  double error_bound = 0.0;
};

double effective_spacing(const Space& space, const HausdorffOptions& options);

HausdorffResult hausdorff(const Space& space, const CompactSet& a, const CompactSet& b,
                          const HausdorffOptions& options = {});

/// sup over a in A of d(a, B).
double directed_hausdorff(const Space& space, const SubsetMask& a, const SubsetMask& b,
                          const HausdorffOptions& options = {});

/// Distance from a point to a non-empty mask.
double distance_to_set(const Space& space, GraphPoint p, const SubsetMask& set);

/// inf over a in A, b in B of d(a, b); 0 when the masks meet.
double set_gap(const Space& space, const SubsetMask& a, const SubsetMask& b);

/// Largest distance between two points of the set (sampled at the
/// configured spacing on geodesic spaces, exact on Euclidean ones).
double set_diameter(const Space& space, const CompactSet& a, const HausdorffOptions& options = {});

/// Image f(A). Exact on masks: monotone PL pieces send closed intervals to
/// closed intervals. Resolution grows by the map's stretch and PL error.
CompactSet induced_apply(const Homeo& h, const CompactSet& a);
CompactSet induced_apply_inverse(const Homeo& h, const CompactSet& a);

/// Throws DomainError on an empty list.
CompactSet union_sets(const Space& space, const std::vector<CompactSet>& sets);

bool is_connected(const Space& space, const CompactSet& a);

struct UnionStabilityResult {
  bool precondition_ok = false;
  /// Indices of pairs whose own distance exceeded epsilon.
  std::vector<std::size_t> offending_pairs;
  double measured = 0.0;
  double error_bound = 0.0;
  bool holds = false;
};

/// If every pair satisfies d_H(A_i, B_i) <= eps, measures d_H of the unions
/// and checks it against eps plus the sampling error.
UnionStabilityResult union_stability_check(
    const Space& space, const std::vector<std::pair<CompactSet, CompactSet>>& pairs, double eps,
    const HausdorffOptions& options = {});

enum class NetMode { full, connected };

struct HyperNet {
  std::vector<CompactSet> elements;
  NetMode mode = NetMode::full;
  double delta = 0.0;
};

struct HyperNetOptions {
  /// Largest number of points in a full-mode element.
  int max_points = 6;
  /// Upper bound on growth steps for a connected element; <= 0 derives it
  /// from the space size.
  int max_growth_steps = 0;
};

/// Random finite surrogate of 2^X (full) or C(X) (connected), deterministic
/// for a given seed. Elements are pairwise distinct.
HyperNet hyper_net(const Space& space, double delta, NetMode mode, std::size_t budget,
                   std::uint64_t seed, const HyperNetOptions& options = {});

}  // namespace hyperlab
