#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperlab/hyperspace.hpp"

namespace hyperlab {

/// Finite-orbit estimate of an omega-limit set (or alpha-limit set when
/// computed with the inverse map).
struct OmegaEstimate {
  GraphPoint seed;
  CompactSet estimate;
  int burn_in = 0;
  int window = 0;
  double delta = 0.0;
  double resolution = 0.0;
};

/// delta-thinned orbit points f^j(x), burn_in <= j <= burn_in + window.
OmegaEstimate omega_limit_estimate(const Homeo& h, GraphPoint x, int burn_in, int window,
                                   double delta);
OmegaEstimate alpha_limit_estimate(const Homeo& h, GraphPoint x, int burn_in, int window,
                                   double delta);

/// Candidate non-wandering set: net points (spacing delta/2) that come back
/// within delta of themselves in at most N steps, each thickened to its
/// cell of the net. Over-approximates on recurrence visible within N steps.
SubsetMask nonwandering_estimate(const Homeo& h, double delta, int steps);

struct WanderingComponent {
  SubsetMask closure;
  double diameter = 0.0;
  /// min over 1 <= j <= N of d_H(f^j(C), C).
  double min_return_distance = 0.0;
  /// First j with d_H(f^j(C), C) <= delta, if any.
  std::optional<int> first_return;
};

std::vector<WanderingComponent> wandering_components(const Homeo& h, double delta, int steps);

enum class PairLabel { distal, proximal_only, asymptotic, li_yorke };

std::string to_string(PairLabel label);

struct PairVerdict {
  PairLabel label = PairLabel::distal;
  double min_distance = 0.0;  // over 0..T
  double tail_max = 0.0;      // over T-W..T
  int horizon = 0;
  int tail = 0;
  double delta_prox = 0.0;
  double delta_asym = 0.0;
};

/// Label multiplier between delta_asym and the tail level that counts as
/// "not asymptotic" for a Li-Yorke verdict.
inline constexpr double kLiYorkeHysteresis = 3.0;

/// Finite-horizon classification of the pair (A, B) under the induced map.
PairVerdict classify_pair(const Homeo& h, const CompactSet& a, const CompactSet& b, int horizon,
                          int tail, double delta_prox, double delta_asym,
                          const HausdorffOptions& options = {});

struct NullFamilyReport {
  std::vector<double> diameters;
  std::vector<double> eps_grid;  // ascending
  /// large_counts[i] = number of members with diameter >= eps_grid[i].
  std::vector<std::size_t> large_counts;
  /// Counts are nonincreasing along the ascending grid.
  bool null_consistent = true;
};

NullFamilyReport null_family_check(const Space& space, const std::vector<CompactSet>& family,
                                   std::vector<double> eps_grid,
                                   const HausdorffOptions& options = {});

/// Smallest 1 <= p <= p_max with d_H(f^p(A), A) <= tol.
std::optional<int> detect_period(const Homeo& h, const CompactSet& a, int p_max, double tol,
                                 const HausdorffOptions& options = {});

struct ConditionViolation {
  std::size_t component = 0;
  std::string message;
};

/// A component C of the wandering region meeting the periodic set A must
/// lie in A; both tests are made at the combined mask resolution.
std::vector<ConditionViolation> check_condition_iii(const Space& space, const CompactSet& a,
                                                    const std::vector<SubsetMask>& components,
                                                    const HausdorffOptions& options = {});

struct ConditionIvReport {
  std::vector<SubsetMask> components;
  /// Return times found, one per component (none = candidate infinite orbit).
  std::vector<std::optional<int>> returns;
  bool holds = true;
};

/// For periodic A within B, every component of B minus A should return to
/// itself (within tol) after at most q_max steps.
ConditionIvReport check_condition_iv(const Homeo& h, const CompactSet& a, const CompactSet& b,
                                     int q_max, double tol, const HausdorffOptions& options = {});

}  // namespace hyperlab
