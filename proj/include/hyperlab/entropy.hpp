#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperlab/clique.hpp"
#include "hyperlab/hyperspace.hpp"

namespace hyperlab {

/// Dense symmetric matrix with zero diagonal.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t n = 0) : n_(n), data_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  /// Smallest off-diagonal entry (+infinity with fewer than two rows).
  double min_off_diagonal() const;
  double max_entry() const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Orbits of a family under the induced map, with pairwise separation
/// max_{0<=j<=m} d_H(f^j A, f^j B) for every prefix horizon m <= n.
struct TrajectoryBundle {
  std::vector<CompactSet> family;
  int horizon = 0;
  /// trajectories[i][j] = f^j(family[i]).
  std::vector<std::vector<CompactSet>> trajectories;
  /// prefix_sep[m](a, b) = max over 0..m of d_H at step j.
  std::vector<SymMatrix> prefix_sep;
  /// Largest Hausdorff error bound met while filling the matrices.
  double error_bound = 0.0;

  const SymMatrix& sep_matrix() const { return prefix_sep.at(static_cast<std::size_t>(horizon)); }
};

struct BundleOptions {
  HausdorffOptions hausdorff;
};

TrajectoryBundle bundle(const Homeo& h, const std::vector<CompactSet>& family, int n,
                        const BundleOptions& options = {});

enum class SepMethod { exact, greedy };

std::string to_string(SepMethod m);

/// Vertex cap above which exact clique search falls back to greedy.
inline constexpr std::size_t kExactCliqueCap = 600;

struct SepCount {
  std::size_t count = 0;
  std::vector<std::size_t> witness;
  SepMethod method = SepMethod::exact;
  /// Set when exact was requested but the cap forced the greedy method.
  bool fell_back = false;
};

/// Graph with an edge wherever the entry is strictly greater than eps.
BitGraph separation_graph(const SymMatrix& sep, double eps);

/// Certified lower bound on sep(n, f, eps) over the family: the size of a
/// genuinely separated subfamily.
SepCount sep_count(const SymMatrix& sep, double eps, SepMethod method);
SepCount sep_count(const TrajectoryBundle& b, double eps, SepMethod method);

struct ProfileEntry {
  double eps = 0.0;
  int n = 0;
  SepCount sep;
};

struct ProfileSlope {
  double eps = 0.0;
  std::optional<double> slope;
};

/// Net-relative lower bounds on sep counts per (eps, n) and fitted growth
/// rates of ln(count) against n.
struct EntropyProfile {
  std::vector<double> eps_list;  // descending
  std::vector<int> n_list;       // ascending
  std::vector<ProfileEntry> entries;
  std::vector<ProfileSlope> slopes;
  std::size_t family_size = 0;

  const ProfileEntry& at(double eps, int n) const;
};

struct ProfileOptions {
  BundleOptions bundle;
};

EntropyProfile entropy_profile(const Homeo& h, const std::vector<CompactSet>& family,
                               std::vector<double> eps_list, std::vector<int> n_list,
                               SepMethod method, const ProfileOptions& options = {});
EntropyProfile entropy_profile(const Homeo& h, const HyperNet& net, std::vector<double> eps_list,
                               std::vector<int> n_list, SepMethod method,
                               const ProfileOptions& options = {});

/// Least-squares slope of ln(count) against n over the upper half of the
/// n grid (at least three points); none when fewer than three n values.
std::optional<double> fit_slope(const std::vector<int>& ns, const std::vector<std::size_t>& counts);

/// Violations of: counts nonincreasing in eps, nondecreasing in n.
std::vector<std::string> profile_monotonicity_violations(const EntropyProfile& p);

/// (1/n) ln M: the entropy lower bound certified by M sets separated at
/// horizon n.
double witness_bound(std::size_t cardinality, int horizon);

struct SeparationCheck {
  bool is_separated = false;
  double eps_measured = 0.0;
  double error_bound = 0.0;
};

SeparationCheck verify_separated(const Homeo& h, const std::vector<CompactSet>& family, int n,
                                 double eps_claimed, const BundleOptions& options = {});

struct Example5Witness {
  int k = 0;
  int m = 0;
  std::vector<CompactSet> family;
  /// sigma[i] holds the 2m arc-length numerators (1..k) of family[i].
  std::vector<std::vector<int>> sigma;
};

/// Connected family A_sigma, sigma in {1..k}^{2m}: the union over the first
/// 2m segments of fan 2m of the origin-anchored subarcs of length fraction
/// sigma_i / k.
Example5Witness witness_example5(const Space& fan, int k, int m);

struct Lemma32Options {
  int backward_depth = 64;  // J_max
  /// Largest n * k accepted (the family has 2^(n k) members).
  int max_exponent = 16;
};

struct Lemma32Witness {
  bool accepted = false;
  std::string diagnostic;
  /// Smallest distance from any x_i to the rest of the truncated orbit
  /// closures (other orbit points, alpha and omega approximations).
  double margin = 0.0;
  /// Distance between the two deepest backward points, used as the
  /// resolution of the alpha-limit approximation.
  double alpha_resolution = 0.0;
  int horizon = 0;
  std::vector<CompactSet> family;
  /// Bit j*n + i of labels[s] is set when x_i is in sigma_j.
  std::vector<std::uint64_t> labels;
};

/// Point-set family A_sigma, sigma in P({1..n})^k, built from the deep
/// backward tails and the selected backward iterates of the seeds.
Lemma32Witness witness_lemma32(const Homeo& h, const std::vector<GraphPoint>& seeds, int k,
                               const Lemma32Options& options = {});

}  // namespace hyperlab
