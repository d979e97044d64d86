#include "hyperlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperlab/errors.hpp"
#include "hyperlab/parallel.hpp"

namespace hyperlab {

double SymMatrix::min_off_diagonal() const {
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) out = std::min(out, data_[i * n_ + j]);
  }
  return out;
}

double SymMatrix::max_entry() const {
  double out = 0.0;
  for (double v : data_) out = std::max(out, v);
  return out;
}

TrajectoryBundle bundle(const Homeo& h, const std::vector<CompactSet>& family, int n,
                        const BundleOptions& options) {
  if (n < 0) throw ParameterError("bundle: horizon must be >= 0");
  if (family.empty()) throw ParameterError("bundle: family must be non-empty");
  const Space& space = h.space();
  TrajectoryBundle b;
  b.family = family;
  b.horizon = n;
  const std::size_t count = family.size();
  b.trajectories.resize(count);
  parallel_for(count, [&](std::size_t i) {
    auto& orbit = b.trajectories[i];
    orbit.reserve(static_cast<std::size_t>(n) + 1);
    orbit.push_back(family[i]);
    for (int j = 1; j <= n; ++j) orbit.push_back(induced_apply(h, orbit.back()));
  });

  std::vector<double> row_error(count, 0.0);
  for (int j = 0; j <= n; ++j) {
    SymMatrix step = j == 0 ? SymMatrix(count) : b.prefix_sep.back();
    const auto js = static_cast<std::size_t>(j);
    parallel_for(count, [&](std::size_t a) {
      for (std::size_t c = a + 1; c < count; ++c) {
        const HausdorffResult r =
            hausdorff(space, b.trajectories[a][js], b.trajectories[c][js], options.hausdorff);
        step.set(a, c, std::max(step(a, c), r.value));
        row_error[a] = std::max(row_error[a], r.error_bound);
      }
    });
    b.prefix_sep.push_back(std::move(step));
  }
  for (double e : row_error) b.error_bound = std::max(b.error_bound, e);
  return b;
}

std::string to_string(SepMethod m) { return m == SepMethod::exact ? "exact" : "greedy"; }

BitGraph separation_graph(const SymMatrix& sep, double eps) {
  BitGraph g(sep.size());
  for (std::size_t i = 0; i < sep.size(); ++i) {
    for (std::size_t j = i + 1; j < sep.size(); ++j) {
      if (sep(i, j) > eps) g.connect(i, j);
    }
  }
  return g;
}

namespace {

SepCount count_on_graph(const BitGraph& g, SepMethod method) {
  SepCount out;
  out.method = method;
  if (method == SepMethod::exact && g.size() > kExactCliqueCap) {
    out.method = SepMethod::greedy;
    out.fell_back = true;
  }
  out.witness = out.method == SepMethod::exact ? max_clique(g).members : greedy_clique(g);
  out.count = out.witness.size();
  return out;
}

}  // namespace

SepCount sep_count(const SymMatrix& sep, double eps, SepMethod method) {
  if (!(eps > 0.0)) throw ParameterError("sep_count: epsilon must be positive");
  return count_on_graph(separation_graph(sep, eps), method);
}

SepCount sep_count(const TrajectoryBundle& b, double eps, SepMethod method) {
  return sep_count(b.sep_matrix(), eps, method);
}

const ProfileEntry& EntropyProfile::at(double eps, int n) const {
  for (const ProfileEntry& e : entries) {
    if (e.eps == eps && e.n == n) return e;
  }
  throw ParameterError("profile has no entry for the requested (eps, n)");
}

std::optional<double> fit_slope(const std::vector<int>& ns, const std::vector<std::size_t>& counts) {
  if (ns.size() != counts.size() || ns.size() < 3) return std::nullopt;
  const std::size_t take = std::max<std::size_t>(3, (ns.size() + 1) / 2);
  const std::size_t first = ns.size() - take;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = first; i < ns.size(); ++i) {
    sx += ns[i];
    sy += std::log(static_cast<double>(std::max<std::size_t>(counts[i], 1)));
  }
  const double mx = sx / static_cast<double>(take);
  const double my = sy / static_cast<double>(take);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < ns.size(); ++i) {
    const double dx = ns[i] - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(static_cast<double>(std::max<std::size_t>(counts[i], 1))) - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

EntropyProfile entropy_profile(const Homeo& h, const std::vector<CompactSet>& family,
                               std::vector<double> eps_list, std::vector<int> n_list,
                               SepMethod method, const ProfileOptions& options) {
  if (eps_list.empty() || n_list.empty()) throw ParameterError("entropy_profile: empty grid");
  for (double e : eps_list) {
    if (!(e > 0.0)) throw ParameterError("entropy_profile: epsilon must be positive");
  }
  for (int n : n_list) {
    if (n < 0) throw ParameterError("entropy_profile: n must be >= 0");
  }
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  eps_list.erase(std::unique(eps_list.begin(), eps_list.end()), eps_list.end());
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());

  const TrajectoryBundle b = bundle(h, family, n_list.back(), options.bundle);
  EntropyProfile p;
  p.eps_list = eps_list;
  p.n_list = n_list;
  p.family_size = family.size();

  const std::size_t ne = eps_list.size();
  const std::size_t nn = n_list.size();
  std::vector<SepCount> raw(ne * nn);
  parallel_for(ne, [&](std::size_t ei) {
    std::optional<BitGraph> previous;
    for (std::size_t ni = 0; ni < nn; ++ni) {
      BitGraph g = separation_graph(b.prefix_sep[static_cast<std::size_t>(n_list[ni])], eps_list[ei]);
      if (previous && *previous == g) {
        raw[ei * nn + ni] = raw[ei * nn + ni - 1];
      } else {
        raw[ei * nn + ni] = count_on_graph(g, method);
      }
      previous = std::move(g);
    }
  });

  // A set separated at a coarser threshold or a shorter horizon stays
  // separated, so such witnesses are valid lower bounds here too.
  std::vector<SepCount> best = raw;
  for (std::size_t ei = 0; ei < ne; ++ei) {
    for (std::size_t ni = 0; ni < nn; ++ni) {
      SepCount& cur = best[ei * nn + ni];
      if (ni > 0 && best[ei * nn + ni - 1].count > cur.count) cur = best[ei * nn + ni - 1];
      if (ei > 0 && best[(ei - 1) * nn + ni].count > cur.count) cur = best[(ei - 1) * nn + ni];
    }
  }
  for (std::size_t ei = 0; ei < ne; ++ei) {
    std::vector<std::size_t> counts;
    for (std::size_t ni = 0; ni < nn; ++ni) {
      p.entries.push_back({eps_list[ei], n_list[ni], best[ei * nn + ni]});
      counts.push_back(best[ei * nn + ni].count);
    }
    p.slopes.push_back({eps_list[ei], fit_slope(n_list, counts)});
  }
  return p;
}

EntropyProfile entropy_profile(const Homeo& h, const HyperNet& net, std::vector<double> eps_list,
                               std::vector<int> n_list, SepMethod method,
                               const ProfileOptions& options) {
  return entropy_profile(h, net.elements, std::move(eps_list), std::move(n_list), method, options);
}

std::vector<std::string> profile_monotonicity_violations(const EntropyProfile& p) {
  std::vector<std::string> out;
  const std::size_t nn = p.n_list.size();
  for (std::size_t ei = 0; ei < p.eps_list.size(); ++ei) {
    for (std::size_t ni = 0; ni < nn; ++ni) {
      const std::size_t c = p.entries[ei * nn + ni].sep.count;
      if (ni > 0 && p.entries[ei * nn + ni - 1].sep.count > c) {
        out.push_back("count decreases with n at eps=" + std::to_string(p.eps_list[ei]));
      }
      if (ei > 0 && p.entries[(ei - 1) * nn + ni].sep.count > c) {
        out.push_back("count decreases as eps shrinks at n=" + std::to_string(p.n_list[ni]));
      }
    }
  }
  return out;
}

double witness_bound(std::size_t cardinality, int horizon) {
  if (horizon <= 0) throw ParameterError("witness_bound: horizon must be positive");
  if (cardinality == 0) throw ParameterError("witness_bound: empty witness");
  return std::log(static_cast<double>(cardinality)) / horizon;
}

SeparationCheck verify_separated(const Homeo& h, const std::vector<CompactSet>& family, int n,
                                 double eps_claimed, const BundleOptions& options) {
  const TrajectoryBundle b = bundle(h, family, n, options);
  SeparationCheck out;
  out.eps_measured = b.sep_matrix().min_off_diagonal();
  out.is_separated = out.eps_measured > eps_claimed;
  out.error_bound = b.error_bound;
  return out;
}

Example5Witness witness_example5(const Space& fan, int k, int m) {
  if (fan.kind() != SpaceKind::fan) throw TypeError("witness_example5 needs the fan space");
  if (k < 2) throw ParameterError("witness_example5: k must be >= 2");
  if (m < 1) throw ParameterError("witness_example5: m must be >= 1");
  const int n_max = static_cast<int>(*fan.parameter("n_max"));
  if (n_max < 2 * m) throw ParameterError("witness_example5: fan space needs n_max >= 2m");
  const int len = 2 * m;
  const double total = std::pow(static_cast<double>(k), len);
  if (total > 1e6) throw ParameterError("witness_example5: family larger than 10^6 sets");

  Example5Witness w;
  w.k = k;
  w.m = m;
  std::vector<int> sigma(static_cast<std::size_t>(len), 1);
  while (true) {
    SubsetMask mask(fan.edge_count());
    for (int i = 1; i <= len; ++i) {
      mask.add(fan_edge(len, i), 0.0, static_cast<double>(sigma[i - 1]) / k);
    }
    w.family.emplace_back(fan, std::move(mask));
    w.sigma.push_back(sigma);
    int pos = len - 1;
    while (pos >= 0 && sigma[pos] == k) sigma[pos--] = 1;
    if (pos < 0) break;
    ++sigma[pos];
  }
  return w;
}

Lemma32Witness witness_lemma32(const Homeo& h, const std::vector<GraphPoint>& seeds, int k,
                               const Lemma32Options& options) {
  const Space& space = h.space();
  const int n = static_cast<int>(seeds.size());
  const int depth = options.backward_depth;
  if (n < 1) throw ParameterError("witness_lemma32: need at least one seed point");
  if (k < 1) throw ParameterError("witness_lemma32: horizon k must be >= 1");
  if (n * k > options.max_exponent) {
    throw ParameterError("witness_lemma32: 2^(n k) sets exceeds the configured cap");
  }
  if (4 * k > 3 * depth) throw ParameterError("witness_lemma32: backward depth must be >= 4k/3");
  for (const GraphPoint& p : seeds) validate_point(space, p);

  Lemma32Witness w;
  w.horizon = k;
  std::vector<std::vector<GraphPoint>> backward(seeds.size());
  std::vector<std::vector<GraphPoint>> forward(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    backward[i].push_back(canonical(space, seeds[i]));
    forward[i].push_back(canonical(space, seeds[i]));
    for (int j = 1; j <= depth; ++j) {
      backward[i].push_back(h.apply_inverse(backward[i].back()));
      forward[i].push_back(h.apply(forward[i].back()));
    }
  }

  // The rest of the truncated orbit closures: every orbit point except the
  // seed itself. Tails of both orbits stand in for the alpha and omega sets.
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t o = 0; o < seeds.size(); ++o) {
      for (int j = 0; j <= depth; ++j) {
        if (o == i && j == 0) continue;
        margin = std::min({margin, point_distance(space, backward[i][0], backward[o][j]),
                           point_distance(space, backward[i][0], forward[o][j])});
      }
    }
    w.alpha_resolution =
        std::max(w.alpha_resolution, point_distance(space, backward[i][depth], backward[i][depth - 1]));
  }
  // Images of backward points under the forward map agree with the direct
  // orbit only up to rounding.
  w.margin = margin - 1e-12 * std::max(1.0, space.diameter());
  if (!(w.margin > 0.0)) {
    w.diagnostic = "seed points meet their own or each other's orbits or limit-set approximations "
                   "(margin <= 0); witness refused";
    return w;
  }
  w.accepted = true;

  std::vector<GraphPoint> tail;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (int j = k; j <= depth; ++j) tail.push_back(backward[i][j]);
  }
  const std::uint64_t members = std::uint64_t{1} << (n * k);
  w.family.reserve(members);
  w.labels.reserve(members);
  for (std::uint64_t label = 0; label < members; ++label) {
    std::vector<GraphPoint> pts = tail;
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < n; ++i) {
        if ((label >> (j * n + i)) & 1u) pts.push_back(backward[i][j]);
      }
    }
    w.family.push_back(CompactSet::points(space, pts, w.alpha_resolution));
    w.labels.push_back(label);
  }
  return w;
}

}  // namespace hyperlab
