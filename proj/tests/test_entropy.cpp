#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hyperlab/clique.hpp"
#include "hyperlab/entropy.hpp"
#include "hyperlab/errors.hpp"

using namespace hyperlab;

namespace {

// Largest subset of pairwise entries > eps, by enumeration.
std::size_t brute_force_sep(const SymMatrix& m, double eps) {
  const std::size_t n = m.size();
  std::size_t best = n > 0 ? 1 : 0;
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) {
      if (!(s >> a & 1u)) continue;
      for (std::size_t b = a + 1; b < n && ok; ++b) {
        if ((s >> b & 1u) && !(m(a, b) > eps)) ok = false;
      }
    }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(s)));
  }
  return best;
}

}  // namespace

TEST_CASE("sep count on a hand-built matrix") {
  SymMatrix m(5);
  const double v[5][5] = {{0, .3, .1, .5, .2},
                          {.3, 0, .4, .05, .6},
                          {.1, .4, 0, .35, .25},
                          {.5, .05, .35, 0, .45},
                          {.2, .6, .25, .45, 0}};
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = a + 1; b < 5; ++b) m.set(a, b, v[a][b]);
  }
  for (double eps : {0.01, 0.1, 0.15, 0.22, 0.3, 0.4, 0.55, 0.7}) {
    const SepCount c = sep_count(m, eps, SepMethod::exact);
    CHECK(c.count == brute_force_sep(m, eps));
    CHECK(c.witness.size() == c.count);
    for (std::size_t a : c.witness) {
      for (std::size_t b : c.witness) {
        if (a != b) CHECK(m(a, b) > eps);
      }
    }
    CHECK(sep_count(m, eps, SepMethod::greedy).count <= c.count);
  }
  CHECK(sep_count(m, 1.0, SepMethod::exact).count == 1);
  CHECK(sep_count(m, 0.01, SepMethod::exact).count == 5);
  CHECK_THROWS_AS(sep_count(m, 0.0, SepMethod::exact), ParameterError);
}

TEST_CASE("exact clique equals the subset oracle on random instances") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 18;
    SymMatrix m(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) m.set(a, b, u(rng));
    }
    const double eps = 0.2 + 0.6 * u(rng);
    CHECK(sep_count(m, eps, SepMethod::exact).count == brute_force_sep(m, eps));
  }
}

TEST_CASE("max clique on structured graphs") {
  BitGraph g(70);
  for (std::size_t a = 0; a < 70; ++a) {
    for (std::size_t b = a + 1; b < 70; ++b) {
      if ((a % 7) != (b % 7)) g.connect(a, b);  // complete 7-partite
    }
  }
  const auto r = max_clique(g);
  CHECK(r.optimal);
  CHECK(r.members.size() == 7);
  CHECK(max_clique(BitGraph(0)).members.empty());
  CHECK(max_clique(BitGraph(3)).members.size() == 1);
}

TEST_CASE("bundles") {
  auto c = build_circle(1.0);
  auto rot = build_rotation(c, 0.1234);
  std::vector<CompactSet> pts;
  for (double t : {0.0, 0.1, 0.45, 0.8}) pts.push_back(CompactSet::point(*c, circle_point(*c, t)));
  const auto b = bundle(rot, pts, 6);
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t d = 0; d < pts.size(); ++d) {
      const double direct = hausdorff(*c, pts[a], pts[d]).value;
      CHECK(b.sep_matrix()(a, d) == doctest::Approx(direct).epsilon(1e-9));
      CHECK(b.prefix_sep[0](a, d) == doctest::Approx(direct).epsilon(1e-9));
    }
  }
  auto id = build_identity(c);
  const auto b0 = bundle(id, pts, 0);
  const auto b5 = bundle(id, pts, 5);
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t d = 0; d < pts.size(); ++d) CHECK(b0.sep_matrix()(a, d) == b5.sep_matrix()(a, d));
  }
  CHECK_THROWS_AS(bundle(id, pts, -1), ParameterError);
  CHECK_THROWS_AS(bundle(id, {}, 1), ParameterError);
}

TEST_CASE("slope fitting") {
  CHECK_FALSE(fit_slope({1, 2}, {2, 4}).has_value());
  const auto s = fit_slope({1, 2, 3, 4}, {2, 4, 8, 16});
  REQUIRE(s.has_value());
  CHECK(*s == doctest::Approx(std::numbers::ln2));
  CHECK(*fit_slope({1, 2, 3}, {5, 5, 5}) == doctest::Approx(0.0));
}

TEST_CASE("identity profile is flat") {
  auto i = build_interval();
  auto id = build_identity(i);
  const auto net = hyper_net(*i, 0.05, NetMode::connected, 40, 9);
  const auto p = entropy_profile(id, net, {0.1, 0.05}, {1, 2, 3, 4}, SepMethod::exact);
  for (const auto& s : p.slopes) {
    REQUIRE(s.slope.has_value());
    CHECK(std::abs(*s.slope) < 1e-12);
  }
  CHECK(profile_monotonicity_violations(p).empty());
}

TEST_CASE("rotation profile has no growth") {
  auto c = build_circle(1.0);
  auto rot = build_rotation(c, (std::sqrt(5.0) - 1.0) / 2.0);
  const auto net = hyper_net(*c, 0.05, NetMode::connected, 80, 1);
  const auto p = entropy_profile(rot, net, {0.05}, {2, 4, 6, 8, 10, 12}, SepMethod::exact);
  REQUIRE(p.slopes.size() == 1);
  REQUIRE(p.slopes[0].slope.has_value());
  CHECK(*p.slopes[0].slope < 0.05);
  CHECK(profile_monotonicity_violations(p).empty());
}

TEST_CASE("witness bound and separation check") {
  CHECK(witness_bound(4, 2) == doctest::Approx(std::numbers::ln2));
  auto i = build_interval();
  auto id = build_identity(i);
  const CompactSet a = CompactSet::arc(*i, 0, 0.1, 0.2);
  const auto same = verify_separated(id, {a, a}, 3, 0.0);
  CHECK(same.eps_measured == 0.0);
  CHECK_FALSE(same.is_separated);
}

TEST_CASE("Example 5 witness families") {
  auto fan = build_fan_space({4});
  auto F = build_fan_map(fan);
  const auto w = witness_example5(*fan, 2, 1);
  CHECK(w.family.size() == 4);
  for (const CompactSet& a : w.family) CHECK(is_connected(*fan, a));
  const auto chk = verify_separated(F, w.family, 2, 0.0);
  CHECK(chk.eps_measured > 0.0);
  CHECK(witness_bound(w.family.size(), 2) == doctest::Approx(std::numbers::ln2).epsilon(1e-12));

  // sigma = (k, ..., k) is the full union of the 2m upper segments.
  const auto full = std::find(w.sigma.begin(), w.sigma.end(), std::vector<int>{2, 2});
  REQUIRE(full != w.sigma.end());
  const CompactSet& top = w.family[static_cast<std::size_t>(full - w.sigma.begin())];
  SubsetMask expect(fan->edge_count());
  expect.add(fan_edge(2, 1), 0.0, 1.0);
  expect.add(fan_edge(2, 2), 0.0, 1.0);
  CHECK(hausdorff(*fan, top, CompactSet(*fan, expect)).value < 1e-12);

  CHECK(witness_example5(*fan, 3, 2).family.size() == 81);
  CHECK_THROWS_AS(witness_example5(*build_fan_space({3}), 2, 2), ParameterError);
  CHECK_THROWS_AS(witness_example5(*build_interval(), 2, 1), TypeError);
}

TEST_CASE("Lemma 3.2 witness families") {
  auto sq = build_square_map(build_interval());
  const auto one = witness_lemma32(sq, {{0, 0.5}}, 1);
  REQUIRE(one.accepted);
  REQUIRE(one.family.size() == 2);
  // The two sets differ exactly in x_1.
  const auto& a = one.family[0].mask().on(0);
  const auto& b = one.family[1].mask().on(0);
  CHECK(std::abs(static_cast<long>(a.size()) - static_cast<long>(b.size())) == 1);

  const auto two = witness_lemma32(sq, {{0, 0.5}}, 2);
  REQUIRE(two.accepted);
  CHECK(two.family.size() == 4);
  const auto chk2 = verify_separated(sq, two.family, 2, two.margin);
  CHECK(chk2.eps_measured >= two.margin);

  const auto three = witness_lemma32(sq, {{0, 0.5}}, 3);
  REQUIRE(three.accepted);
  CHECK(verify_separated(sq, three.family, 3, three.margin).eps_measured >= three.margin);

  const auto big = witness_lemma32(
      sq, {{0, std::exp(-3.0)}, {0, std::exp(-5.0)}, {0, std::exp(-7.0)}}, 1);
  REQUIRE(big.accepted);
  CHECK(big.family.size() == 8);
  for (std::size_t x = 0; x < big.family.size(); ++x) {
    for (std::size_t y = x + 1; y < big.family.size(); ++y) {
      CHECK(hausdorff(sq.space(), big.family[x], big.family[y]).value > 0.0);
    }
  }
  // A fixed point has no wandering orbit to build from.
  CHECK_FALSE(witness_lemma32(sq, {{0, 0.0}}, 1).accepted);
}
