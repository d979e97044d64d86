#include <cmath>
#include <random>

#include "doctest.h"
#include "hyperlab/errors.hpp"
#include "hyperlab/hyperspace.hpp"
#include "random_sets.hpp"

using namespace hyperlab;

using testing::random_set;

TEST_CASE("Hausdorff distance basics") {
  auto i = build_interval();
  const CompactSet a = CompactSet::arc(*i, 0, 0.0, 1.0);
  const CompactSet b = CompactSet::arc(*i, 0, 0.0, 0.5);
  CHECK(hausdorff(*i, a, a).value == 0.0);
  CHECK(hausdorff(*i, a, b).value == doctest::Approx(0.5).epsilon(1e-12));

  // Brute force over a 1e-4 grid.
  double sup = 0.0;
  for (int j = 0; j <= 10000; ++j) {
    const double x = j * 1e-4;
    sup = std::max(sup, std::max(0.0, x - 0.5));
  }
  CHECK(hausdorff(*i, a, b).value == doctest::Approx(sup).epsilon(1e-9));

  const CompactSet p = CompactSet::point(*i, {0, 0.2});
  const CompactSet q = CompactSet::point(*i, {0, 0.9});
  CHECK(hausdorff(*i, p, q).value == doctest::Approx(0.7));
  CHECK_THROWS_AS(CompactSet(*i, SubsetMask(1)), DomainError);
}

TEST_CASE("exact and sampled Hausdorff agree within the error bound") {
  std::mt19937_64 rng(7);
  for (auto space : {build_interval(), build_circle(1.0), build_star(4, 0.7)}) {
    for (int trial = 0; trial < 60; ++trial) {
      const CompactSet a = random_set(*space, rng);
      const CompactSet b = random_set(*space, rng);
      const auto exact = hausdorff(*space, a, b);
      HausdorffOptions sampled;
      sampled.method = HausdorffMethod::sampled;
      sampled.spacing = 1e-3;
      const auto approx = hausdorff(*space, a, b, sampled);
      CHECK(std::abs(exact.value - approx.value) <= approx.error_bound + 1e-12);
    }
  }
}

TEST_CASE("Euclidean Hausdorff on the fan") {
  auto fan = build_fan_space({2});
  const CompactSet spine = CompactSet::arc(*fan, 0, 0.0, 1.0);
  const CompactSet origin = CompactSet::point(*fan, {0, 0.0});
  const auto r = hausdorff(*fan, spine, origin);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  const CompactSet seg = CompactSet::arc(*fan, fan_edge(1, 1), 0.0, 1.0);
  // Tip (1,1) is sqrt(2) from the origin and 1 from the spine top (0,1).
  CHECK(hausdorff(*fan, seg, spine).value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(11);
  auto s = build_star(3, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const CompactSet a = random_set(*s, rng), b = random_set(*s, rng), c = random_set(*s, rng);
    const double ab = hausdorff(*s, a, b).value, ba = hausdorff(*s, b, a).value;
    const double bc = hausdorff(*s, b, c).value, ac = hausdorff(*s, a, c).value;
    CHECK(ab >= 0.0);
    CHECK(std::abs(ab - ba) <= 1e-9);
    CHECK(ac <= ab + bc + 1e-9);
    CHECK(hausdorff(*s, a, a).value <= 1e-9);
  }
}

TEST_CASE("induced maps") {
  auto i = build_interval();
  auto id = build_identity(i);
  const CompactSet a = CompactSet::arc(*i, 0, 0.2, 0.6);
  CHECK(induced_apply(id, a) == a);

  auto sq = build_square_map(i);
  const CompactSet img = induced_apply(sq, CompactSet::arc(*i, 0, 0.5, 0.8));
  REQUIRE(img.mask().on(0).size() == 1);
  CHECK(img.mask().on(0)[0].lo == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(img.mask().on(0)[0].hi == doctest::Approx(0.64).epsilon(1e-6));

  auto c = build_circle(1.0);
  auto r = build_rotation(c, 0.25);
  const CompactSet arc = CompactSet::arc(*c, 0, 0.0, 0.2);  // turns [0, 0.1]
  const CompactSet moved = induced_apply(r, arc);
  SubsetMask expect(2);
  expect.add(0, 0.5, 0.7);  // turns [0.25, 0.35]
  CHECK(hausdorff(*c, moved, CompactSet(*c, expect)).value < 1e-12);
}

TEST_CASE("images commute with unions") {
  std::mt19937_64 rng(3);
  auto c = build_circle(1.0);
  auto r = build_rotation(c, (std::sqrt(5.0) - 1.0) / 2.0);
  auto fan = build_fan_space({3});
  auto F = build_fan_map(fan);
  for (int trial = 0; trial < 50; ++trial) {
    for (const Homeo* h : {&r, &F}) {
      const Space& s = h->space();
      const CompactSet a = random_set(s, rng), b = random_set(s, rng);
      const CompactSet lhs = induced_apply(*h, union_sets(s, {a, b}));
      const CompactSet rhs = union_sets(s, {induced_apply(*h, a), induced_apply(*h, b)});
      CHECK(hausdorff(s, lhs, rhs).value <= 1e-9);
    }
  }
}

TEST_CASE("unions and connectedness") {
  auto i = build_interval();
  const CompactSet p = CompactSet::point(*i, {0, 0.4});
  CHECK(union_sets(*i, {p, p}) == p);
  CHECK_THROWS_AS(union_sets(*i, {}), DomainError);
  SubsetMask two(1);
  two.add(0, 0.0, 0.2);
  two.add(0, 0.5, 0.7);
  CHECK_FALSE(is_connected(*i, CompactSet(*i, two)));
  CHECK(is_connected(*i, CompactSet::arc(*i, 0, 0.1, 0.9)));
}

TEST_CASE("union stability") {
  auto i = build_interval();
  const CompactSet a = CompactSet::arc(*i, 0, 0.1, 0.3);
  const CompactSet b = CompactSet::arc(*i, 0, 0.6, 0.7);
  auto same = union_stability_check(*i, {{a, a}, {b, b}}, 0.1);
  CHECK(same.holds);
  CHECK(same.measured == 0.0);

  auto near = union_stability_check(
      *i, {{a, CompactSet::arc(*i, 0, 0.15, 0.35)}, {b, CompactSet::arc(*i, 0, 0.6, 0.75)}}, 0.1);
  CHECK(near.precondition_ok);
  CHECK(near.measured <= 0.1 + near.error_bound);
  CHECK(near.holds);

  std::mt19937_64 rng(5);
  auto fan = build_fan_space({3});
  std::vector<std::pair<CompactSet, CompactSet>> pairs;
  double eps = 0.0;
  for (int j = 0; j < 50; ++j) {
    CompactSet x = random_set(*fan, rng), y = random_set(*fan, rng);
    eps = std::max(eps, hausdorff(*fan, x, y).value);
    pairs.emplace_back(x, y);
  }
  auto r = union_stability_check(*fan, pairs, eps);
  CHECK(r.precondition_ok);
  CHECK(r.holds);
}

TEST_CASE("hyperspace nets") {
  auto i = build_interval();
  CHECK(hyper_net(*i, 0.1, NetMode::full, 1, 42).elements.size() == 1);
  const auto conn = hyper_net(*i, 0.05, NetMode::connected, 40, 42);
  CHECK(conn.elements.size() > 1);
  for (const CompactSet& a : conn.elements) {
    CHECK(is_connected(*i, a));
    CHECK(a.mask().on(0).size() == 1);
  }
  const auto full = hyper_net(*i, 0.1, NetMode::full, 200, 42);
  const auto grid = sample_net(*i, 0.1);
  for (const CompactSet& a : full.elements) {
    for (const Interval& iv : a.mask().on(0)) {
      CHECK(iv.lo == iv.hi);
      CHECK(std::any_of(grid.begin(), grid.end(),
                        [&](GraphPoint g) { return std::abs(g.t - iv.lo) < 1e-12; }));
    }
  }
  // Same seed, same net.
  const auto again = hyper_net(*i, 0.05, NetMode::connected, 40, 42);
  CHECK(again.elements == conn.elements);
  CHECK_THROWS_AS(hyper_net(*i, 0.0, NetMode::full, 3, 1), ParameterError);
}
