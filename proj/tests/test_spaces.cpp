#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hyperlab/errors.hpp"
#include "hyperlab/spaces.hpp"

using namespace hyperlab;

TEST_CASE("basic space builders") {
  auto i = build_interval();
  CHECK(i->edge_count() == 1);
  CHECK(i->edge(0).length == 1.0);

  auto c = build_circle(1.0);
  CHECK(c->edge_count() == 2);
  CHECK(c->edge(0).length == 0.5);
  CHECK(c->edge(1).length == 0.5);
  CHECK(c->vertex_count() == 2);

  auto s = build_star(3, 1.0);
  CHECK(s->vertex_count() == 4);
  CHECK(s->edge_count() == 3);
  CHECK_THROWS_AS(build_star(2, 1.0), ParameterError);
  CHECK_THROWS_AS(build_circle(0.0), ParameterError);
}

TEST_CASE("fan space geometry") {
  auto f1 = build_fan_space({1});
  CHECK(f1->edge_count() == 3);
  const Vec2 up = fan_tip(1, 1), down = fan_tip(1, 2);
  CHECK(up.x == doctest::Approx(1.0));
  CHECK(up.y == doctest::Approx(1.0));
  CHECK(down.x == doctest::Approx(1.0));
  CHECK(down.y == doctest::Approx(-1.0));

  const Vec2 a = fan_tip(2, 1), b = fan_tip(2, 2);
  CHECK(a.x == doctest::Approx(0.5));
  CHECK(a.y == doctest::Approx(1.0 / 3.0));
  CHECK(b.x == doctest::Approx(1.0));
  CHECK(b.y == doctest::Approx(0.5));

  for (int n = 1; n <= 6; ++n) {
    CHECK(build_fan_space({n})->edge_count() == static_cast<std::size_t>(1 + n * (n + 1)));
  }
  // Segment lengths come from the embedding.
  auto f2 = build_fan_space({2});
  const Edge& e = f2->edge(fan_edge(2, 1));
  CHECK(e.length == doctest::Approx(std::hypot(0.5, 1.0 / 3.0)));
}

TEST_CASE("square map values") {
  auto f = build_square_map(build_interval());
  CHECK(f.apply({0, 0.0}).t == 0.0);
  CHECK(f.apply({0, 1.0}).t == 1.0);
  CHECK(f.apply({0, 0.5}).t == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(f.apply_inverse(f.apply({0, 0.7})).t == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(f.sup_error() > 0.0);
  CHECK(f.sup_error() < 1e-6);
  CHECK(check_homeomorphism(f).empty());
}

TEST_CASE("rotations") {
  auto c = build_circle(1.0);
  auto r0 = build_rotation(c, 0.0);
  auto half = build_rotation(c, 0.5);
  for (double turns : {0.0, 0.13, 0.5, 0.77}) {
    const GraphPoint p = circle_point(*c, turns);
    CHECK(point_distance(*c, r0.apply(p), p) < 1e-12);
    CHECK(point_distance(*c, half.apply(half.apply(p)), p) < 1e-12);
  }
  CHECK(check_homeomorphism(half).empty());

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  auto g = build_rotation(c, golden);
  CHECK(check_homeomorphism(g).empty());
  std::vector<GraphPoint> orbit{circle_point(*c, 0.3)};
  for (int j = 0; j < 200; ++j) orbit.push_back(g.apply(orbit.back()));
  double worst = 0.0;
  for (GraphPoint q : sample_net(*c, 1e-3)) {
    double best = 1e300;
    for (GraphPoint p : orbit) best = std::min(best, point_distance(*c, p, q));
    worst = std::max(worst, best);
  }
  CHECK(worst <= 0.02);
}

TEST_CASE("fan map") {
  auto fan = build_fan_space({4});
  auto F = build_fan_map(fan);
  CHECK(check_homeomorphism(F).empty());
  const GraphPoint spine{0, 0.37};
  CHECK(F.apply(spine) == spine);
  const GraphPoint moved = F.apply({fan_edge(2, 1), 0.5});
  CHECK(moved.edge == fan_edge(2, 2));
  CHECK(moved.t == doctest::Approx(0.5));
  for (int n = 1; n <= 4; ++n) {
    for (int i = 1; i <= 2 * n; ++i) {
      GraphPoint p{fan_edge(n, i), 0.3};
      GraphPoint q = p;
      for (int j = 0; j < 2 * n; ++j) q = F.apply(q);
      CHECK(point_distance(*fan, p, q) < 1e-12);
    }
  }
  CHECK_THROWS_AS(build_fan_map(build_interval()), TypeError);
}

TEST_CASE("identity and inverse") {
  auto c = build_circle(2.0);
  auto id = build_identity(c);
  const GraphPoint p{1, 0.25};
  CHECK(apply_point(id, p) == p);
  auto r = build_rotation(c, 0.3);
  auto ri = invert(r);
  CHECK(point_distance(*c, ri.apply(r.apply(p)), p) < 1e-12);
}

TEST_CASE("broken maps are reported") {
  auto s = build_star(3, 1.0);
  EdgeMap forward(3);
  // Edges 0 and 1 both go onto edge 0.
  forward[0].push_back(MapPiece{0.0, 1.0, 0, PlCurve{{0.0, 1.0}, {0.0, 1.0}}});
  forward[1].push_back(MapPiece{0.0, 1.0, 0, PlCurve{{0.0, 1.0}, {0.0, 1.0}}});
  forward[2].push_back(MapPiece{0.0, 1.0, 2, PlCurve{{0.0, 1.0}, {0.0, 1.0}}});
  bool flagged = false;
  try {
    Homeo h(s, forward, "broken");
    flagged = !check_homeomorphism(h).empty();
  } catch (const Error&) {
    flagged = true;
  }
  CHECK(flagged);
}

TEST_CASE("interval map builder") {
  auto i = build_interval();
  auto h = build_interval_map(i, {0.0, 0.5, 1.0}, {0.0, 0.2, 1.0});
  CHECK(h.apply({0, 0.25}).t == doctest::Approx(0.1));
  CHECK(h.apply_inverse({0, 0.6}).t == doctest::Approx(0.75));
  CHECK(check_homeomorphism(h).empty());
  CHECK_THROWS(build_interval_map(i, {0.0, 0.5, 1.0}, {0.0, 0.7, 0.6}));
}
