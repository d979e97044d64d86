#include <algorithm>
#include <cmath>
#include <queue>

#include "doctest.h"
#include "hyperlab/errors.hpp"
#include "hyperlab/geometry.hpp"
#include "hyperlab/spaces.hpp"

using namespace hyperlab;

namespace {

// Max gap between a fine probe grid and the nearest net point.
double density(const Space& s, const std::vector<GraphPoint>& net, double probe) {
  double worst = 0.0;
  for (const GraphPoint& q : sample_net(s, probe)) {
    double best = 1e300;
    for (const GraphPoint& p : net) best = std::min(best, point_distance(s, p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("point distance on the interval and circle") {
  auto i = build_interval();
  CHECK(point_distance(*i, {0, 0.2}, {0, 0.9}) == doctest::Approx(0.7));
  CHECK(point_distance(*i, {0, 0.4}, {0, 0.4}) == 0.0);

  auto c = build_circle(1.0);
  const GraphPoint p = circle_point(*c, 0.1);
  const GraphPoint q = circle_point(*c, 0.9);
  // Both ways round, by hand.
  const double forward = 0.8, backward = 0.2;
  CHECK(point_distance(*c, p, q) == doctest::Approx(std::min(forward, backward)).epsilon(1e-12));
  CHECK(point_distance(*c, q, p) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("vertex representations agree") {
  auto c = build_circle(1.0);
  // Vertex shared by both edges: end of edge 0 equals start of edge 1.
  CHECK(point_distance(*c, {0, 1.0}, {1, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(canonical(*c, {1, 0.0}) == canonical(*c, {0, 1.0}));
}

TEST_CASE("invalid points and spaces are rejected") {
  auto i = build_interval();
  CHECK_THROWS_AS(validate_point(*i, {0, 1.5}), InvalidPointError);
  CHECK_THROWS_AS(validate_point(*i, {3, 0.5}), InvalidPointError);
  CHECK_THROWS_AS(Space("loop", 1, {Edge{0, 0, 1.0, {}}}, MetricMode::geodesic), Error);
  CHECK_THROWS_AS(Space("neg", 2, {Edge{0, 1, -1.0, {}}}, MetricMode::geodesic), Error);
  CHECK_THROWS_AS(Space("split", 4, {Edge{0, 1, 1.0, {}}, Edge{2, 3, 1.0, {}}}, MetricMode::geodesic),
                  Error);
  CHECK_THROWS_AS(Space("flat", 2, {Edge{0, 1, 1.0, {}}}, MetricMode::ambient_euclidean), Error);
  CHECK_THROWS_AS(
      Space("bad length", 2, {Edge{0, 1, 2.0, {{0, 0}, {1, 0}}}}, MetricMode::ambient_euclidean),
      Error);
  CHECK_THROWS_AS(sample_net(*i, 0.0), ParameterError);
}

TEST_CASE("sample nets are dense") {
  auto i = build_interval();
  const auto net = sample_net(*i, 0.5);
  for (double t : {0.0, 0.5, 1.0}) {
    CHECK(std::any_of(net.begin(), net.end(),
                      [t](GraphPoint p) { return std::abs(p.t - t) < 1e-12; }));
  }
  CHECK(density(*i, net, 1e-3) <= 0.5 + 1e-12);

  auto c = build_circle(1.0);
  const auto cn = sample_net(*c, 0.25);
  CHECK(cn.size() >= 4);
  CHECK(density(*c, cn, 1e-3) <= 0.25 + 1e-12);

  CHECK_FALSE(sample_net(*i, 10.0).empty());

  auto fan = build_fan_space({3});
  CHECK(density(*fan, sample_net(*fan, 0.1), 0.01) <= 0.1 + 1e-9);
}

TEST_CASE("sample net reports each vertex once") {
  auto star = build_star(3, 1.0);
  const auto net = sample_net(*star, 0.5);
  int centre = 0;
  for (GraphPoint p : net) {
    auto v = vertex_of(*star, p);
    if (v && star->incident(*v).size() == 3) ++centre;
  }
  CHECK(centre == 1);
}

TEST_CASE("connected components of the interval") {
  auto i = build_interval();
  SubsetMask ends(1);
  ends.add_point(*i, {0, 0.0});
  ends.add_point(*i, {0, 1.0});
  auto comps = connected_components(*i, ends);
  REQUIRE(comps.size() == 1);
  REQUIRE(comps[0].on(0).size() == 1);
  CHECK(comps[0].on(0)[0].lo == 0.0);
  CHECK(comps[0].on(0)[0].hi == 1.0);

  SubsetMask mid(1);
  mid.add_point(*i, {0, 0.5});
  CHECK(connected_components(*i, mid).size() == 2);
  CHECK(connected_components(*i, SubsetMask::full(*i)).empty());
}

TEST_CASE("removing the centre of a 3-star leaves three branches") {
  auto star = build_star(3, 1.0);
  VertexId centre = 0;
  for (VertexId v = 0; v < star->vertex_count(); ++v) {
    if (star->incident(v).size() == 3) centre = v;
  }
  SubsetMask removed(star->edge_count());
  const EdgeId e0 = star->incident(centre).front();
  removed.add_point(*star, {e0, star->edge(e0).from == centre ? 0.0 : 1.0});
  const auto comps = connected_components(*star, removed);
  CHECK(comps.size() == 3);

  // Flood fill on a fine net, joining points closer than the spacing
  // without passing through the centre.
  const double h = 0.01;
  std::vector<GraphPoint> net;
  for (GraphPoint p : sample_net(*star, h)) {
    if (!removed.contains(*star, p)) net.push_back(p);
  }
  std::vector<int> label(net.size(), -1);
  int count = 0;
  for (std::size_t s = 0; s < net.size(); ++s) {
    if (label[s] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = count;
    while (!q.empty()) {
      const std::size_t a = q.front();
      q.pop();
      for (std::size_t b = 0; b < net.size(); ++b) {
        if (label[b] < 0 && net[a].edge == net[b].edge &&
            point_distance(*star, net[a], net[b]) < 1.5 * h) {
          label[b] = count;
          q.push(b);
        }
      }
    }
    ++count;
  }
  CHECK(count == 3);
}

TEST_CASE("masks normalise and merge") {
  SubsetMask m(1);
  m.add(0, 0.5, 0.2);
  m.add(0, 0.5, 0.7);
  m.add(0, 0.9, 1.0);
  REQUIRE(m.on(0).size() == 2);
  CHECK(m.on(0)[0] == Interval{0.2, 0.7});
  CHECK(m.interval_count() == 2);
  auto i = build_interval();
  CHECK(m.contains(*i, {0, 0.95}));
  CHECK_FALSE(m.contains(*i, {0, 0.8}));
  CHECK(mask_connected(*i, m) == false);
}

TEST_CASE("components of a difference") {
  auto i = build_interval();
  SubsetMask base = SubsetMask::full(*i);
  SubsetMask removed(1);
  removed.add(0, 0.3, 0.4);
  const auto comps = components_of_difference(*i, base, removed);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].on(0)[0] == Interval{0.0, 0.3});
  CHECK(comps[1].on(0)[0] == Interval{0.4, 1.0});
  CHECK(components_of_difference(*i, base, base).empty());
}
