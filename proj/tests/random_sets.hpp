#pragma once

#include <algorithm>
#include <random>

#include "hyperlab/hyperspace.hpp"

namespace hyperlab::testing {

/// One to three pieces on random edges, a third of them single points.
inline CompactSet random_set(const Space& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> edge(0, s.edge_count() - 1);
  SubsetMask m(s.edge_count());
  const int pieces = 1 + static_cast<int>(rng() % 3);
  for (int j = 0; j < pieces; ++j) {
    const double a = u(rng);
    if (rng() % 3 == 0) {
      m.add(edge(rng), a, a);
    } else {
      m.add(edge(rng), a, std::min(1.0, a + 0.3 * u(rng)));
    }
  }
  return CompactSet(s, m);
}

}  // namespace hyperlab::testing
