#include "hyperlab/clique.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace hyperlab {

BitGraph::BitGraph(std::size_t n) : n_(n), words_((n + 63) / 64), rows_(n * words_, 0) {}

void BitGraph::connect(std::size_t a, std::size_t b) {
  if (a == b) return;
  rows_[a * words_ + b / 64] |= std::uint64_t{1} << (b % 64);
  rows_[b * words_ + a / 64] |= std::uint64_t{1} << (a % 64);
}

std::size_t BitGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (std::size_t w = 0; w < words_; ++w) d += static_cast<std::size_t>(std::popcount(row(v)[w]));
  return d;
}

std::vector<std::size_t> degree_order(const BitGraph& g) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> deg(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) deg[v] = g.degree(v);
  std::stable_sort(order.begin(), order.end(),
                   [&deg](std::size_t a, std::size_t b) { return deg[a] > deg[b]; });
  return order;
}

std::vector<std::size_t> greedy_clique(const BitGraph& g) {
  std::vector<std::size_t> clique;
  for (std::size_t v : degree_order(g)) {
    if (std::all_of(clique.begin(), clique.end(), [&](std::size_t u) { return g.adjacent(u, v); })) {
      clique.push_back(v);
    }
  }
  std::sort(clique.begin(), clique.end());
  return clique;
}

std::vector<std::size_t> smallest_last_order(const BitGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> deg(n);
  for (std::size_t v = 0; v < n; ++v) deg[v] = g.degree(v);
  std::vector<char> gone(n, 0);
  std::vector<std::size_t> removed;
  removed.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!gone[v] && (pick == n || deg[v] < deg[pick])) pick = v;
    }
    gone[pick] = 1;
    removed.push_back(pick);
    for (std::size_t v = 0; v < n; ++v) {
      if (!gone[v] && g.adjacent(pick, v)) --deg[v];
    }
  }
  return {removed.rbegin(), removed.rend()};
}

namespace {

using Words = std::vector<std::uint64_t>;

bool any(const Words& s) {
  return std::any_of(s.begin(), s.end(), [](std::uint64_t w) { return w != 0; });
}

/// Branch and bound over vertices renumbered in smallest-last order, so
/// position 0 lies in the densest core; sets are bitsets over positions.
class Search {
 public:
  Search(const BitGraph& g, std::uint64_t node_limit)
      : n_(g.size()), words_((n_ + 63) / 64), order_(smallest_last_order(g)), limit_(node_limit) {
    std::vector<std::size_t> position(n_);
    for (std::size_t i = 0; i < n_; ++i) position[order_[i]] = i;
    adj_.assign(n_, Words(words_, 0));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (g.adjacent(order_[i], order_[j])) adj_[i][j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
    for (std::size_t v : greedy_clique(g)) best_.push_back(position[v]);
  }

  CliqueResult run() {
    Words all(words_, 0);
    for (std::size_t i = 0; i < n_; ++i) all[i / 64] |= std::uint64_t{1} << (i % 64);
    std::vector<std::size_t> current;
    expand(current, all);
    CliqueResult out;
    for (std::size_t p : best_) out.members.push_back(order_[p]);
    std::sort(out.members.begin(), out.members.end());
    out.optimal = !aborted_;
    out.nodes = nodes_;
    return out;
  }

 private:
  void colour(const Words& candidates, std::vector<std::size_t>& verts,
              std::vector<std::size_t>& colours) const {
    Words uncoloured = candidates;
    std::size_t k = 0;
    while (any(uncoloured)) {
      ++k;
      Words open = uncoloured;
      for (std::size_t w = 0; w < words_; ++w) {
        while (open[w] != 0) {
          const std::size_t bit = static_cast<std::size_t>(std::countr_zero(open[w]));
          const std::size_t v = w * 64 + bit;
          open[w] &= open[w] - 1;
          uncoloured[w] &= ~(std::uint64_t{1} << bit);
          for (std::size_t x = w; x < words_; ++x) open[x] &= ~adj_[v][x];
          verts.push_back(v);
          colours.push_back(k);
        }
      }
    }
  }

  void expand(std::vector<std::size_t>& current, Words candidates) {
    if (aborted_) return;
    ++nodes_;
    if (limit_ != 0 && nodes_ > limit_) {
      aborted_ = true;
      return;
    }
    std::vector<std::size_t> verts;
    std::vector<std::size_t> colours;
    colour(candidates, verts, colours);
    for (std::size_t i = verts.size(); i-- > 0;) {
      if (current.size() + colours[i] <= best_.size()) return;
      const std::size_t v = verts[i];
      current.push_back(v);
      Words next(words_);
      for (std::size_t w = 0; w < words_; ++w) next[w] = candidates[w] & adj_[v][w];
      if (!any(next)) {
        if (current.size() > best_.size()) best_ = current;
      } else {
        expand(current, std::move(next));
      }
      current.pop_back();
      if (aborted_) return;
      candidates[v / 64] &= ~(std::uint64_t{1} << (v % 64));
    }
  }

  std::size_t n_;
  std::size_t words_;
  std::vector<std::size_t> order_;
  std::vector<Words> adj_;
  std::vector<std::size_t> best_;
  std::uint64_t limit_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

CliqueResult max_clique(const BitGraph& g, std::uint64_t node_limit) {
  if (g.size() == 0) return CliqueResult{{}, true, 0};
  return Search(g, node_limit).run();
}

}  // namespace hyperlab
