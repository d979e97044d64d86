#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hyperlab {

/// Undirected simple graph with bitset adjacency rows.
class BitGraph {
 public:
  explicit BitGraph(std::size_t n);

  std::size_t size() const { return n_; }
  void connect(std::size_t a, std::size_t b);
  bool adjacent(std::size_t a, std::size_t b) const {
    return (rows_[a * words_ + b / 64] >> (b % 64)) & 1u;
  }
  std::size_t degree(std::size_t v) const;
  const std::uint64_t* row(std::size_t v) const { return rows_.data() + v * words_; }
  std::size_t words() const { return words_; }

  friend bool operator==(const BitGraph& a, const BitGraph& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> rows_;
};

/// Vertices sorted by descending degree, ties broken by index.
std::vector<std::size_t> degree_order(const BitGraph& g);

/// Degeneracy order: repeatedly strip a minimum-degree vertex, then
/// reverse, so the last vertex stripped comes first.
std::vector<std::size_t> smallest_last_order(const BitGraph& g);

/// Maximal clique built greedily along degree_order.
std::vector<std::size_t> greedy_clique(const BitGraph& g);

struct CliqueResult {
  std::vector<std::size_t> members;  // ascending vertex ids
  bool optimal = false;
  std::uint64_t nodes = 0;
};

/// Branch and bound maximum clique with greedy-colouring bounds over the
/// degree order. A node_limit of 0 means no limit; when the limit is hit the
/// best clique found so far is returned with optimal = false.
CliqueResult max_clique(const BitGraph& g, std::uint64_t node_limit = 0);

}  // namespace hyperlab
