#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace cliquelab {

// Undirected edge, stored with u < v once canonicalized.
struct Edge {
  std::int32_t u = 0;
  std::int32_t v = 0;

  friend constexpr auto operator<=>(const Edge&, const Edge&) noexcept = default;
};

class Graph;
Graph build_graph(std::int32_t n, std::vector<Edge> edges);

// Vertex pairs {i, j} with i < j are numbered j*(j-1)/2 + i, so indices
// 0 .. n(n-1)/2 - 1 enumerate the possible edges of an n-vertex graph.
std::int64_t pair_count(std::int64_t n);
std::int64_t pair_to_index(std::int32_t u, std::int32_t v);
Edge index_to_pair(std::int64_t index);

// Immutable simple graph with bitset adjacency rows.
class Graph {
 public:
  static constexpr std::int32_t kMaxVertices = 20000;

  std::int32_t vertex_count() const noexcept { return n_; }
  std::int64_t edge_count() const noexcept { return static_cast<std::int64_t>(edges_.size()); }

  // Sorted ascending, each edge with u < v.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_edge(std::int32_t u, std::int32_t v) const noexcept {
    if (u == v) return false;
    return (row(u)[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1u;
  }

  std::int32_t degree(std::int32_t v) const noexcept { return degrees_[static_cast<std::size_t>(v)]; }

  // Adjacency bitset of v, words_per_row() 64-bit words, bit i = edge {v, i}.
  std::span<const std::uint64_t> row(std::int32_t v) const noexcept {
    return {bits_.data() + static_cast<std::size_t>(v) * words_, words_};
  }

  std::size_t words_per_row() const noexcept { return words_; }

  friend bool operator==(const Graph& a, const Graph& b) noexcept {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  friend Graph build_graph(std::int32_t n, std::vector<Edge> edges);
  Graph() = default;

  std::int32_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<Edge> edges_;
  std::vector<std::int32_t> degrees_;
};

// Validates and canonicalizes the edge list: endpoints in [0, n), no self
// loops, no duplicates (in either orientation). Throws std::invalid_argument.
Graph build_graph(std::int32_t n, std::vector<Edge> edges);

struct DegreeSequence {
  std::vector<std::int32_t> degrees;  // non-increasing
};

DegreeSequence degree_sequence(const Graph& graph);

// 2m / (n(n-1)); requires n >= 2.
double edge_density(const Graph& graph);

}  // namespace cliquelab
