#include "cliquelab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cliquelab {

namespace {

std::string edge_text(const Edge& e) {
  return "(" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")";
}

}  // namespace

std::int64_t pair_count(std::int64_t n) { return n * (n - 1) / 2; }

std::int64_t pair_to_index(std::int32_t u, std::int32_t v) {
  if (u > v) std::swap(u, v);
  return static_cast<std::int64_t>(v) * (v - 1) / 2 + u;
}

Edge index_to_pair(std::int64_t index) {
  // Integer triangular root, with a fixup loop since sqrt rounds.
  auto v = static_cast<std::int64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(index))) / 2.0);
  while (v > 1 && v * (v - 1) / 2 > index) --v;
  while ((v + 1) * v / 2 <= index) ++v;
  const std::int64_t u = index - v * (v - 1) / 2;
  return Edge{static_cast<std::int32_t>(u), static_cast<std::int32_t>(v)};
}

Graph build_graph(std::int32_t n, std::vector<Edge> edges) {
  if (n <= 0) throw std::invalid_argument("graph: vertex count must be positive");
  if (n > Graph::kMaxVertices) {
    throw std::invalid_argument("graph: vertex count " + std::to_string(n) +
                                " exceeds the limit of " + std::to_string(Graph::kMaxVertices));
  }
  for (auto& e : edges) {
    if (e.u == e.v) {
      throw std::invalid_argument("graph: self loop at vertex " + std::to_string(e.u));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n) {
      throw std::invalid_argument("graph: edge " + edge_text(e) + " out of range for n = " +
                                  std::to_string(n));
    }
  }
  std::sort(edges.begin(), edges.end());
  if (auto it = std::adjacent_find(edges.begin(), edges.end()); it != edges.end()) {
    throw std::invalid_argument("graph: duplicate edge " + edge_text(*it));
  }

  Graph g;
  g.n_ = n;
  g.words_ = static_cast<std::size_t>((n + 63) / 64);
  g.bits_.assign(g.words_ * static_cast<std::size_t>(n), 0);
  g.degrees_.assign(static_cast<std::size_t>(n), 0);
  for (const auto& e : edges) {
    const auto u = static_cast<std::size_t>(e.u);
    const auto v = static_cast<std::size_t>(e.v);
    g.bits_[u * g.words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
    g.bits_[v * g.words_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
    ++g.degrees_[u];
    ++g.degrees_[v];
  }
  g.edges_ = std::move(edges);
  return g;
}

DegreeSequence degree_sequence(const Graph& graph) {
  DegreeSequence seq;
  seq.degrees.reserve(static_cast<std::size_t>(graph.vertex_count()));
  for (std::int32_t v = 0; v < graph.vertex_count(); ++v) seq.degrees.push_back(graph.degree(v));
  std::sort(seq.degrees.begin(), seq.degrees.end(), std::greater<>());
  return seq;
}

double edge_density(const Graph& graph) {
  const std::int64_t n = graph.vertex_count();
  if (n < 2) throw std::invalid_argument("edge_density: need at least two vertices");
  return static_cast<double>(2 * graph.edge_count()) / (static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace cliquelab
