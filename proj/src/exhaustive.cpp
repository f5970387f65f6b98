#include "cliquelab/exhaustive.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "cliquelab/clique.hpp"

namespace cliquelab {

std::optional<std::int64_t> edge_set_count_within(std::int32_t n, std::int64_t m,
                                                  std::int64_t cap) {
  if (n <= 0) throw std::invalid_argument("edge_set_count_within: n must be positive");
  const std::int64_t g = pair_count(n);
  if (m < 0 || m > g) {
    throw std::invalid_argument("edge_set_count_within: m outside [0, " + std::to_string(g) + "]");
  }
  const std::int64_t b = std::min(m, g - m);
  unsigned __int128 c = 1;
  for (std::int64_t i = 1; i <= b; ++i) {
    c = c * static_cast<unsigned __int128>(g - b + i) / static_cast<unsigned __int128>(i);
    if (c > static_cast<unsigned __int128>(cap)) return std::nullopt;
  }
  return static_cast<std::int64_t>(c);
}

void for_each_edge_set(std::int32_t n, std::int64_t m,
                       const std::function<void(const Graph&)>& visit) {
  if (!edge_set_count_within(n, m, kExhaustiveLimit)) {
    throw std::invalid_argument("for_each_edge_set: C(g,m) exceeds " +
                                std::to_string(kExhaustiveLimit));
  }
  const std::int64_t g = pair_count(n);

  std::vector<std::int64_t> idx(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;

  std::vector<Edge> edges(static_cast<std::size_t>(m));
  while (true) {
    for (std::size_t i = 0; i < idx.size(); ++i) edges[i] = index_to_pair(idx[i]);
    visit(build_graph(n, edges));

    std::int64_t pos = m - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == g - m + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (std::int64_t i = pos + 1; i < m; ++i) {
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
}

std::int64_t CliqueCountDistribution::graphs_with(std::uint64_t count) const {
  const auto it = frequency.find(count);
  return it == frequency.end() ? 0 : it->second;
}

std::int64_t CliqueCountDistribution::graphs_with_at_least_one() const {
  return graph_count - graphs_with(0);
}

CliqueCountDistribution exact_clique_distribution(std::int32_t n, std::int32_t k,
                                                  std::int64_t m) {
  CliqueCountDistribution dist;
  for_each_edge_set(n, m, [&](const Graph& g) {
    ++dist.graph_count;
    ++dist.frequency[count_k_cliques(g, k)];
  });
  return dist;
}

}  // namespace cliquelab
