#include "cliquelab/gnm.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cliquelab {

Graph sample_gnm(std::int32_t n, std::int64_t m, RngSeed seed) {
  if (n <= 0 || n > Graph::kMaxVertices) {
    throw std::invalid_argument("sample_gnm: n must be in [1, " +
                                std::to_string(Graph::kMaxVertices) + "]");
  }
  const std::int64_t g = pair_count(n);
  if (m < 0 || m > g) {
    throw std::invalid_argument("sample_gnm: m = " + std::to_string(m) +
                                " outside [0, " + std::to_string(g) + "]");
  }

  // Floyd: for j = g-m .. g-1 draw t uniform on [0, j]; take t unless it was
  // already taken, in which case take j. Yields each m-subset of the pair
  // indices with equal probability, using exactly m accepted draws.
  Xoshiro256 rng(seed);
  std::vector<std::uint64_t> taken(static_cast<std::size_t>((g + 63) / 64), 0);
  auto test = [&taken](std::int64_t i) {
    return (taken[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u;
  };
  auto set = [&taken](std::int64_t i) {
    taken[static_cast<std::size_t>(i >> 6)] |= std::uint64_t{1} << (i & 63);
  };

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::int64_t j = g - m; j < g; ++j) {
    const auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
    const std::int64_t pick = test(t) ? j : t;
    set(pick);
    edges.push_back(index_to_pair(pick));
  }
  return build_graph(n, std::move(edges));
}

}  // namespace cliquelab
