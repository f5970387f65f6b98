#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "cliquelab/graph.hpp"

namespace cliquelab {

// Number of m-edge graphs on n vertices, i.e. C(n(n-1)/2, m), or nullopt
// when it exceeds cap.
std::optional<std::int64_t> edge_set_count_within(std::int32_t n, std::int64_t m,
                                                  std::int64_t cap);

inline constexpr std::int64_t kExhaustiveLimit = 1'000'000;

// Visits every m-edge graph on n vertices exactly once, edge sets in
// ascending lexicographic order of their sorted pair-index tuples. Requires
// C(n(n-1)/2, m) <= kExhaustiveLimit.
void for_each_edge_set(std::int32_t n, std::int64_t m,
                       const std::function<void(const Graph&)>& visit);

// Exact distribution of the k-clique count over all m-edge graphs.
struct CliqueCountDistribution {
  std::int64_t graph_count = 0;                     // C(n(n-1)/2, m)
  std::map<std::uint64_t, std::int64_t> frequency;  // clique count -> graphs

  std::int64_t graphs_with(std::uint64_t count) const;
  std::int64_t graphs_with_at_least_one() const;
};

CliqueCountDistribution exact_clique_distribution(std::int32_t n, std::int32_t k,
                                                  std::int64_t m);

}  // namespace cliquelab
