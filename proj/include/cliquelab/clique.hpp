#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cliquelab/graph.hpp"

namespace cliquelab {

struct CliqueCertificate {
  std::vector<std::int32_t> vertices;  // ascending

  friend bool operator==(const CliqueCertificate&, const CliqueCertificate&) = default;
};

struct SearchStats {
  std::uint64_t nodes_explored = 0;
  bool budget_exhausted = false;
};

// Outcome of a decision search. Three states: a certificate was found, no
// k-clique exists (no certificate, budget not exhausted), or the budget ran
// out first and the instance is unresolved.
struct SearchResult {
  std::optional<CliqueCertificate> certificate;
  SearchStats stats;

  bool indeterminate() const noexcept { return !certificate && stats.budget_exhausted; }
};

// Branch-and-bound decision search for a k-clique. Roots follow a degeneracy
// order, branching picks the pivot with the largest candidate
// neighbourhood, candidate sets are peeled to their (k - depth - 1)-core,
// and every tie breaks by ascending vertex id, so the explored tree is a
// pure function of (graph, k, budget). node_budget caps the number of
// search-tree nodes (the root counts as one).
SearchResult find_k_clique(const Graph& graph, std::int32_t k,
                           std::optional<std::uint64_t> node_budget = std::nullopt);

std::uint64_t count_k_cliques(const Graph& graph, std::int32_t k);

// Calls visit for every k-clique in ascending lexicographic order of the
// vertex tuple; stops early when visit returns false. Returns false iff the
// enumeration was stopped early.
bool enumerate_k_cliques(const Graph& graph, std::int32_t k,
                         const std::function<bool(const std::vector<std::int32_t>&)>& visit);

// True iff the certificate vertices are pairwise adjacent. Out-of-range or
// duplicated vertices raise std::invalid_argument.
bool verify_certificate(const Graph& graph, const CliqueCertificate& certificate);

// Reference oracle: tests every C(n,k) vertex subset directly, sharing no
// machinery with the search above. Refuses instances with C(n,k) > 1e8.
std::uint64_t brute_force_count(const Graph& graph, std::int32_t k);

}  // namespace cliquelab
