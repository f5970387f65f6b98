#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cliquelab/clique.hpp"
#include "cliquelab/graph.hpp"
#include "cliquelab/moments.hpp"
#include "cliquelab/rng.hpp"

namespace cliquelab {

enum class SwapDirection { kDestroy, kCreate };

// Degree-preserving two-edge swap. The four actors fix the edge pattern:
//   destroy: removes {u,u'} and {v,v'}, adds {u,v} and {u',v'}
//            (u,u' sit inside the clique being broken)
//   create:  removes {u,v'} and {u',v},  adds {u,u'} and {v,v'}
struct SwapMove {
  SwapDirection direction = SwapDirection::kDestroy;
  std::int32_t u = 0;
  std::int32_t u_prime = 0;
  std::int32_t v = 0;
  std::int32_t v_prime = 0;
  std::array<Edge, 2> removed{};
  std::array<Edge, 2> added{};

  friend bool operator==(const SwapMove&, const SwapMove&) = default;
};

SwapMove make_destroy_move(std::int32_t u, std::int32_t u_prime, std::int32_t v,
                           std::int32_t v_prime);
SwapMove make_create_move(std::int32_t u, std::int32_t u_prime, std::int32_t v,
                          std::int32_t v_prime);

// The move undoing this one; swaps direction and the v/v' roles, and is an
// involution: inverse(inverse(m)) == m.
SwapMove inverse(const SwapMove& move);

// Applies after validating that the actors are four distinct in-range
// vertices, the removed edges exist, the added edges do not, and the edge
// arrays match the actor pattern. The result has the same degree multiset.
Graph apply_swap(const Graph& graph, const SwapMove& move);

struct DestroySearchStats {
  std::int64_t candidates_examined = 0;  // structurally valid candidates tested
  std::int64_t survival_events = 0;      // candidates that left a k-clique intact
};

// First candidate destroy swap, in deterministic order (clique edges
// ascending, then non-clique edges ascending, then the two pairings of
// {v, v'}), whose application leaves the graph k-clique-free. k is the
// certificate size. Returns nullopt when candidate_cap structurally valid
// candidates were examined without success.
std::optional<SwapMove> find_destroy_swap(const Graph& graph, const CliqueCertificate& clique,
                                          std::int64_t candidate_cap = 100000,
                                          DestroySearchStats* stats = nullptr);

// First structurally valid destroy candidate, skipping the clique-free
// verification filter.
std::optional<SwapMove> first_destroy_candidate(const Graph& graph,
                                                const CliqueCertificate& clique);

// First swap turning a k-clique-free graph into one with a k-clique: scans
// (k-1)-cliques S in lexicographic order, then vertices u adjacent to all of
// S but one vertex u', then rewiring partners v in N(u'), v' in N(u) outside
// S with {v, v'} absent. Each candidate is verified before being returned.
// Requires the input to be k-clique-free.
std::optional<SwapMove> find_create_swap(const Graph& graph, std::int32_t k);

struct ForgeCaps {
  std::int32_t sample_retries = 200;
  std::int64_t swap_candidates = 100000;
};

// Matched yes/no instance: the two graphs differ by one degree-preserving
// swap, yes_graph has exactly one k-clique and no_graph has none.
struct InstancePair {
  Graph yes_graph;
  Graph no_graph;
  std::int32_t k = 0;
  RngSeed seed;
  SwapMove swap;  // create direction, no_graph -> yes_graph
  CliqueCertificate certificate;
  std::int64_t m = 0;
  std::int32_t sample_attempts = 0;
  DestroySearchStats destroy_stats;
};

// Samples G(n, m*) at the calibrated edge count (attempt a draws from
// seed.derive(a, 0)) until the k-clique count is exactly one, then applies
// a verified destroy swap. Requires n >= k + 2 and k >= 2; throws
// std::runtime_error when a cap is exhausted.
InstancePair forge_pair(std::int32_t n, std::int32_t k, RngSeed seed,
                        const ForgeCaps& caps = {});

bool verify_pair(const InstancePair& pair);

struct PairFiles {
  std::string yes_col;
  std::string no_col;
  std::string meta_json;
};

// Deterministic renders: canonical DIMACS for both graphs plus a JSON
// sidecar with the swap, certificate, and verification summary (vertices
// 1-based to match the DIMACS files).
PairFiles render_pair_files(const InstancePair& pair);

// Writes <stem>_yes.col, <stem>_no.col, <stem>_meta.json.
void write_pair_files(const InstancePair& pair, const std::string& stem);

enum class SurvivalConditioning {
  kExactlyOne,  // resample until the k-clique count is exactly one
  kAtLeastOne,  // resample until some k-clique exists
};

struct SurvivalEstimate {
  std::int32_t n = 0;
  std::int32_t k = 0;
  std::int64_t m = 0;
  std::int32_t trials = 0;
  std::int32_t applied = 0;       // trials where a structural candidate existed
  std::int32_t survived = 0;      // applied trials still containing a k-clique
  std::int32_t no_candidate = 0;  // trials with no structural candidate
  double rate = 0;                // survived / applied; NaN when applied == 0
  moments::SurvivalProbability formula;
  SurvivalConditioning conditioning = SurvivalConditioning::kExactlyOne;
};

// Empirical survival frequency of the first structural destroy candidate,
// next to the closed-form value. Trial t, attempt a samples from
// seed.derive(t, a); throws std::runtime_error when some trial finds no
// graph matching the conditioning within sample_cap_per_trial attempts.
SurvivalEstimate estimate_survival(std::int32_t n, std::int32_t k, std::int64_t m,
                                   std::int32_t trials, RngSeed seed,
                                   SurvivalConditioning conditioning =
                                       SurvivalConditioning::kExactlyOne,
                                   std::int32_t sample_cap_per_trial = 1000,
                                   std::int32_t threads = 1);

// CSV with header n,k,m,trials,applied,survived,no_candidate,rate,formula.
std::string survival_csv(const std::vector<SurvivalEstimate>& rows);

}  // namespace cliquelab
