#include "cliquelab/forge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cliquelab/dimacs.hpp"
#include "cliquelab/gnm.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace cliquelab {

namespace {

Edge canon(std::int32_t a, std::int32_t b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

std::array<Edge, 2> ordered_pair(Edge a, Edge b) {
  return a < b ? std::array<Edge, 2>{a, b} : std::array<Edge, 2>{b, a};
}

void check_actors(const SwapMove& m, std::int32_t n) {
  const std::int32_t ids[4] = {m.u, m.u_prime, m.v, m.v_prime};
  for (const std::int32_t id : ids) {
    if (id < 0 || id >= n) {
      throw std::invalid_argument("apply_swap: vertex " + std::to_string(id) + " out of range");
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (ids[i] == ids[j]) {
        throw std::invalid_argument("apply_swap: actors must be four distinct vertices");
      }
    }
  }
}

std::array<Edge, 2> pattern_removed(const SwapMove& m) {
  return m.direction == SwapDirection::kDestroy
             ? ordered_pair(canon(m.u, m.u_prime), canon(m.v, m.v_prime))
             : ordered_pair(canon(m.u, m.v_prime), canon(m.u_prime, m.v));
}

std::array<Edge, 2> pattern_added(const SwapMove& m) {
  return m.direction == SwapDirection::kDestroy
             ? ordered_pair(canon(m.u, m.v), canon(m.u_prime, m.v_prime))
             : ordered_pair(canon(m.u, m.u_prime), canon(m.v, m.v_prime));
}

// Structural destroy candidates for a given clique, in deterministic order:
// clique edges {u,u'} ascending, non-clique edges {a,b} ascending, then the
// pairing (v,v') = (a,b) before (b,a). A candidate is structurally valid
// when the four actors are distinct and both replacement edges are absent.
// visit returning true stops the scan.
void scan_destroy_candidates(const Graph& g, const CliqueCertificate& clique,
                             const std::function<bool(const SwapMove&)>& visit) {
  const auto& cert = clique.vertices;
  std::vector<char> in_clique(static_cast<std::size_t>(g.vertex_count()), 0);
  for (const std::int32_t v : cert) in_clique[static_cast<std::size_t>(v)] = 1;

  for (std::size_t i = 0; i < cert.size(); ++i) {
    for (std::size_t j = i + 1; j < cert.size(); ++j) {
      const std::int32_t u = cert[i];
      const std::int32_t up = cert[j];
      for (const Edge& e : g.edges()) {
        if (in_clique[static_cast<std::size_t>(e.u)] &&
            in_clique[static_cast<std::size_t>(e.v)]) {
          continue;  // clique-internal edge, not a rewiring partner
        }
        if (e.u == u || e.u == up || e.v == u || e.v == up) continue;
        if (!g.has_edge(u, e.u) && !g.has_edge(up, e.v)) {
          if (visit(make_destroy_move(u, up, e.u, e.v))) return;
        }
        if (!g.has_edge(u, e.v) && !g.has_edge(up, e.u)) {
          if (visit(make_destroy_move(u, up, e.v, e.u))) return;
        }
      }
    }
  }
}

void require_clique(const Graph& g, const CliqueCertificate& clique, const char* who) {
  if (clique.vertices.size() < 2) {
    throw std::invalid_argument(std::string(who) + ": certificate needs at least two vertices");
  }
  if (!verify_certificate(g, clique)) {
    throw std::invalid_argument(std::string(who) + ": certificate does not induce a clique");
  }
}

}  // namespace

SwapMove make_destroy_move(std::int32_t u, std::int32_t u_prime, std::int32_t v,
                           std::int32_t v_prime) {
  SwapMove m;
  m.direction = SwapDirection::kDestroy;
  m.u = u;
  m.u_prime = u_prime;
  m.v = v;
  m.v_prime = v_prime;
  m.removed = pattern_removed(m);
  m.added = pattern_added(m);
  return m;
}

SwapMove make_create_move(std::int32_t u, std::int32_t u_prime, std::int32_t v,
                          std::int32_t v_prime) {
  SwapMove m;
  m.direction = SwapDirection::kCreate;
  m.u = u;
  m.u_prime = u_prime;
  m.v = v;
  m.v_prime = v_prime;
  m.removed = pattern_removed(m);
  m.added = pattern_added(m);
  return m;
}

SwapMove inverse(const SwapMove& move) {
  // Swapping the v/v' roles makes the old added edges the new removed ones
  // and vice versa, in both directions.
  return move.direction == SwapDirection::kDestroy
             ? make_create_move(move.u, move.u_prime, move.v_prime, move.v)
             : make_destroy_move(move.u, move.u_prime, move.v_prime, move.v);
}

Graph apply_swap(const Graph& graph, const SwapMove& move) {
  check_actors(move, graph.vertex_count());
  if (move.removed != pattern_removed(move) || move.added != pattern_added(move)) {
    throw std::invalid_argument("apply_swap: edge arrays disagree with the actor pattern");
  }
  for (const Edge& e : move.removed) {
    if (!graph.has_edge(e.u, e.v)) {
      throw std::invalid_argument("apply_swap: edge to remove (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ") is absent");
    }
  }
  for (const Edge& e : move.added) {
    if (graph.has_edge(e.u, e.v)) {
      throw std::invalid_argument("apply_swap: edge to add (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ") already present");
    }
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(graph.edge_count()));
  for (const Edge& e : graph.edges()) {
    if (e == move.removed[0] || e == move.removed[1]) continue;
    edges.push_back(e);
  }
  edges.push_back(move.added[0]);
  edges.push_back(move.added[1]);
  return build_graph(graph.vertex_count(), std::move(edges));
}

std::optional<SwapMove> find_destroy_swap(const Graph& graph, const CliqueCertificate& clique,
                                          std::int64_t candidate_cap,
                                          DestroySearchStats* stats) {
  require_clique(graph, clique, "find_destroy_swap");
  if (candidate_cap < 1) {
    throw std::invalid_argument("find_destroy_swap: candidate_cap must be positive");
  }
  const auto k = static_cast<std::int32_t>(clique.vertices.size());

  DestroySearchStats local{};
  std::optional<SwapMove> result;
  scan_destroy_candidates(graph, clique, [&](const SwapMove& mv) {
    if (local.candidates_examined >= candidate_cap) return true;  // cap reached, give up
    ++local.candidates_examined;
    const Graph h = apply_swap(graph, mv);
    if (find_k_clique(h, k).certificate) {
      ++local.survival_events;
      return false;
    }
    result = mv;
    return true;
  });
  if (stats) *stats = local;
  return result;
}

std::optional<SwapMove> first_destroy_candidate(const Graph& graph,
                                                const CliqueCertificate& clique) {
  require_clique(graph, clique, "first_destroy_candidate");
  std::optional<SwapMove> result;
  scan_destroy_candidates(graph, clique, [&](const SwapMove& mv) {
    result = mv;
    return true;
  });
  return result;
}

std::optional<SwapMove> find_create_swap(const Graph& graph, std::int32_t k) {
  if (k < 2 || k > graph.vertex_count()) {
    throw std::invalid_argument("find_create_swap: require 2 <= k <= n");
  }
  if (find_k_clique(graph, k).certificate) {
    throw std::invalid_argument("find_create_swap: graph already contains a k-clique");
  }

  const std::int32_t n = graph.vertex_count();
  std::optional<SwapMove> result;
  std::vector<char> in_s(static_cast<std::size_t>(n), 0);

  enumerate_k_cliques(graph, k - 1, [&](const std::vector<std::int32_t>& s) {
    for (const std::int32_t x : s) in_s[static_cast<std::size_t>(x)] = 1;

    for (std::int32_t u = 0; u < n && !result; ++u) {
      if (in_s[static_cast<std::size_t>(u)]) continue;
      // u must see all of S except exactly one vertex u'.
      std::int32_t up = -1;
      int missing = 0;
      for (const std::int32_t x : s) {
        if (!graph.has_edge(u, x)) {
          ++missing;
          up = x;
          if (missing > 1) break;
        }
      }
      if (missing != 1) continue;

      // Rewiring partners keep the degree sequence: v loses its edge to u',
      // v' loses its edge to u, and the pair {v, v'} gains an edge.
      for (std::int32_t v = 0; v < n && !result; ++v) {
        if (v == u || in_s[static_cast<std::size_t>(v)] || !graph.has_edge(up, v)) continue;
        for (std::int32_t vp = 0; vp < n; ++vp) {
          if (vp == u || vp == v || in_s[static_cast<std::size_t>(vp)]) continue;
          if (!graph.has_edge(u, vp) || graph.has_edge(v, vp)) continue;
          const SwapMove mv = make_create_move(u, up, v, vp);
          const Graph h = apply_swap(graph, mv);
          if (find_k_clique(h, k).certificate) {
            result = mv;
            break;
          }
        }
      }
    }

    for (const std::int32_t x : s) in_s[static_cast<std::size_t>(x)] = 0;
    return !result;  // keep enumerating until a verified move appears
  });
  return result;
}

InstancePair forge_pair(std::int32_t n, std::int32_t k, RngSeed seed, const ForgeCaps& caps) {
  if (k < 2) throw std::invalid_argument("forge_pair: require k >= 2");
  if (n < k + 2) {
    throw std::invalid_argument("forge_pair: require n >= k + 2 so rewiring partners exist");
  }
  if (caps.sample_retries < 1 || caps.swap_candidates < 1) {
    throw std::invalid_argument("forge_pair: caps must be positive");
  }

  const auto cal = moments::calibrate_m(n, k, 0.5);
  const std::int64_t m = cal.m_star;

  std::optional<Graph> yes;
  std::int32_t attempts = 0;
  for (std::int32_t a = 0; a < caps.sample_retries; ++a) {
    Graph g = sample_gnm(n, m, seed.derive(static_cast<std::uint64_t>(a), 0));
    ++attempts;
    if (count_k_cliques(g, k) == 1) {
      yes = std::move(g);
      break;
    }
  }
  if (!yes) {
    throw std::runtime_error("forge_pair: no graph with a unique " + std::to_string(k) +
                             "-clique in " + std::to_string(caps.sample_retries) +
                             " samples at m = " + std::to_string(m));
  }

  const auto cert = find_k_clique(*yes, k).certificate;
  DestroySearchStats stats{};
  const auto destroy = find_destroy_swap(*yes, *cert, caps.swap_candidates, &stats);
  if (!destroy) {
    throw std::runtime_error("forge_pair: no verified destroy swap within " +
                             std::to_string(caps.swap_candidates) + " candidates");
  }

  InstancePair pair{*yes,          apply_swap(*yes, *destroy), k, seed, inverse(*destroy),
                    *cert,         m,
                    attempts,      stats};
  if (!verify_pair(pair)) {
    throw std::logic_error("forge_pair: assembled pair failed verification");
  }
  return pair;
}

bool verify_pair(const InstancePair& pair) {
  try {
    if (pair.k < 2) return false;
    if (pair.yes_graph.vertex_count() != pair.no_graph.vertex_count()) return false;
    if (static_cast<std::int32_t>(pair.certificate.vertices.size()) != pair.k) return false;
    if (!verify_certificate(pair.yes_graph, pair.certificate)) return false;
    if (count_k_cliques(pair.yes_graph, pair.k) != 1) return false;
    if (find_k_clique(pair.no_graph, pair.k).certificate) return false;
    if (pair.swap.direction != SwapDirection::kCreate) return false;
    if (!(apply_swap(pair.no_graph, pair.swap) == pair.yes_graph)) return false;
    const auto dy = degree_sequence(pair.yes_graph);
    const auto dn = degree_sequence(pair.no_graph);
    return dy.degrees == dn.degrees;
  } catch (const std::exception&) {
    return false;
  }
}

namespace {

nlohmann::ordered_json edge_json(const Edge& e) {
  return nlohmann::ordered_json::array({e.u + 1, e.v + 1});
}

}  // namespace

PairFiles render_pair_files(const InstancePair& pair) {
  PairFiles files;
  files.yes_col = emit_dimacs(pair.yes_graph);
  files.no_col = emit_dimacs(pair.no_graph);

  nlohmann::ordered_json j;
  j["n"] = pair.yes_graph.vertex_count();
  j["k"] = pair.k;
  j["m"] = pair.m;
  j["seed"] = pair.seed.value;
  nlohmann::ordered_json swap;
  swap["direction"] = "create";
  swap["u"] = pair.swap.u + 1;
  swap["u_prime"] = pair.swap.u_prime + 1;
  swap["v"] = pair.swap.v + 1;
  swap["v_prime"] = pair.swap.v_prime + 1;
  swap["removed"] = nlohmann::ordered_json::array(
      {edge_json(pair.swap.removed[0]), edge_json(pair.swap.removed[1])});
  swap["added"] = nlohmann::ordered_json::array(
      {edge_json(pair.swap.added[0]), edge_json(pair.swap.added[1])});
  j["swap"] = std::move(swap);
  nlohmann::ordered_json cert = nlohmann::ordered_json::array();
  for (const std::int32_t v : pair.certificate.vertices) cert.push_back(v + 1);
  j["certificate"] = std::move(cert);
  j["sample_attempts"] = pair.sample_attempts;
  j["swap_candidates_examined"] = pair.destroy_stats.candidates_examined;
  j["survival_events"] = pair.destroy_stats.survival_events;
  nlohmann::ordered_json ver;
  ver["yes_has_unique_clique"] = count_k_cliques(pair.yes_graph, pair.k) == 1;
  ver["no_is_clique_free"] = !find_k_clique(pair.no_graph, pair.k).certificate.has_value();
  ver["swap_restores_yes"] = apply_swap(pair.no_graph, pair.swap) == pair.yes_graph;
  j["verification"] = std::move(ver);
  files.meta_json = j.dump() + "\n";
  return files;
}

void write_pair_files(const InstancePair& pair, const std::string& stem) {
  const PairFiles files = render_pair_files(pair);
  const auto write = [](const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pair_files: cannot open " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write_pair_files: short write to " + path);
  };
  write(stem + "_yes.col", files.yes_col);
  write(stem + "_no.col", files.no_col);
  write(stem + "_meta.json", files.meta_json);
}

SurvivalEstimate estimate_survival(std::int32_t n, std::int32_t k, std::int64_t m,
                                   std::int32_t trials, RngSeed seed,
                                   SurvivalConditioning conditioning,
                                   std::int32_t sample_cap_per_trial, std::int32_t threads) {
  if (trials < 1) throw std::invalid_argument("estimate_survival: trials must be positive");
  if (sample_cap_per_trial < 1) {
    throw std::invalid_argument("estimate_survival: sample cap must be positive");
  }
  if (n > Graph::kMaxVertices) {
    throw std::invalid_argument("estimate_survival: n exceeds " +
                                std::to_string(Graph::kMaxVertices));
  }

  SurvivalEstimate est;
  est.n = n;
  est.k = k;
  est.m = m;
  est.trials = trials;
  est.conditioning = conditioning;
  est.formula = moments::survival_probability(n, k, m);  // validates n, k, m

  enum class Outcome : char { kSurvived, kDestroyed, kNoCandidate, kExhaustedSamples };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(trials), Outcome::kExhaustedSamples);

  detail::parallel_for(trials, threads, [&](std::int64_t t) {
    std::optional<Graph> picked;
    for (std::int32_t a = 0; a < sample_cap_per_trial; ++a) {
      Graph g = sample_gnm(n, m, seed.derive(static_cast<std::uint64_t>(t),
                                             static_cast<std::uint64_t>(a)));
      const std::uint64_t x = count_k_cliques(g, k);
      const bool accept = conditioning == SurvivalConditioning::kExactlyOne ? x == 1 : x >= 1;
      if (accept) {
        picked = std::move(g);
        break;
      }
    }
    if (!picked) return;  // leaves kExhaustedSamples

    const auto cert = find_k_clique(*picked, k).certificate;
    const auto cand = first_destroy_candidate(*picked, *cert);
    if (!cand) {
      outcomes[static_cast<std::size_t>(t)] = Outcome::kNoCandidate;
      return;
    }
    const Graph h = apply_swap(*picked, *cand);
    outcomes[static_cast<std::size_t>(t)] = find_k_clique(h, k).certificate
                                                ? Outcome::kSurvived
                                                : Outcome::kDestroyed;
  });

  for (std::int64_t t = 0; t < trials; ++t) {
    switch (outcomes[static_cast<std::size_t>(t)]) {
      case Outcome::kSurvived:
        ++est.applied;
        ++est.survived;
        break;
      case Outcome::kDestroyed:
        ++est.applied;
        break;
      case Outcome::kNoCandidate:
        ++est.no_candidate;
        break;
      case Outcome::kExhaustedSamples:
        throw std::runtime_error("estimate_survival: trial " + std::to_string(t) +
                                 " found no graph matching the conditioning in " +
                                 std::to_string(sample_cap_per_trial) + " samples");
    }
  }

  est.rate = est.applied > 0 ? static_cast<double>(est.survived) / est.applied
                             : std::numeric_limits<double>::quiet_NaN();
  return est;
}

std::string survival_csv(const std::vector<SurvivalEstimate>& rows) {
  std::string out = "n,k,m,trials,applied,survived,no_candidate,rate,formula\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + std::to_string(r.k) + ',' + std::to_string(r.m) + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.applied) + ',' +
           std::to_string(r.survived) + ',' + std::to_string(r.no_candidate) + ',' +
           detail::format_double(r.rate) + ',' + detail::format_double(r.formula.value) + '\n';
  }
  return out;
}

}  // namespace cliquelab
