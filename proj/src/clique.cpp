#include "cliquelab/clique.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

namespace cliquelab {

namespace {

using Words = std::vector<std::uint64_t>;

void check_k(const Graph& graph, std::int32_t k, const char* who) {
  if (k < 1 || k > graph.vertex_count()) {
    throw std::invalid_argument(std::string(who) + ": k = " + std::to_string(k) +
                                " outside [1, n = " + std::to_string(graph.vertex_count()) + "]");
  }
}

int popcount_words(const std::uint64_t* w, std::size_t words) {
  int c = 0;
  for (std::size_t i = 0; i < words; ++i) c += std::popcount(w[i]);
  return c;
}

int popcount_and(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  int c = 0;
  for (std::size_t i = 0; i < words; ++i) c += std::popcount(a[i] & b[i]);
  return c;
}

void and_into(std::uint64_t* dst, const std::uint64_t* a, const std::uint64_t* b,
              std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) dst[i] = a[i] & b[i];
}

void clear_bit(std::uint64_t* w, std::int32_t v) {
  w[static_cast<std::size_t>(v) >> 6] &= ~(std::uint64_t{1} << (v & 63));
}

// Clears every bit <= v.
void clear_through(std::uint64_t* w, std::int32_t v) {
  const std::size_t word = static_cast<std::size_t>(v) >> 6;
  for (std::size_t i = 0; i < word; ++i) w[i] = 0;
  const int r = v & 63;
  w[word] &= (r == 63) ? 0 : ~((std::uint64_t{2} << r) - 1);
}

// Smallest-last (degeneracy) order via a lazy min-heap on (degree, id).
std::vector<std::int32_t> degeneracy_order(const Graph& g) {
  const std::int32_t n = g.vertex_count();
  std::vector<std::int32_t> deg(static_cast<std::size_t>(n));
  std::vector<char> removed(static_cast<std::size_t>(n), 0);
  using Entry = std::pair<std::int32_t, std::int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::int32_t v = 0; v < n; ++v) {
    deg[static_cast<std::size_t>(v)] = g.degree(v);
    heap.emplace(deg[static_cast<std::size_t>(v)], v);
  }
  std::vector<std::int32_t> order;
  order.reserve(static_cast<std::size_t>(n));
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (removed[static_cast<std::size_t>(v)] || d != deg[static_cast<std::size_t>(v)]) continue;
    removed[static_cast<std::size_t>(v)] = 1;
    order.push_back(v);
    const auto row = g.row(v);
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::uint64_t x = row[i];
      while (x) {
        const auto u = static_cast<std::int32_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
        if (!removed[static_cast<std::size_t>(u)]) {
          heap.emplace(--deg[static_cast<std::size_t>(u)], u);
        }
      }
    }
  }
  return order;
}

struct DecisionSearch {
  const Graph& g;
  std::int32_t k;
  std::uint64_t budget;
  std::size_t words;
  SearchStats stats{};
  std::vector<std::int32_t> current;
  std::vector<Words> level;  // candidate buffer per depth
  std::optional<CliqueCertificate> found;

  enum class Status { kFound, kExhausted, kAborted };

  DecisionSearch(const Graph& graph, std::int32_t kk, std::uint64_t node_budget)
      : g(graph), k(kk), budget(node_budget), words(graph.words_per_row()) {
    level.assign(static_cast<std::size_t>(k) + 2, Words(words, 0));
  }

  // current holds depth chosen vertices; P is the candidate set adjacent to
  // all of them.
  Status expand(Words& P, std::int32_t depth) {
    if (++stats.nodes_explored > budget) {
      stats.budget_exhausted = true;
      return Status::kAborted;
    }
    if (depth == k) {
      CliqueCertificate cert{current};
      std::sort(cert.vertices.begin(), cert.vertices.end());
      found = std::move(cert);
      return Status::kFound;
    }
    const std::int32_t need = k - depth;
    int pcount = popcount_words(P.data(), words);
    if (pcount < need) return Status::kExhausted;

    // Peel candidates that cannot extend to a clique of the remaining size:
    // each must keep at least need-1 neighbours inside P. Repeats until a
    // full ascending pass removes nothing.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < words; ++i) {
        std::uint64_t x = P[i];
        while (x) {
          const auto v = static_cast<std::int32_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
          x &= x - 1;
          if (popcount_and(P.data(), g.row(v).data(), words) < need - 1) {
            clear_bit(P.data(), v);
            --pcount;
            changed = true;
          }
        }
      }
      if (pcount < need) return Status::kExhausted;
    }

    // Pivot on the candidate with the most candidate neighbours (first such
    // in ascending order). Branch on P minus the pivot's neighbourhood.
    std::int32_t pivot = -1;
    int best = -1;
    for (std::size_t i = 0; i < words; ++i) {
      std::uint64_t x = P[i];
      while (x) {
        const auto v = static_cast<std::int32_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
        const int d = popcount_and(P.data(), g.row(v).data(), words);
        if (d > best) {
          best = d;
          pivot = v;
        }
      }
    }

    std::vector<std::int32_t> branch;
    {
      const auto prow = g.row(pivot);
      for (std::size_t i = 0; i < words; ++i) {
        std::uint64_t x = P[i] & ~prow[i];
        while (x) {
          branch.push_back(static_cast<std::int32_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(x))));
          x &= x - 1;
        }
      }
    }

    Words& child = level[static_cast<std::size_t>(depth) + 1];
    for (const std::int32_t v : branch) {
      current.push_back(v);
      and_into(child.data(), P.data(), g.row(v).data(), words);
      const Status st = expand(child, depth + 1);
      current.pop_back();
      if (st != Status::kExhausted) return st;
      clear_bit(P.data(), v);  // cliques through v are fully explored
    }
    return Status::kExhausted;
  }
};

}  // namespace

SearchResult find_k_clique(const Graph& graph, std::int32_t k,
                           std::optional<std::uint64_t> node_budget) {
  check_k(graph, k, "find_k_clique");
  const std::uint64_t budget = node_budget.value_or(std::numeric_limits<std::uint64_t>::max());

  DecisionSearch search(graph, k, budget);
  SearchResult result;

  // The top level counts as one node.
  if (++search.stats.nodes_explored > budget) {
    search.stats.budget_exhausted = true;
    result.stats = search.stats;
    return result;
  }
  if (k == 1) {
    result.certificate = CliqueCertificate{{0}};
    result.stats = search.stats;
    return result;
  }

  const std::size_t words = graph.words_per_row();
  Words remaining(words, 0);
  for (std::int32_t v = 0; v < graph.vertex_count(); ++v) {
    remaining[static_cast<std::size_t>(v) >> 6] |= std::uint64_t{1} << (v & 63);
  }

  Words& root_cand = search.level[0];
  for (const std::int32_t v : degeneracy_order(graph)) {
    clear_bit(remaining.data(), v);
    if (graph.degree(v) + 1 < k) continue;
    and_into(root_cand.data(), graph.row(v).data(), remaining.data(), words);
    if (1 + popcount_words(root_cand.data(), words) < k) continue;
    search.current.assign(1, v);
    const auto st = search.expand(root_cand, 1);
    if (st != DecisionSearch::Status::kExhausted) break;
  }

  result.certificate = std::move(search.found);
  result.stats = search.stats;
  return result;
}

std::uint64_t count_k_cliques(const Graph& graph, std::int32_t k) {
  check_k(graph, k, "count_k_cliques");
  const std::int32_t n = graph.vertex_count();
  if (k == 1) return static_cast<std::uint64_t>(n);

  const std::size_t words = graph.words_per_row();
  std::vector<Words> level(static_cast<std::size_t>(k) + 1, Words(words, 0));

  // Counts cliques of size need inside candidate set P where every member
  // exceeds the vertices already fixed (enforced with clear_through), so
  // each clique is seen once, in ascending order.
  auto rec = [&](auto&& self, Words& P, std::int32_t need, std::int32_t depth) -> std::uint64_t {
    if (need == 1) return static_cast<std::uint64_t>(popcount_words(P.data(), words));
    std::uint64_t total = 0;
    int remaining = popcount_words(P.data(), words);
    Words& child = level[static_cast<std::size_t>(depth) + 1];
    for (std::size_t i = 0; i < words && remaining >= need; ++i) {
      std::uint64_t x = P[i];
      while (x && remaining >= need) {
        const auto v = static_cast<std::int32_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
        --remaining;
        and_into(child.data(), P.data(), graph.row(v).data(), words);
        clear_through(child.data(), v);
        if (popcount_words(child.data(), words) >= need - 1) {
          total += self(self, child, need - 1, depth + 1);
        }
      }
    }
    return total;
  };

  Words all(words, 0);
  for (std::int32_t v = 0; v < n; ++v) all[static_cast<std::size_t>(v) >> 6] |= std::uint64_t{1} << (v & 63);
  return rec(rec, all, k, 0);
}

bool enumerate_k_cliques(const Graph& graph, std::int32_t k,
                         const std::function<bool(const std::vector<std::int32_t>&)>& visit) {
  check_k(graph, k, "enumerate_k_cliques");
  const std::int32_t n = graph.vertex_count();
  const std::size_t words = graph.words_per_row();
  std::vector<Words> level(static_cast<std::size_t>(k) + 1, Words(words, 0));
  std::vector<std::int32_t> current;
  current.reserve(static_cast<std::size_t>(k));

  // Returns false to abort the whole enumeration.
  auto rec = [&](auto&& self, Words& P, std::int32_t need, std::int32_t depth) -> bool {
    if (need == 0) return visit(current);
    int remaining = popcount_words(P.data(), words);
    Words& child = level[static_cast<std::size_t>(depth) + 1];
    for (std::size_t i = 0; i < words && remaining >= need; ++i) {
      std::uint64_t x = P[i];
      while (x && remaining >= need) {
        const auto v = static_cast<std::int32_t>(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
        --remaining;
        current.push_back(v);
        and_into(child.data(), P.data(), graph.row(v).data(), words);
        clear_through(child.data(), v);
        const bool keep_going = self(self, child, need - 1, depth + 1);
        current.pop_back();
        if (!keep_going) return false;
      }
    }
    return true;
  };

  Words all(words, 0);
  for (std::int32_t v = 0; v < n; ++v) all[static_cast<std::size_t>(v) >> 6] |= std::uint64_t{1} << (v & 63);
  return rec(rec, all, k, 0);
}

bool verify_certificate(const Graph& graph, const CliqueCertificate& certificate) {
  const auto& vs = certificate.vertices;
  for (const std::int32_t v : vs) {
    if (v < 0 || v >= graph.vertex_count()) {
      throw std::invalid_argument("verify_certificate: vertex " + std::to_string(v) +
                                  " out of range");
    }
  }
  std::vector<std::int32_t> sorted(vs);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("verify_certificate: duplicated vertex");
  }
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (!graph.has_edge(sorted[i], sorted[j])) return false;
    }
  }
  return true;
}

std::uint64_t brute_force_count(const Graph& graph, std::int32_t k) {
  check_k(graph, k, "brute_force_count");
  const std::int32_t n = graph.vertex_count();

  // Refuse when C(n,k) exceeds 1e8; this is a reference oracle, not a solver.
  {
    unsigned __int128 c = 1;
    const std::int32_t kk = std::min(k, n - k);
    for (std::int32_t i = 1; i <= kk; ++i) {
      c = c * static_cast<unsigned __int128>(n - kk + i) / static_cast<unsigned>(i);
      if (c > 100'000'000) {
        throw std::runtime_error("brute_force_count: C(n,k) exceeds 1e8");
      }
    }
  }

  std::vector<std::int32_t> idx(static_cast<std::size_t>(k));
  for (std::int32_t i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::uint64_t total = 0;
  while (true) {
    bool clique = true;
    for (std::size_t i = 0; i < idx.size() && clique; ++i) {
      for (std::size_t j = i + 1; j < idx.size(); ++j) {
        if (!graph.has_edge(idx[i], idx[j])) {
          clique = false;
          break;
        }
      }
    }
    if (clique) ++total;

    std::int32_t pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (std::int32_t i = pos + 1; i < k; ++i) {
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return total;
}

}  // namespace cliquelab
