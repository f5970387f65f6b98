#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "cliquelab/dimacs.hpp"
#include "cliquelab/forge.hpp"

using namespace cliquelab;

namespace {

// K4 on {0,1,2,3} plus the disjoint edge {4,5}.
Graph quad_plus_edge() {
  return build_graph(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {4, 5}});
}

// The same graph after trading {0,1},{4,5} for {0,4},{1,5}; 4-clique-free.
Graph quad_broken() {
  return build_graph(6, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 4}, {1, 5}});
}

}  // namespace

TEST_CASE("swap construction and inversion") {
  const SwapMove d = make_destroy_move(0, 1, 4, 5);
  CHECK(d.direction == SwapDirection::kDestroy);
  CHECK(d.removed == std::array<Edge, 2>{Edge{0, 1}, Edge{4, 5}});
  CHECK(d.added == std::array<Edge, 2>{Edge{0, 4}, Edge{1, 5}});

  const SwapMove c = inverse(d);
  CHECK(c.direction == SwapDirection::kCreate);
  CHECK(c == make_create_move(0, 1, 5, 4));
  CHECK(c.removed == d.added);
  CHECK(c.added == d.removed);
  CHECK(inverse(c) == d);
  CHECK(inverse(inverse(c)) == c);

  // Edge arrays come out canonical whatever the actor order.
  const SwapMove flipped = make_destroy_move(1, 0, 5, 4);
  CHECK(flipped.removed == d.removed);
  CHECK(flipped.added == d.added);
}

TEST_CASE("apply_swap") {
  const Graph g0 = quad_plus_edge();
  const SwapMove d = make_destroy_move(0, 1, 4, 5);
  const Graph g1 = apply_swap(g0, d);
  CHECK(g1 == quad_broken());
  CHECK(g1.edge_count() == g0.edge_count());
  CHECK(degree_sequence(g1).degrees == degree_sequence(g0).degrees);
  CHECK(apply_swap(g1, inverse(d)) == g0);

  // Removed edges must exist.
  CHECK_THROWS_AS(apply_swap(g1, d), std::invalid_argument);
  // Added edges must be absent.
  CHECK_THROWS_AS(apply_swap(g0, make_destroy_move(0, 2, 1, 3)), std::invalid_argument);
  // Four distinct in-range actors.
  CHECK_THROWS_AS(apply_swap(g0, make_destroy_move(0, 1, 4, 4)), std::invalid_argument);
  CHECK_THROWS_AS(apply_swap(g0, make_destroy_move(0, 1, 4, 6)), std::invalid_argument);
  CHECK_THROWS_AS(apply_swap(g0, make_destroy_move(0, 1, 4, -1)), std::invalid_argument);
  // Edge arrays must match the actor pattern.
  SwapMove tampered = d;
  tampered.added = {Edge{0, 5}, Edge{1, 4}};
  CHECK_THROWS_AS(apply_swap(g0, tampered), std::invalid_argument);
}

TEST_CASE("destroy swap search") {
  const Graph g0 = quad_plus_edge();
  const CliqueCertificate cert{{0, 1, 2, 3}};

  DestroySearchStats stats;
  const auto mv = find_destroy_swap(g0, cert, 100000, &stats);
  REQUIRE(mv.has_value());
  CHECK(*mv == make_destroy_move(0, 1, 4, 5));
  CHECK(stats.candidates_examined == 1);
  CHECK(stats.survival_events == 0);
  CHECK_FALSE(find_k_clique(apply_swap(g0, *mv), 4).certificate.has_value());

  const auto first = first_destroy_candidate(g0, cert);
  REQUIRE(first.has_value());
  CHECK(*first == *mv);

  CHECK_THROWS_AS(find_destroy_swap(g0, CliqueCertificate{{0, 1, 4}}, 100000, nullptr),
                  std::invalid_argument);
  CHECK_THROWS_AS(find_destroy_swap(g0, CliqueCertificate{{0}}, 100000, nullptr),
                  std::invalid_argument);
  CHECK_THROWS_AS(find_destroy_swap(g0, cert, 0, nullptr), std::invalid_argument);

  // No rewiring partner exists when every edge meets the clique.
  const Graph tight = build_graph(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  DestroySearchStats none;
  CHECK_FALSE(find_destroy_swap(tight, CliqueCertificate{{0, 1, 2}}, 100000, &none).has_value());
  CHECK(none.candidates_examined == 0);
}

TEST_CASE("create swap search") {
  const Graph g1 = quad_broken();
  const auto mv = find_create_swap(g1, 4);
  REQUIRE(mv.has_value());
  CHECK(*mv == make_create_move(1, 0, 4, 5));
  CHECK(apply_swap(g1, *mv) == quad_plus_edge());

  CHECK_THROWS_AS(find_create_swap(quad_plus_edge(), 4), std::invalid_argument);
  CHECK_THROWS_AS(find_create_swap(g1, 1), std::invalid_argument);

  const Graph empty5 = build_graph(5, {});
  CHECK_FALSE(find_create_swap(empty5, 3).has_value());
}

TEST_CASE("forged pairs verify") {
  CHECK_THROWS_AS(forge_pair(4, 4, RngSeed{1}), std::invalid_argument);
  CHECK_THROWS_AS(forge_pair(6, 1, RngSeed{1}), std::invalid_argument);

  const auto small = forge_pair(12, 3, RngSeed{7});
  CHECK(verify_pair(small));
  CHECK(small.k == 3);
  CHECK(small.m == moments::calibrate_m(12, 3, 0.5).m_star);
  CHECK(small.sample_attempts >= 1);
  CHECK(count_k_cliques(small.yes_graph, 3) == 1);
  CHECK_FALSE(find_k_clique(small.no_graph, 3).certificate.has_value());
  CHECK(apply_swap(small.no_graph, small.swap) == small.yes_graph);

  const auto big = forge_pair(50, 4, RngSeed{1});
  CHECK(verify_pair(big));
  CHECK(big.m == moments::calibrate_m(50, 4, 0.5).m_star);
  CHECK(degree_sequence(big.yes_graph).degrees == degree_sequence(big.no_graph).degrees);

  // A forged no-instance is one verified create swap away from solvable.
  const auto back = find_create_swap(small.no_graph, 3);
  REQUIRE(back.has_value());
  CHECK(find_k_clique(apply_swap(small.no_graph, *back), 3).certificate.has_value());
}

TEST_CASE("pair rendering") {
  const auto pair = forge_pair(12, 3, RngSeed{7});
  const auto files = render_pair_files(pair);
  const auto again = render_pair_files(forge_pair(12, 3, RngSeed{7}));
  CHECK(files.yes_col == again.yes_col);
  CHECK(files.no_col == again.no_col);
  CHECK(files.meta_json == again.meta_json);

  CHECK(parse_dimacs(files.yes_col) == pair.yes_graph);
  CHECK(parse_dimacs(files.no_col) == pair.no_graph);

  CHECK(files.meta_json.find("\"n\":12") != std::string::npos);
  CHECK(files.meta_json.find("\"k\":3") != std::string::npos);
  CHECK(files.meta_json.find("\"direction\":\"create\"") != std::string::npos);
  CHECK(files.meta_json.find("\"yes_has_unique_clique\":true") != std::string::npos);
  CHECK(files.meta_json.find("\"no_is_clique_free\":true") != std::string::npos);
  CHECK(files.meta_json.find("\"swap_restores_yes\":true") != std::string::npos);
  CHECK(files.meta_json.back() == '\n');

  // Vertices in the sidecar are 1-based like the DIMACS files.
  for (const std::int32_t v : pair.certificate.vertices) {
    CHECK(v + 1 >= 1);
    CHECK(v + 1 <= 12);
  }
}

TEST_CASE("survival estimation") {
  // k = 2: the swap's added edges are themselves 2-cliques, survival is
  // certain, and the closed form agrees.
  const auto pairs2 = estimate_survival(8, 2, 6, 120, RngSeed{2},
                                        SurvivalConditioning::kAtLeastOne);
  CHECK(pairs2.formula.value == 1.0);
  CHECK(pairs2.applied + pairs2.no_candidate == 120);
  CHECK(pairs2.survived == pairs2.applied);
  CHECK(pairs2.applied > 0);
  CHECK(pairs2.rate == 1.0);

  // A single-edge graph leaves nothing to rewire with.
  const auto lonely = estimate_survival(5, 2, 1, 30, RngSeed{3});
  CHECK(lonely.no_candidate == 30);
  CHECK(lonely.applied == 0);
  CHECK(std::isnan(lonely.rate));

  // The complete graph never has exactly one triangle, so conditioning on a
  // unique clique exhausts the sample cap.
  CHECK_THROWS_AS(estimate_survival(12, 3, 66, 4, RngSeed{1},
                                    SurvivalConditioning::kExactlyOne, 5),
                  std::runtime_error);

  CHECK_THROWS_AS(estimate_survival(6, 3, 8, 0, RngSeed{1}), std::invalid_argument);
  CHECK_THROWS_AS(
      estimate_survival(6, 3, 8, 10, RngSeed{1}, SurvivalConditioning::kExactlyOne, 0),
      std::invalid_argument);
  CHECK_THROWS_AS(estimate_survival(6, 3, 2, 10, RngSeed{1}), std::invalid_argument);

  // Thread count changes nothing.
  const auto serial = estimate_survival(10, 3, 10, 60, RngSeed{11},
                                        SurvivalConditioning::kExactlyOne, 1000, 1);
  const auto threaded = estimate_survival(10, 3, 10, 60, RngSeed{11},
                                          SurvivalConditioning::kExactlyOne, 1000, 3);
  CHECK(serial.applied == threaded.applied);
  CHECK(serial.survived == threaded.survived);
  CHECK(serial.no_candidate == threaded.no_candidate);
  CHECK(survival_csv({serial}) == survival_csv({threaded}));
}

TEST_CASE("survival CSV") {
  const auto lonely = estimate_survival(5, 2, 1, 30, RngSeed{3});
  const std::string csv = survival_csv({lonely});
  CHECK(csv.rfind("n,k,m,trials,applied,survived,no_candidate,rate,formula\n", 0) == 0);
  CHECK(csv.find("\n5,2,1,30,0,0,30,nan,1\n") != std::string::npos);
  CHECK(survival_csv({}).find('\n') == survival_csv({}).size() - 1);
}
