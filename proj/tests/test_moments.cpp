#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "cliquelab/clique.hpp"
#include "cliquelab/exhaustive.hpp"
#include "cliquelab/moments.hpp"

using namespace cliquelab;
using namespace cliquelab::moments;

namespace {

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("derived parameters") {
  const auto d = derived_params({4, 3, 3});
  CHECK(d.g == 6);
  CHECK(d.beta == 3);
  CHECK(d.rho == doctest::Approx(0.5));
  CHECK(d.m0 == doctest::Approx(1.5));
  REQUIRE(d.c.has_value());
  CHECK(*d.c == doctest::Approx(0.5));
  CHECK_FALSE(d.k_outside_log_window);

  CHECK(derived_params({100, 3, 49}).m0 == doctest::Approx(49.5));
  CHECK(derived_params({4, 4, 6}).beta == 6);
  CHECK_FALSE(derived_params({4, 4, 6}).c.has_value());  // m == g
  CHECK_FALSE(derived_params({5, 3, 0}).c.has_value());  // m == 0
  CHECK(derived_params({10, 7, 10}).k_outside_log_window);
  CHECK_FALSE(derived_params({100, 4, 10}).k_outside_log_window);

  // c is the inverse of m -> g n^(-2c/(k-1)).
  for (const auto& [n, k, m] : std::vector<std::tuple<std::int64_t, std::int32_t, std::int64_t>>{
           {30, 3, 40}, {50, 4, 300}, {200, 5, 5000}}) {
    const auto dp = derived_params({n, k, m});
    REQUIRE(dp.c.has_value());
    const double back = static_cast<double>(dp.g) *
                        std::exp(-2.0 * *dp.c / (k - 1) * std::log(static_cast<double>(n)));
    CHECK(rel_diff(back, static_cast<double>(m)) < 1e-12);
  }

  CHECK_THROWS_AS(derived_params({4, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(derived_params({4, 5, 3}), std::invalid_argument);
  CHECK_THROWS_AS(derived_params({4, 3, -1}), std::invalid_argument);
  CHECK_THROWS_AS(derived_params({4, 3, 7}), std::invalid_argument);
}

TEST_CASE("binomial_log") {
  CHECK(binomial_log(6, 3) == doctest::Approx(std::log(20.0)).epsilon(1e-13));
  CHECK(binomial_log(5, 0) == 0.0);
  CHECK(binomial_log(5, 5) == 0.0);
  CHECK(binomial_log(0, 0) == 0.0);
  CHECK(binomial_log(3, -1) == -std::numeric_limits<double>::infinity());
  CHECK(binomial_log(3, 4) == -std::numeric_limits<double>::infinity());
  CHECK(binomial_log(-2, 1) == -std::numeric_limits<double>::infinity());
  CHECK(binomial_log(52, 5) == doctest::Approx(std::log(2598960.0)).epsilon(1e-13));
  // Above the exact window the lgamma form takes over; sanity against the
  // product form of C(2e6, 3).
  const double big = binomial_log(2'000'000, 3);
  const double expect = std::log(2e6) + std::log(2e6 - 1) + std::log(2e6 - 2) - std::log(6.0);
  CHECK(rel_diff(big, expect) < 1e-10);
}

TEST_CASE("clique probability, exact paths") {
  CHECK(clique_prob_q({4, 3, 3}) == mpq_class(1, 20));
  CHECK(clique_prob_exact({4, 3, 3}) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(clique_prob_exact({4, 3, 6}) == 1.0);
  CHECK(clique_prob_exact({4, 3, 2}) == 0.0);
  CHECK(clique_prob_exact({4, 3, 0}) == 0.0);

  // Both numeric paths agree to 1e-9 relative wherever both run.
  for (const std::int64_t n : {30, 200, 1414}) {
    for (const std::int32_t k : {3, 5}) {
      const std::int64_t g = n * (n - 1) / 2;
      const std::int64_t beta = static_cast<std::int64_t>(k) * (k - 1) / 2;
      const auto m0 = static_cast<std::int64_t>(derived_params({n, k, 0}).m0);
      for (const std::int64_t m :
           {beta + 1, std::max<std::int64_t>(beta + 1, m0), g / 2, g - 1}) {
        const MomentInputs in{n, k, m};
        const double exact = clique_prob_exact(in, NumericPath::kRational);
        const double logged = clique_prob_exact(in, NumericPath::kLogSpace);
        CHECK(rel_diff(exact, logged) < 1e-9);
      }
    }
  }

  CHECK_THROWS_AS(clique_prob_exact({2'000'000, 3, 10}, NumericPath::kRational),
                  std::invalid_argument);
}

TEST_CASE("closed-form clique probability") {
  // Frozen values.
  CHECK(clique_prob_stirling({100, 3, 50}) == doctest::Approx(1.0626710395413404e-06).epsilon(1e-9));
  const double exact100 = clique_prob_exact({100, 3, 50});
  CHECK(clique_prob_stirling({100, 3, 50}) / exact100 == doctest::Approx(1.0953271859).epsilon(1e-6));

  const double s1000 = clique_prob_stirling({1000, 3, 500});
  const double e1000 = clique_prob_exact({1000, 3, 500});
  CHECK(s1000 / e1000 == doctest::Approx(1.0090507642).epsilon(1e-6));
  CHECK(std::abs(s1000 / e1000 - 1.0) < 0.02);

  CHECK_THROWS_AS(clique_prob_stirling({4, 3, 3}), std::invalid_argument);  // m == beta
  CHECK_THROWS_AS(clique_prob_stirling({4, 3, 2}), std::invalid_argument);
}

TEST_CASE("first moment") {
  CHECK(expected_cliques_q({4, 3, 3}) == mpq_class(1, 5));
  CHECK(expected_cliques({4, 3, 3}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(expected_cliques({4, 3, 4}) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(expected_cliques({4, 3, 5}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(expected_cliques({4, 3, 6}) == 4.0);
  CHECK(expected_cliques({4, 3, 2}) == 0.0);
  CHECK(rel_diff(expected_cliques({4, 3, 5}, NumericPath::kLogSpace), 2.0) < 1e-12);
  CHECK(rel_diff(expected_cliques({60, 4, 180}, NumericPath::kLogSpace),
                 expected_cliques({60, 4, 180}, NumericPath::kRational)) < 1e-9);
}

TEST_CASE("second moment matches exhaustive enumeration") {
  CHECK(second_moment({4, 3, 3}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(second_moment({4, 3, 5}) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(second_moment({4, 3, 6}) == 16.0);

  for (const std::int32_t n : {4, 5}) {
    const std::int64_t g = pair_count(n);
    for (std::int64_t m = 0; m <= g; ++m) {
      // Independent oracle: enumerate all m-edge graphs, count with the
      // subset-checking reference, accumulate exact moments.
      mpz_class sum_x = 0;
      mpz_class sum_x2 = 0;
      std::int64_t total = 0;
      for_each_edge_set(n, m, [&](const Graph& graph) {
        const auto x = static_cast<unsigned long>(brute_force_count(graph, 3));
        sum_x += x;
        sum_x2 += static_cast<unsigned long>(x) * x;
        ++total;
      });
      mpq_class oracle_ex(sum_x, mpz_class(total));
      oracle_ex.canonicalize();
      mpq_class oracle_ex2(sum_x2, mpz_class(total));
      oracle_ex2.canonicalize();
      const MomentInputs in{n, 3, m};
      CHECK(expected_cliques_q(in) == oracle_ex);
      CHECK(second_moment_q(in) == oracle_ex2);
      if (oracle_ex2 > 0) {
        CHECK(rel_diff(second_moment(in, NumericPath::kLogSpace), oracle_ex2.get_d()) < 1e-12);
      } else {
        CHECK(second_moment(in, NumericPath::kLogSpace) == 0.0);
      }
    }
  }
}

TEST_CASE("variance decomposition identity and frozen cases") {
  const auto v435 = variance_decomposition({4, 3, 5});
  CHECK(v435.ex == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(v435.ex2 == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(v435.var == doctest::Approx(0.0));
  CHECK(v435.a_n == 0.0);
  CHECK(v435.b_n == 0.0);
  CHECK(v435.c_n == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v435.ratio == doctest::Approx(0.0));
  REQUIRE(v435.overlap_terms.size() == 3);
  CHECK(v435.overlap_terms[0].term_value == 0.0);  // r = 0 needs 12 distinct edges
  CHECK(v435.overlap_terms[1].term_value == 0.0);
  CHECK(v435.overlap_terms[2].r == 2);
  CHECK(v435.overlap_terms[2].w == 5);
  CHECK(v435.overlap_terms[2].term_value == doctest::Approx(2.0).epsilon(1e-15));

  // A_n at (100, 3): (C(97,3) + 3 C(97,2)) / C(100,3) = 161408/161700.
  const auto v100 = variance_decomposition_q({100, 3, 49});
  mpq_class a_expect(161408, 161700);
  a_expect.canonicalize();
  CHECK(v100.a_n == a_expect);

  // B_n at (5, 3, 8): C(4,2) C(10,8) / C(7,5)^2 = 270/441.
  const auto v538 = variance_decomposition_q({5, 3, 8});
  mpq_class b_expect(270, 441);
  b_expect.canonicalize();
  CHECK(v538.b_n == b_expect);

  CHECK_THROWS_AS(variance_decomposition({4, 3, 2}), std::invalid_argument);
  CHECK_THROWS_AS(variance_decomposition_q({4, 3, 1}), std::invalid_argument);

  // ratio == 1/ex + a b + c - 1 exactly, across a spread of inputs.
  for (const std::int64_t n : {5, 8, 12, 20, 40}) {
    for (const std::int32_t k : {2, 3, 4, 5}) {
      if (k > n) continue;
      const std::int64_t g = n * (n - 1) / 2;
      const std::int64_t beta = static_cast<std::int64_t>(k) * (k - 1) / 2;
      for (const std::int64_t m : {beta, beta + 2, g / 2, g - 1, g}) {
        if (m < beta || m > g) continue;
        const auto q = variance_decomposition_q({n, k, m});
        const mpq_class lhs = 1 / q.ex + q.a_n * q.b_n + q.c_n - 1;
        CHECK(lhs == q.ratio);
        CHECK(q.ex2 == q.var + q.ex * q.ex);
      }
    }
  }

  // Rational and log paths agree.
  for (const std::int64_t m : {6, 50, 180, 360, 1000}) {
    const auto a = variance_decomposition({60, 4, m}, NumericPath::kRational);
    const auto b = variance_decomposition({60, 4, m}, NumericPath::kLogSpace);
    CHECK(rel_diff(a.ex, b.ex) < 1e-9);
    CHECK(rel_diff(a.a_n, b.a_n) < 1e-9);
    CHECK(std::abs(a.b_n - b.b_n) < 1e-9 * std::max(1.0, std::abs(a.b_n)));
    CHECK(std::abs(a.c_n - b.c_n) < 1e-9 * std::max(1.0, std::abs(a.c_n)));
    CHECK(std::abs(a.ratio - b.ratio) < 1e-9 * std::max(1.0, std::abs(a.ratio)));
  }
}

TEST_CASE("calibration") {
  const auto tiny = calibrate_m(4, 3, 0.5);
  CHECK(tiny.m_star == 4);
  CHECK(tiny.ex_at_m == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(tiny.ex_below == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(tiny.m0 == doctest::Approx(1.5));
  CHECK(tiny.epsilon == doctest::Approx(2.5));

  CHECK(calibrate_m(4, 3, 2.0).m_star == 5);
  CHECK(calibrate_m(4, 3, 4.0).m_star == 6);
  CHECK_THROWS_AS(calibrate_m(4, 3, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(calibrate_m(4, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(calibrate_m(4, 3, -1.0), std::invalid_argument);

  // Frozen from exact enumeration of E[X](m).
  const auto c60 = calibrate_m(60, 4, 0.5);
  CHECK(c60.m_star == 180);
  CHECK(c60.ex_at_m == doctest::Approx(0.5000449807746923).epsilon(1e-12));
  CHECK(c60.m0 == doctest::Approx(115.4885954144815).epsilon(1e-12));
  CHECK(calibrate_m(60, 4, std::log(2.0)).m_star == 190);
  CHECK(calibrate_m(30, 4, 0.5).m_star == 73);
  CHECK(calibrate_m(50, 4, 0.5).m_star == 142);
  CHECK(calibrate_m(80, 4, 0.5).m_star == 264);

  // The bracket certificate holds for assorted targets.
  for (const double target : {0.1, 1.0, 7.3}) {
    const auto res = calibrate_m(30, 3, target);
    CHECK(res.ex_at_m >= target);
    CHECK(res.ex_below < target);
  }
}

TEST_CASE("survival probability") {
  const auto small = survival_probability(6, 3, 8);
  CHECK(small.value == doctest::Approx(15.0 / 22.0).epsilon(1e-15));
  CHECK_FALSE(small.clamped);

  // k = 2 removes the only clique edge and any rewiring restores one.
  const auto k2 = survival_probability(8, 2, 6);
  CHECK(k2.value == 1.0);
  CHECK_FALSE(k2.clamped);

  // Frozen from exact big-integer evaluation.
  const auto big = survival_probability(100, 4, 371);
  CHECK(big.value == doctest::Approx(0.010843888261716528).epsilon(1e-12));
  // Its leading behaviour is 2 (m/g)^(k-2).
  const double leading = 2.0 * std::pow(371.0 / 4950.0, 2);
  CHECK(std::abs(big.value / leading - 1.0) < 0.05);

  CHECK(survival_probability(30, 4, 73).value ==
        doctest::Approx(0.04761601235403448).epsilon(1e-12));

  for (const std::int64_t m : {6, 10, 100, 435}) {
    const auto s = survival_probability(30, 4, m);
    CHECK(s.value >= 0.0);
    CHECK(s.value <= 1.0);
    CHECK_FALSE(s.clamped);
  }

  CHECK_THROWS_AS(survival_probability(6, 3, 2), std::invalid_argument);  // m < beta
}

TEST_CASE("positive-probability lower bound") {
  CHECK(pxpos_lower_bound({4, 3, 3}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(pxpos_lower_bound({4, 3, 5}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pxpos_lower_bound({4, 3, 2}) == 0.0);
  // Log path stays within [0, 1] and close to the exact value.
  const double exact = pxpos_lower_bound({60, 4, 180}, NumericPath::kRational);
  const double logged = pxpos_lower_bound({60, 4, 180}, NumericPath::kLogSpace);
  CHECK(rel_diff(exact, logged) < 1e-9);
}

TEST_CASE("moment report JSON") {
  // Fully frozen: every value is exact in binary.
  CHECK(moment_report_json({4, 3, 3}) ==
        "{\"n\":4,\"k\":3,\"m\":3,\"g\":6,\"beta\":3,\"rho\":0.5,\"m0\":1.5,\"c\":0.5,"
        "\"ex\":0.2,\"ex2\":0.2,\"var\":0.16,\"a_n\":0.0,\"b_n\":0.0,\"c_n\":0.0,\"ratio\":4.0}");
  CHECK(moment_report_json({4, 3, 6}) ==
        "{\"n\":4,\"k\":3,\"m\":6,\"g\":6,\"beta\":3,\"rho\":1.0,\"m0\":1.5,\"c\":null,"
        "\"ex\":4.0,\"ex2\":16.0,\"var\":0.0,\"a_n\":0.0,\"b_n\":1.0,\"c_n\":0.75,\"ratio\":0.0}");

  // Below beta the clique count is identically zero and the normalized
  // fields are null.
  const std::string low = moment_report_json({4, 3, 2});
  CHECK(low.find("\"ex\":0.0") != std::string::npos);
  CHECK(low.find("\"b_n\":null") != std::string::npos);
  CHECK(low.find("\"c_n\":null") != std::string::npos);
  CHECK(low.find("\"ratio\":null") != std::string::npos);
  // Key order is part of the contract.
  CHECK(low.find("\"n\":") < low.find("\"k\":"));
  CHECK(low.find("\"k\":") < low.find("\"m\":"));
  CHECK(low.find("\"m0\":") < low.find("\"c\":"));
  CHECK(low.find("\"ex\":") < low.find("\"ex2\":"));
  CHECK(low.find("\"var\":") < low.find("\"a_n\":"));
}
