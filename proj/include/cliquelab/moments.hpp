#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cliquelab::moments {

// Parameters for the k-clique count X of a uniform random m-edge graph on n
// labelled vertices. Every function validates 2 <= k <= n and
// 0 <= m <= g = n(n-1)/2 and throws std::invalid_argument otherwise. n is
// not bounded by the graph construction limit; these are pure arithmetic.
struct MomentInputs {
  std::int64_t n = 0;
  std::int32_t k = 0;
  std::int64_t m = 0;
};

struct DerivedParams {
  std::int64_t g = 0;     // n(n-1)/2 vertex pairs
  std::int64_t beta = 0;  // k(k-1)/2 edges inside a k-clique
  double rho = 0;         // edge density 2m/(n(n-1))
  double m0 = 0;          // g * n^(-2/(k-1)), where E[X] is of order one
  // Exponent c solving m = g * n^(-2c/(k-1)); defined only for 0 < m < g.
  std::optional<double> c;
  // k > 3 ln n. The closed-form approximations and the m0 scaling are tuned
  // for k growing no faster than logarithmically; callers may want to warn.
  bool k_outside_log_window = false;
};

DerivedParams derived_params(const MomentInputs& in);

// ln C(a, b); -infinity when the binomial is zero (b < 0, b > a, or a < 0).
// Exact 64-bit evaluation when a <= 1e6 and the value fits, lgamma fallback
// otherwise.
double binomial_log(std::int64_t a, std::int64_t b);

enum class NumericPath {
  kAuto,      // rational when feasible, log-space otherwise
  kRational,  // exact big-rational arithmetic; requires g <= 1e6
  kLogSpace,
};

// The exact path is kept to g <= 1e6 so numerators and denominators stay
// cheap; beyond that the log-space path takes over.
bool rational_path_feasible(const MomentInputs& in);

// Probability that a fixed k-vertex set forms a clique:
// C(g - beta, m - beta) / C(g, m), computed as the telescoped product
// prod_{i < beta} (m - i) / (g - i).
mpq_class clique_prob_q(const MomentInputs& in);
double clique_prob_exact(const MomentInputs& in, NumericPath path = NumericPath::kAuto);

// Closed-form approximation (m/g)^beta * sqrt(1 + beta(g-m) / ((m-beta) g));
// requires m > beta.
double clique_prob_stirling(const MomentInputs& in);

// E[X] = C(n,k) * clique probability.
mpq_class expected_cliques_q(const MomentInputs& in);
double expected_cliques(const MomentInputs& in, NumericPath path = NumericPath::kAuto);

// E[X^2] = E[X]
//        + sum_{r=0}^{k-1} C(n,k) C(k,r) C(n-k,k-r) C(g-w, m-w) / C(g, m),
// where r counts shared vertices between two distinct k-sets and
// w(r) = 2 beta - r(r-1)/2 is the size of their edge union.
mpq_class second_moment_q(const MomentInputs& in);
double second_moment(const MomentInputs& in, NumericPath path = NumericPath::kAuto);

struct OverlapTerm {
  std::int32_t r = 0;
  std::int64_t w = 0;
  double term_value = 0;  // contribution of overlap class r to E[X^2]
};

// Var[X] / E[X]^2 split as 1/E[X] + A_n B_n + C_n - 1 with
//   A_n = (C(n-k,k) + k C(n-k,k-1)) / C(n,k)
//   B_n = C(g-2b, m-2b) C(g, m) / C(g-b, m-b)^2          (b = beta)
//   C_n = sum_{r=2}^{k-1} C(k,r) C(n-k,k-r) C(g-w, m-w) C(g, m)
//                         / (C(n,k) C(g-b, m-b)^2).
// The r = 0 and r = 1 overlap classes make up A_n B_n; classes with two or
// more shared vertices make up C_n. Fields satisfy var = ex2 - ex^2 and
// ratio * ex^2 = var. Requires E[X] > 0, i.e. m >= beta.
struct VarianceDecomposition {
  double ex = 0;
  double ex2 = 0;
  double var = 0;
  double a_n = 0;
  double b_n = 0;
  double c_n = 0;
  double ratio = 0;                        // Var / E^2
  std::vector<OverlapTerm> overlap_terms;  // r = 0 .. k-1
};

struct VarianceDecompositionQ {
  mpq_class ex, ex2, var, a_n, b_n, c_n, ratio;
};

VarianceDecomposition variance_decomposition(const MomentInputs& in,
                                             NumericPath path = NumericPath::kAuto);
VarianceDecompositionQ variance_decomposition_q(const MomentInputs& in);

// Smallest m with E[X] >= target, by binary search on the monotone first
// moment, and the bracket certifying minimality. target must lie in
// (0, C(n,k)].
struct CalibrationResult {
  std::int64_t m_star = 0;
  double ex_at_m = 0;   // E[X] at m_star, >= target
  double ex_below = 0;  // E[X] at m_star - 1, < target
  double m0 = 0;
  double epsilon = 0;  // m_star - m0
};

CalibrationResult calibrate_m(std::int64_t n, std::int32_t k, double target);

// Probability that removing one clique edge and rewiring leaves some
// k-clique through one of the two reattachment patterns:
//   [2 C(g-b-j, m-b-j) - C(g-b-2j, m-b-2j)] / C(g-b, m-b),   j = k - 2.
// The raw value is clamped to [0, 1]; requires m >= beta.
struct SurvivalProbability {
  double value = 0;  // clamped
  double raw = 0;
  bool clamped = false;
};

SurvivalProbability survival_probability(std::int64_t n, std::int32_t k, std::int64_t m);

// Second-moment bound P(X > 0) >= E[X]^2 / E[X^2]; zero when E[X] = 0.
double pxpos_lower_bound(const MomentInputs& in, NumericPath path = NumericPath::kAuto);

// Single-line JSON with fixed key order
// n,k,m,g,beta,rho,m0,c,ex,ex2,var,a_n,b_n,c_n,ratio. Keys that are
// undefined for the inputs are null: c at m = 0 or m = g, and b_n, c_n,
// ratio when E[X] = 0.
std::string moment_report_json(const MomentInputs& in);

}  // namespace cliquelab::moments
