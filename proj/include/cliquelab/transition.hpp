#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cliquelab/graph.hpp"
#include "cliquelab/rng.hpp"

namespace cliquelab {

struct SweepConfig {
  std::int32_t n = 0;
  std::int32_t k = 0;
  std::vector<std::int64_t> m_grid;  // strictly ascending, within [0, g]
  std::int32_t trials_per_point = 0;
  RngSeed seed;
  std::optional<std::uint64_t> node_budget;
};

// 21 log-spaced integer edge counts covering the transition window: from
// max(1, round(m0 / 2)) up to twice the m calibrated to E[X] = 1/2,
// deduplicated and clamped to [1, g].
std::vector<std::int64_t> default_m_grid(std::int32_t n, std::int32_t k);

struct SweepPoint {
  std::int64_t m = 0;
  std::int64_t trials = 0;     // determinate evaluations (all graphs in exhaustive mode)
  std::int64_t successes = 0;  // graphs containing a k-clique
  std::int64_t excluded = 0;   // budget-exhausted evaluations, kept out of fraction
  double fraction = 0;         // successes / trials; 0 when trials == 0
  double stderr_value = 0;     // sqrt(f(1-f)/trials); 0 in exhaustive mode
  double expected_cliques = 0;
  double mean_nodes = 0;  // mean search nodes over every evaluation
  bool exhaustive = false;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepPoint> points;
};

// Estimates the solvable fraction at each grid point. A point with
// C(g, m) <= 1e6 is evaluated exhaustively (exact fraction, no sampling);
// otherwise trials_per_point graphs are sampled, trial t of point i drawing
// from seed.derive(i, t). Output is a pure function of the config,
// whatever the thread count.
SweepResult run_sweep(const SweepConfig& config, std::int32_t threads = 1);

// Weighted least-squares fit that is non-decreasing, by pool adjacent
// violators. weights must be positive and sized like values.
std::vector<double> isotonic_fit(const std::vector<double>& values,
                                 const std::vector<double>& weights);

struct CrossoverEstimate {
  double m_half = 0;
  std::int64_t bracket_low_m = 0;
  std::int64_t bracket_high_m = 0;
  double bracket_low_fraction = 0;   // isotonic-fitted values
  double bracket_high_fraction = 0;
  std::string method = "isotonic+linear";
};

// Point where the isotonic-smoothed solvability curve crosses 1/2, linearly
// interpolated inside the bracketing grid cell. Points with zero determinate
// trials are dropped. Throws when the fitted curve never crosses 1/2.
CrossoverEstimate estimate_crossover(const SweepResult& result);

struct BoundCheckReport {
  std::int32_t n = 0;
  std::int32_t k = 0;
  std::int64_t m = 0;
  std::int64_t trials = 0;  // graph count in exhaustive mode
  bool exhaustive = false;
  double p_at_least_one = 0;
  double p_zero = 0;
  double p_one = 0;
  double ex = 0;
  double ex2 = 0;
  double var_ratio = 0;      // Var/E^2; NaN when E[X] = 0
  double pxpos_bound = 0;    // E^2 / E[X^2]
  double stderr_value = 0;   // sampling stderr of p_at_least_one; 0 exhaustive
  double markov_margin = 0;  // E[X] - P(X >= 1), expected >= 0
  double pxpos_margin = 0;   // P(X >= 1) - pxpos_bound, expected >= 0
  double markov_margin_sigma = 0;  // margins in stderr units; NaN exhaustive
  double pxpos_margin_sigma = 0;
};

// Checks the first and second moment bounds at one (n, k, m), exactly when
// C(g, m) <= 1e6 and by sampling otherwise (trial t draws from
// seed.derive(0, t)). trials >= 100. force_sampling skips the exhaustive
// shortcut so the sampler itself can be validated.
BoundCheckReport check_bounds(std::int32_t n, std::int32_t k, std::int64_t m,
                              std::int32_t trials, RngSeed seed, std::int32_t threads = 1,
                              bool force_sampling = false);

// check_bounds at the calibrated edge count m* (E[X] = 1/2); trials >= 1000.
BoundCheckReport calibrated_distribution(std::int32_t n, std::int32_t k,
                                         std::int32_t trials, RngSeed seed,
                                         std::int32_t threads = 1);

// CSV with header m,trials,successes,fraction,expected_cliques,stderr,mean_nodes
// and shortest round-trip float formatting, LF endings.
std::string sweep_csv(const SweepResult& result);

// JSON array of per-point objects carrying the same seven fields.
std::string sweep_json(const SweepResult& result);
std::vector<SweepPoint> sweep_points_from_json(const std::string& text);

std::string bound_report_json(const BoundCheckReport& report);

}  // namespace cliquelab
