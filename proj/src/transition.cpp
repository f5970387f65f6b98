#include "cliquelab/transition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cliquelab/clique.hpp"
#include "cliquelab/exhaustive.hpp"
#include "cliquelab/gnm.hpp"
#include "cliquelab/moments.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace cliquelab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_nk(std::int32_t n, std::int32_t k, const char* who) {
  if (k < 2 || k > n) {
    throw std::invalid_argument(std::string(who) + ": require 2 <= k <= n");
  }
  if (n > Graph::kMaxVertices) {
    throw std::invalid_argument(std::string(who) + ": n exceeds " +
                                std::to_string(Graph::kMaxVertices));
  }
}

struct PointOutcome {
  std::int64_t trials = 0;     // determinate
  std::int64_t successes = 0;
  std::int64_t excluded = 0;
  std::uint64_t total_nodes = 0;
  std::int64_t evaluations = 0;
  bool exhaustive = false;
};

// One grid point of a sweep: exact enumeration when the space is small,
// otherwise trials_per_point samples with per-trial seeds derived from
// (point_index, trial).
PointOutcome solve_fraction_at(std::int32_t n, std::int32_t k, std::int64_t m,
                               std::int32_t trials, RngSeed seed, std::int64_t point_index,
                               std::optional<std::uint64_t> budget, std::int32_t threads,
                               bool force_sampling) {
  PointOutcome out;
  if (!force_sampling && edge_set_count_within(n, m, kExhaustiveLimit)) {
    out.exhaustive = true;
    for_each_edge_set(n, m, [&](const Graph& g) {
      const SearchResult res = find_k_clique(g, k, budget);
      ++out.evaluations;
      out.total_nodes += res.stats.nodes_explored;
      if (res.indeterminate()) {
        ++out.excluded;
      } else {
        ++out.trials;
        if (res.certificate) ++out.successes;
      }
    });
    return out;
  }

  struct Trial {
    std::uint64_t nodes = 0;
    char determinate = 0;
    char success = 0;
  };
  std::vector<Trial> results(static_cast<std::size_t>(trials));
  detail::parallel_for(trials, threads, [&](std::int64_t t) {
    const Graph g = sample_gnm(n, m, seed.derive(static_cast<std::uint64_t>(point_index),
                                                 static_cast<std::uint64_t>(t)));
    const SearchResult res = find_k_clique(g, k, budget);
    auto& slot = results[static_cast<std::size_t>(t)];
    slot.nodes = res.stats.nodes_explored;
    slot.determinate = res.indeterminate() ? 0 : 1;
    slot.success = res.certificate ? 1 : 0;
  });
  for (const auto& r : results) {
    ++out.evaluations;
    out.total_nodes += r.nodes;
    if (r.determinate) {
      ++out.trials;
      out.successes += r.success;
    } else {
      ++out.excluded;
    }
  }
  return out;
}

SweepPoint to_point(std::int64_t m, const PointOutcome& o, double expected) {
  SweepPoint p;
  p.m = m;
  p.trials = o.trials;
  p.successes = o.successes;
  p.excluded = o.excluded;
  p.fraction = o.trials > 0 ? static_cast<double>(o.successes) / static_cast<double>(o.trials) : 0.0;
  p.stderr_value = (o.exhaustive || o.trials == 0)
                       ? 0.0
                       : std::sqrt(p.fraction * (1.0 - p.fraction) / static_cast<double>(o.trials));
  p.expected_cliques = expected;
  p.mean_nodes = o.evaluations > 0
                     ? static_cast<double>(o.total_nodes) / static_cast<double>(o.evaluations)
                     : 0.0;
  p.exhaustive = o.exhaustive;
  return p;
}

}  // namespace

std::vector<std::int64_t> default_m_grid(std::int32_t n, std::int32_t k) {
  check_nk(n, k, "default_m_grid");
  const auto cal = moments::calibrate_m(n, k, 0.5);
  const std::int64_t g = pair_count(n);
  std::int64_t lo = std::max<std::int64_t>(1, std::llround(cal.m0 / 2.0));
  std::int64_t hi = std::min<std::int64_t>(g, 2 * cal.m_star);
  if (hi < lo) hi = lo;

  std::vector<std::int64_t> grid;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (int i = 0; i < 21; ++i) {
    const double t = static_cast<double>(i) / 20.0;
    auto m = static_cast<std::int64_t>(std::llround(std::exp(llo + t * (lhi - llo))));
    m = std::clamp(m, lo, hi);
    if (grid.empty() || m > grid.back()) grid.push_back(m);
  }
  return grid;
}

SweepResult run_sweep(const SweepConfig& config, std::int32_t threads) {
  check_nk(config.n, config.k, "run_sweep");
  if (config.trials_per_point < 1) {
    throw std::invalid_argument("run_sweep: trials_per_point must be positive");
  }
  if (config.m_grid.empty()) throw std::invalid_argument("run_sweep: empty m grid");
  const std::int64_t g = pair_count(config.n);
  for (std::size_t i = 0; i < config.m_grid.size(); ++i) {
    const std::int64_t m = config.m_grid[i];
    if (m < 0 || m > g) {
      throw std::invalid_argument("run_sweep: grid point " + std::to_string(m) +
                                  " outside [0, " + std::to_string(g) + "]");
    }
    if (i > 0 && config.m_grid[i - 1] >= m) {
      throw std::invalid_argument("run_sweep: m grid must be strictly ascending");
    }
  }

  SweepResult result;
  result.config = config;
  result.points.reserve(config.m_grid.size());
  for (std::size_t i = 0; i < config.m_grid.size(); ++i) {
    const std::int64_t m = config.m_grid[i];
    const auto outcome = solve_fraction_at(config.n, config.k, m, config.trials_per_point,
                                           config.seed, static_cast<std::int64_t>(i),
                                           config.node_budget, threads, false);
    const double expected =
        moments::expected_cliques(moments::MomentInputs{config.n, config.k, m});
    result.points.push_back(to_point(m, outcome, expected));
  }
  return result;
}

std::vector<double> isotonic_fit(const std::vector<double>& values,
                                 const std::vector<double>& weights) {
  if (values.size() != weights.size()) {
    throw std::invalid_argument("isotonic_fit: values and weights differ in length");
  }
  for (const double w : weights) {
    if (!(w > 0)) throw std::invalid_argument("isotonic_fit: weights must be positive");
  }

  struct Block {
    double weight;
    double mean;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({weights[i], values[i], 1});
    // Merge backwards while the means decrease.
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean >= blocks.back().mean) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      const double w = a.weight + b.weight;
      a.mean = (a.weight * a.mean + b.weight * b.mean) / w;
      a.weight = w;
      a.count += b.count;
    }
  }

  std::vector<double> fitted;
  fitted.reserve(values.size());
  for (const Block& b : blocks) {
    for (std::size_t i = 0; i < b.count; ++i) fitted.push_back(b.mean);
  }
  return fitted;
}

CrossoverEstimate estimate_crossover(const SweepResult& result) {
  std::vector<std::int64_t> ms;
  std::vector<double> fractions;
  std::vector<double> weights;
  for (const auto& p : result.points) {
    if (p.trials <= 0) continue;  // nothing was resolved at this point
    ms.push_back(p.m);
    fractions.push_back(p.fraction);
    weights.push_back(static_cast<double>(p.trials));
  }
  if (ms.size() < 2) {
    throw std::invalid_argument("estimate_crossover: need at least two resolved points");
  }

  const std::vector<double> fitted = isotonic_fit(fractions, weights);

  std::size_t hi = fitted.size();
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    if (fitted[i] >= 0.5) {
      hi = i;
      break;
    }
  }
  if (hi == fitted.size()) {
    throw std::invalid_argument("estimate_crossover: fitted curve stays below 1/2");
  }
  if (hi == 0) {
    throw std::invalid_argument("estimate_crossover: fitted curve starts at or above 1/2");
  }

  const std::size_t lo = hi - 1;
  CrossoverEstimate est;
  est.bracket_low_m = ms[lo];
  est.bracket_high_m = ms[hi];
  est.bracket_low_fraction = fitted[lo];
  est.bracket_high_fraction = fitted[hi];
  const double rise = fitted[hi] - fitted[lo];
  est.m_half = static_cast<double>(ms[lo]) +
               (0.5 - fitted[lo]) / rise * static_cast<double>(ms[hi] - ms[lo]);
  return est;
}

BoundCheckReport check_bounds(std::int32_t n, std::int32_t k, std::int64_t m,
                              std::int32_t trials, RngSeed seed, std::int32_t threads,
                              bool force_sampling) {
  check_nk(n, k, "check_bounds");
  if (trials < 100) throw std::invalid_argument("check_bounds: trials must be >= 100");
  const moments::MomentInputs in{n, k, m};
  const auto derived = moments::derived_params(in);  // validates m

  BoundCheckReport rep;
  rep.n = n;
  rep.k = k;
  rep.m = m;
  rep.ex = moments::expected_cliques(in);
  rep.ex2 = moments::second_moment(in);
  rep.var_ratio = m >= derived.beta ? moments::variance_decomposition(in).ratio : kNaN;
  rep.pxpos_bound = moments::pxpos_lower_bound(in);

  if (!force_sampling && edge_set_count_within(n, m, kExhaustiveLimit)) {
    const auto dist = exact_clique_distribution(n, k, m);
    rep.exhaustive = true;
    rep.trials = dist.graph_count;
    const auto total = static_cast<double>(dist.graph_count);
    rep.p_zero = static_cast<double>(dist.graphs_with(0)) / total;
    rep.p_one = static_cast<double>(dist.graphs_with(1)) / total;
    rep.p_at_least_one = static_cast<double>(dist.graphs_with_at_least_one()) / total;
    rep.stderr_value = 0.0;
    rep.markov_margin = rep.ex - rep.p_at_least_one;
    rep.pxpos_margin = rep.p_at_least_one - rep.pxpos_bound;
    rep.markov_margin_sigma = kNaN;
    rep.pxpos_margin_sigma = kNaN;
    return rep;
  }

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(trials), 0);
  detail::parallel_for(trials, threads, [&](std::int64_t t) {
    const Graph g = sample_gnm(n, m, seed.derive(0, static_cast<std::uint64_t>(t)));
    counts[static_cast<std::size_t>(t)] = count_k_cliques(g, k);
  });

  std::int64_t zero = 0;
  std::int64_t one = 0;
  for (const auto c : counts) {
    if (c == 0) ++zero;
    if (c == 1) ++one;
  }
  rep.trials = trials;
  const auto total = static_cast<double>(trials);
  rep.p_zero = static_cast<double>(zero) / total;
  rep.p_one = static_cast<double>(one) / total;
  rep.p_at_least_one = static_cast<double>(trials - zero) / total;
  rep.stderr_value = std::sqrt(rep.p_at_least_one * (1.0 - rep.p_at_least_one) / total);
  rep.markov_margin = rep.ex - rep.p_at_least_one;
  rep.pxpos_margin = rep.p_at_least_one - rep.pxpos_bound;
  rep.markov_margin_sigma = rep.markov_margin / rep.stderr_value;
  rep.pxpos_margin_sigma = rep.pxpos_margin / rep.stderr_value;
  return rep;
}

BoundCheckReport calibrated_distribution(std::int32_t n, std::int32_t k, std::int32_t trials,
                                         RngSeed seed, std::int32_t threads) {
  check_nk(n, k, "calibrated_distribution");
  if (trials < 1000) {
    throw std::invalid_argument("calibrated_distribution: trials must be >= 1000");
  }
  const auto cal = moments::calibrate_m(n, k, 0.5);
  return check_bounds(n, k, cal.m_star, trials, seed, threads);
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "m,trials,successes,fraction,expected_cliques,stderr,mean_nodes\n";
  for (const auto& p : result.points) {
    out += std::to_string(p.m) + ',' + std::to_string(p.trials) + ',' +
           std::to_string(p.successes) + ',' + detail::format_double(p.fraction) + ',' +
           detail::format_double(p.expected_cliques) + ',' +
           detail::format_double(p.stderr_value) + ',' + detail::format_double(p.mean_nodes) +
           '\n';
  }
  return out;
}

std::string sweep_json(const SweepResult& result) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : result.points) {
    nlohmann::ordered_json row;
    row["m"] = p.m;
    row["trials"] = p.trials;
    row["successes"] = p.successes;
    row["fraction"] = p.fraction;
    row["expected_cliques"] = p.expected_cliques;
    row["stderr"] = p.stderr_value;
    row["mean_nodes"] = p.mean_nodes;
    arr.push_back(std::move(row));
  }
  return arr.dump();
}

std::vector<SweepPoint> sweep_points_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  if (!arr.is_array()) {
    throw std::invalid_argument("sweep_points_from_json: expected a JSON array");
  }
  std::vector<SweepPoint> points;
  points.reserve(arr.size());
  for (const auto& row : arr) {
    SweepPoint p;
    p.m = row.at("m").get<std::int64_t>();
    p.trials = row.at("trials").get<std::int64_t>();
    p.successes = row.at("successes").get<std::int64_t>();
    p.fraction = row.at("fraction").get<double>();
    p.expected_cliques = row.at("expected_cliques").get<double>();
    p.stderr_value = row.at("stderr").get<double>();
    p.mean_nodes = row.at("mean_nodes").get<double>();
    points.push_back(p);
  }
  return points;
}

std::string bound_report_json(const BoundCheckReport& report) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  j["k"] = report.k;
  j["m"] = report.m;
  j["trials"] = report.trials;
  j["exhaustive"] = report.exhaustive;
  j["p_at_least_one"] = report.p_at_least_one;
  j["p_zero"] = report.p_zero;
  j["p_one"] = report.p_one;
  j["ex"] = report.ex;
  j["ex2"] = report.ex2;
  j["var_ratio"] = report.var_ratio;
  j["pxpos_bound"] = report.pxpos_bound;
  j["stderr"] = report.stderr_value;
  j["markov_margin"] = report.markov_margin;
  j["markov_margin_sigma"] = report.markov_margin_sigma;
  j["pxpos_margin"] = report.pxpos_margin;
  j["pxpos_margin_sigma"] = report.pxpos_margin_sigma;
  return j.dump();
}

}  // namespace cliquelab
