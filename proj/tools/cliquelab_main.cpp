#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cliquelab/clique.hpp"
#include "cliquelab/dimacs.hpp"
#include "cliquelab/forge.hpp"
#include "cliquelab/gnm.hpp"
#include "cliquelab/moments.hpp"
#include "cliquelab/transition.hpp"

namespace {

using namespace cliquelab;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
  if (!path) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + *path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write to " + *path);
}

std::vector<std::int64_t> parse_grid(const std::string& text) {
  std::vector<std::int64_t> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    grid.push_back(std::stoll(item));
  }
  if (grid.empty()) throw std::invalid_argument("--m-grid: no values given");
  return grid;
}

std::vector<std::int64_t> log_spaced_grid(std::int64_t lo, std::int64_t hi, int points) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("--m-min/--m-max: need 1 <= min <= max");
  if (points < 2) throw std::invalid_argument("--points: need at least 2");
  std::vector<std::int64_t> grid;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    auto m = static_cast<std::int64_t>(std::llround(std::exp(llo + t * (lhi - llo))));
    if (m < lo) m = lo;
    if (m > hi) m = hi;
    if (grid.empty() || m > grid.back()) grid.push_back(m);
  }
  return grid;
}

void warn_if_k_large(std::int64_t n, std::int32_t k) {
  if (static_cast<double>(k) > 3.0 * std::log(static_cast<double>(n))) {
    std::cerr << "warning: k = " << k << " exceeds 3 ln n; the threshold scaling assumes"
              << " k of logarithmic order\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"laboratory for the k-clique phase transition in uniform random graphs"};
  app.require_subcommand(1);
  int exit_code = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "sample a uniform G(n,m) graph as DIMACS text");
  std::int32_t gen_n = 0;
  std::int64_t gen_m = 0;
  std::uint64_t gen_seed = 0;
  std::optional<std::string> gen_out;
  std::vector<std::string> gen_comments;
  gen->add_option("--n", gen_n, "vertex count")->required()->check(CLI::PositiveNumber);
  gen->add_option("--m", gen_m, "edge count")->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gen_seed, "root RNG seed")->required();
  gen->add_option("--out", gen_out, "output file (default stdout)");
  gen->add_option("--comment", gen_comments, "comment line(s) for the header");
  gen->callback([&] {
    const Graph g = sample_gnm(gen_n, gen_m, RngSeed{gen_seed});
    write_output(gen_out, emit_dimacs(g, gen_comments));
  });

  // solve
  auto* solve = app.add_subcommand("solve", "decide whether a DIMACS graph has a k-clique");
  std::string solve_in;
  std::int32_t solve_k = 0;
  std::optional<std::uint64_t> solve_budget;
  solve->add_option("--in", solve_in, "DIMACS file, or - for stdin")->required();
  solve->add_option("--k", solve_k, "clique size")->required()->check(CLI::PositiveNumber);
  solve->add_option("--budget", solve_budget, "node budget for the search");
  solve->callback([&] {
    const Graph g = parse_dimacs(read_input(solve_in));
    const SearchResult res = find_k_clique(g, solve_k, solve_budget);
    std::fprintf(stderr, "nodes=%llu budget_exhausted=%d\n",
                 static_cast<unsigned long long>(res.stats.nodes_explored),
                 res.stats.budget_exhausted ? 1 : 0);
    if (res.certificate) {
      std::string line = "clique";
      for (const std::int32_t v : res.certificate->vertices) {
        line += ' ' + std::to_string(v + 1);
      }
      std::cout << line << '\n';
      exit_code = 0;
    } else if (res.indeterminate()) {
      std::cout << "indeterminate\n";
      exit_code = 11;
    } else {
      std::cout << "no-clique\n";
      exit_code = 10;
    }
  });

  // moments
  auto* mom = app.add_subcommand("moments", "first/second moment report for (n, k, m)");
  std::int64_t mom_n = 0;
  std::int32_t mom_k = 0;
  std::int64_t mom_m = 0;
  mom->add_option("--n", mom_n, "vertex count")->required()->check(CLI::PositiveNumber);
  mom->add_option("--k", mom_k, "clique size")->required()->check(CLI::PositiveNumber);
  mom->add_option("--m", mom_m, "edge count")->required()->check(CLI::NonNegativeNumber);
  mom->callback([&] {
    warn_if_k_large(mom_n, mom_k);
    std::cout << moments::moment_report_json(moments::MomentInputs{mom_n, mom_k, mom_m}) << '\n';
  });

  // threshold
  auto* thr = app.add_subcommand("threshold", "threshold edge count m0 and exponent c");
  std::int64_t thr_n = 0;
  std::int32_t thr_k = 0;
  std::optional<std::int64_t> thr_m;
  thr->add_option("--n", thr_n, "vertex count")->required()->check(CLI::PositiveNumber);
  thr->add_option("--k", thr_k, "clique size")->required()->check(CLI::PositiveNumber);
  thr->add_option("--m", thr_m, "edge count for the exponent c");
  thr->callback([&] {
    warn_if_k_large(thr_n, thr_k);
    const auto d = moments::derived_params(moments::MomentInputs{thr_n, thr_k, thr_m.value_or(0)});
    nlohmann::ordered_json j;
    j["n"] = thr_n;
    j["k"] = thr_k;
    j["g"] = d.g;
    j["m0"] = d.m0;
    if (thr_m) {
      j["m"] = *thr_m;
      if (d.c) {
        j["c"] = *d.c;
      } else {
        j["c"] = nullptr;
      }
    } else {
      j["m"] = nullptr;
      j["c"] = nullptr;
    }
    std::cout << j.dump() << '\n';
  });

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "smallest m with E[cliques] >= target");
  std::int64_t cal_n = 0;
  std::int32_t cal_k = 0;
  double cal_target = 0.5;
  cal->add_option("--n", cal_n, "vertex count")->required()->check(CLI::PositiveNumber);
  cal->add_option("--k", cal_k, "clique size")->required()->check(CLI::PositiveNumber);
  cal->add_option("--target", cal_target, "target expectation (default 0.5)")
      ->check(CLI::PositiveNumber);
  cal->callback([&] {
    const auto res = moments::calibrate_m(cal_n, cal_k, cal_target);
    nlohmann::ordered_json j;
    j["n"] = cal_n;
    j["k"] = cal_k;
    j["target"] = cal_target;
    j["m_star"] = res.m_star;
    j["ex_at_m"] = res.ex_at_m;
    j["ex_below"] = res.ex_below;
    j["m0"] = res.m0;
    j["epsilon"] = res.epsilon;
    std::cout << j.dump() << '\n';
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "solvable-fraction sweep across edge counts");
  std::int32_t sw_n = 0;
  std::int32_t sw_k = 0;
  std::uint64_t sw_seed = 0;
  std::int32_t sw_trials = 300;
  std::int32_t sw_points = 21;
  std::optional<std::int64_t> sw_mmin;
  std::optional<std::int64_t> sw_mmax;
  std::optional<std::string> sw_grid;
  std::optional<std::uint64_t> sw_budget;
  std::int32_t sw_threads = 1;
  std::string sw_format = "csv";
  std::optional<std::string> sw_out;
  bool sw_crossover = false;
  sweep->add_option("--n", sw_n, "vertex count")->required()->check(CLI::PositiveNumber);
  sweep->add_option("--k", sw_k, "clique size")->required()->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sw_seed, "root RNG seed")->required();
  sweep->add_option("--trials", sw_trials, "trials per grid point (default 300)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--points", sw_points, "grid size for --m-min/--m-max (default 21)");
  sweep->add_option("--m-min", sw_mmin, "custom grid lower end");
  sweep->add_option("--m-max", sw_mmax, "custom grid upper end");
  sweep->add_option("--m-grid", sw_grid, "explicit comma-separated m values");
  sweep->add_option("--budget", sw_budget, "node budget per search");
  sweep->add_option("--threads", sw_threads, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--format", sw_format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sw_out, "output file (default stdout)");
  sweep->add_flag("--crossover", sw_crossover, "also print the crossover fit to stderr");
  sweep->callback([&] {
    SweepConfig config;
    config.n = sw_n;
    config.k = sw_k;
    config.trials_per_point = sw_trials;
    config.seed = RngSeed{sw_seed};
    config.node_budget = sw_budget;
    if (sw_grid) {
      config.m_grid = parse_grid(*sw_grid);
    } else if (sw_mmin || sw_mmax) {
      if (!sw_mmin || !sw_mmax) {
        throw std::invalid_argument("--m-min and --m-max must be given together");
      }
      config.m_grid = log_spaced_grid(*sw_mmin, *sw_mmax, sw_points);
    } else {
      config.m_grid = default_m_grid(sw_n, sw_k);
    }
    const SweepResult result = run_sweep(config, sw_threads);
    write_output(sw_out, sw_format == "csv" ? sweep_csv(result) : sweep_json(result));
    if (sw_crossover) {
      const auto est = estimate_crossover(result);
      nlohmann::ordered_json j;
      j["m_half"] = est.m_half;
      j["bracket_low_m"] = est.bracket_low_m;
      j["bracket_high_m"] = est.bracket_high_m;
      j["bracket_low_fraction"] = est.bracket_low_fraction;
      j["bracket_high_fraction"] = est.bracket_high_fraction;
      j["method"] = est.method;
      std::cerr << j.dump() << '\n';
    }
  });

  // pair
  auto* pair = app.add_subcommand("pair", "forge matched yes/no instances near the threshold");
  std::int32_t pr_n = 0;
  std::int32_t pr_k = 0;
  std::uint64_t pr_seed = 0;
  std::string pr_stem;
  std::int32_t pr_count = 1;
  ForgeCaps pr_caps;
  pair->add_option("--n", pr_n, "vertex count")->required()->check(CLI::PositiveNumber);
  pair->add_option("--k", pr_k, "clique size")->required()->check(CLI::PositiveNumber);
  pair->add_option("--seed", pr_seed, "root RNG seed; pair i uses seed + i")->required();
  pair->add_option("--stem", pr_stem, "output path prefix")->required();
  pair->add_option("--count", pr_count, "number of pairs (default 1)")
      ->check(CLI::PositiveNumber);
  pair->add_option("--sample-retries", pr_caps.sample_retries,
                   "samples allowed per pair (default 200)")
      ->check(CLI::PositiveNumber);
  pair->add_option("--swap-cap", pr_caps.swap_candidates,
                   "destroy candidates examined per pair (default 100000)")
      ->check(CLI::PositiveNumber);
  pair->callback([&] {
    for (std::int32_t i = 0; i < pr_count; ++i) {
      const RngSeed seed{pr_seed + static_cast<std::uint64_t>(i)};
      const InstancePair p = forge_pair(pr_n, pr_k, seed, pr_caps);
      std::string stem = pr_stem;
      if (pr_count > 1) {
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), "_%03d", i);
        stem += suffix;
      }
      write_pair_files(p, stem);
      std::fprintf(stderr,
                   "pair %d: stem=%s m=%lld attempts=%d candidates=%lld survivals=%lld\n", i,
                   stem.c_str(), static_cast<long long>(p.m), p.sample_attempts,
                   static_cast<long long>(p.destroy_stats.candidates_examined),
                   static_cast<long long>(p.destroy_stats.survival_events));
    }
  });

  // survival
  auto* surv = app.add_subcommand("survival", "empirical vs formula swap survival rates");
  std::vector<std::int32_t> sv_n;
  std::int32_t sv_k = 0;
  std::optional<std::int64_t> sv_m;
  std::int32_t sv_trials = 500;
  std::uint64_t sv_seed = 0;
  std::string sv_conditioning = "exactly-one";
  std::int32_t sv_cap = 1000;
  std::int32_t sv_threads = 1;
  surv->add_option("--n", sv_n, "vertex count(s), repeatable")
      ->required()
      ->check(CLI::PositiveNumber);
  surv->add_option("--k", sv_k, "clique size")->required()->check(CLI::PositiveNumber);
  surv->add_option("--m", sv_m, "edge count (single --n only; default calibrated m*)");
  surv->add_option("--trials", sv_trials, "trials per row (default 500)")
      ->check(CLI::PositiveNumber);
  surv->add_option("--seed", sv_seed, "root RNG seed")->required();
  surv->add_option("--conditioning", sv_conditioning,
                   "exactly-one or at-least-one (default exactly-one)")
      ->check(CLI::IsMember({"exactly-one", "at-least-one"}));
  surv->add_option("--cap", sv_cap, "sample attempts per trial (default 1000)")
      ->check(CLI::PositiveNumber);
  surv->add_option("--threads", sv_threads, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);
  surv->callback([&] {
    if (sv_m && sv_n.size() != 1) {
      throw std::invalid_argument("--m is only meaningful with a single --n");
    }
    const auto conditioning = sv_conditioning == "exactly-one"
                                  ? SurvivalConditioning::kExactlyOne
                                  : SurvivalConditioning::kAtLeastOne;
    std::vector<SurvivalEstimate> rows;
    for (const std::int32_t n : sv_n) {
      const std::int64_t m = sv_m ? *sv_m : moments::calibrate_m(n, sv_k, 0.5).m_star;
      rows.push_back(estimate_survival(n, sv_k, m, sv_trials, RngSeed{sv_seed}, conditioning,
                                       sv_cap, sv_threads));
    }
    std::cout << survival_csv(rows);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and --version land here
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
