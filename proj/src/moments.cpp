#include "cliquelab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace cliquelab::moments {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::int64_t kRationalLimit = 1'000'000;  // largest g for the exact path
constexpr std::int64_t kMaxN = 1'000'000'000;       // keeps g inside int64

void validate(const MomentInputs& in) {
  if (in.n > kMaxN) {
    throw std::invalid_argument("moments: n exceeds " + std::to_string(kMaxN));
  }
  if (in.k < 2 || static_cast<std::int64_t>(in.k) > in.n) {
    throw std::invalid_argument("moments: require 2 <= k <= n (k = " + std::to_string(in.k) +
                                ", n = " + std::to_string(in.n) + ")");
  }
  const std::int64_t g = in.n * (in.n - 1) / 2;
  if (in.m < 0 || in.m > g) {
    throw std::invalid_argument("moments: require 0 <= m <= " + std::to_string(g) +
                                " (m = " + std::to_string(in.m) + ")");
  }
}

std::int64_t g_of(const MomentInputs& in) { return in.n * (in.n - 1) / 2; }
std::int64_t beta_of(const MomentInputs& in) {
  return static_cast<std::int64_t>(in.k) * (in.k - 1) / 2;
}

// C(a-j, b-j) / C(a, b) telescopes to prod_{i<j} (b-i)/(a-i). Exactly zero
// when b < j; requires 0 <= b <= a and j <= a.
mpq_class falling_ratio_q(std::int64_t a, std::int64_t b, std::int64_t j) {
  if (b < j) return mpq_class(0);
  mpz_class num = 1;
  mpz_class den = 1;
  for (std::int64_t i = 0; i < j; ++i) {
    num *= static_cast<unsigned long>(b - i);
    den *= static_cast<unsigned long>(a - i);
  }
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

// Log of the same ratio, summed factor by factor so nearby terms cancel
// exactly instead of through lgamma differences.
double log_falling_ratio(std::int64_t a, std::int64_t b, std::int64_t j) {
  if (b < j) return kNegInf;
  double s = 0;
  for (std::int64_t i = 0; i < j; ++i) {
    s += std::log(static_cast<double>(b - i) / static_cast<double>(a - i));
  }
  return s;
}

// ln C(n, k) as a k-term product, for the small-k binomials in front of the
// edge-count ratios.
double log_binom_product(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n || n < 0) return kNegInf;
  k = std::min(k, n - k);
  double s = 0;
  for (std::int64_t i = 0; i < k; ++i) {
    s += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1));
  }
  return s;
}

mpz_class binom_z(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n || n < 0) return mpz_class(0);
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// mpq_get_d truncates toward zero; nudge to the neighbouring double when that
// one is closer, so conversions are correctly rounded.
double q_to_double(const mpq_class& q) {
  const double d = q.get_d();
  if (!std::isfinite(d)) return d;
  const double next = std::nextafter(
      d, q < 0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity());
  if (!std::isfinite(next)) return d;
  const mpq_class err_d = abs(q - mpq_class(d));
  const mpq_class err_next = abs(q - mpq_class(next));
  return err_next < err_d ? next : d;
}

bool rational_feasible_g(std::int64_t g) { return g <= kRationalLimit; }

NumericPath resolve_path(const MomentInputs& in, NumericPath path, const char* who) {
  const std::int64_t g = g_of(in);
  if (path == NumericPath::kAuto) {
    return rational_feasible_g(g) ? NumericPath::kRational : NumericPath::kLogSpace;
  }
  if (path == NumericPath::kRational && !rational_feasible_g(g)) {
    throw std::invalid_argument(std::string(who) + ": rational path requires g <= " +
                                std::to_string(kRationalLimit));
  }
  return path;
}

void require_rational(const MomentInputs& in, const char* who) {
  if (!rational_feasible_g(g_of(in))) {
    throw std::invalid_argument(std::string(who) + ": exact arithmetic requires g <= " +
                                std::to_string(kRationalLimit));
  }
}

// Overlap classes r = 0 .. k-1 of E[X^2]; w(r) is the number of edges two
// k-sets sharing r vertices need in total.
std::int64_t w_of(const MomentInputs& in, std::int32_t r) {
  return 2 * beta_of(in) - static_cast<std::int64_t>(r) * (r - 1) / 2;
}

// C(k,r) C(n-k,k-r) / C(n,k) in logs; -inf when any factor vanishes.
double log_overlap_prefactor(const MomentInputs& in, std::int32_t r) {
  return log_binom_product(in.k, r) + log_binom_product(in.n - in.k, in.k - r) -
         log_binom_product(in.n, in.k);
}

double expected_log(const MomentInputs& in) {
  return log_binom_product(in.n, in.k) + log_falling_ratio(g_of(in), in.m, beta_of(in));
}

// ln E[X^2] by log-sum-exp over the overlap terms, so the value survives
// even when E[X^2] overflows a double.
double second_moment_log(const MomentInputs& in) {
  const std::int64_t g = g_of(in);
  std::vector<double> terms;
  const double le = expected_log(in);
  if (le != kNegInf) terms.push_back(le);
  for (std::int32_t r = 0; r < in.k; ++r) {
    const double lt = log_binom_product(in.n, in.k) + log_binom_product(in.k, r) +
                      log_binom_product(in.n - in.k, in.k - r) +
                      log_falling_ratio(g, in.m, w_of(in, r));
    if (lt != kNegInf) terms.push_back(lt);
  }
  if (terms.empty()) return kNegInf;
  const double peak = *std::max_element(terms.begin(), terms.end());
  double s = 0;
  for (const double t : terms) s += std::exp(t - peak);
  return peak + std::log(s);
}

}  // namespace

DerivedParams derived_params(const MomentInputs& in) {
  validate(in);
  DerivedParams out;
  out.g = g_of(in);
  out.beta = beta_of(in);
  out.rho = static_cast<double>(2 * in.m) /
            (static_cast<double>(in.n) * static_cast<double>(in.n - 1));
  const double ln_n = std::log(static_cast<double>(in.n));
  out.m0 = static_cast<double>(out.g) * std::exp(-2.0 * ln_n / (in.k - 1));
  if (in.m > 0 && in.m < out.g) {
    out.c = -(in.k - 1) * std::log(static_cast<double>(in.m) / static_cast<double>(out.g)) /
            (2.0 * ln_n);
  }
  out.k_outside_log_window = static_cast<double>(in.k) > 3.0 * ln_n;
  return out;
}

double binomial_log(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0 || b > a) return kNegInf;
  if (a <= kRationalLimit) {
    const std::int64_t bb = std::min(b, a - b);
    std::uint64_t c = 1;
    bool fits = true;
    for (std::int64_t i = 1; i <= bb; ++i) {
      const unsigned __int128 t =
          static_cast<unsigned __int128>(c) * static_cast<std::uint64_t>(a - bb + i) /
          static_cast<std::uint64_t>(i);
      if (t > (std::uint64_t{1} << 62)) {
        fits = false;
        break;
      }
      c = static_cast<std::uint64_t>(t);
    }
    if (fits) return std::log(static_cast<double>(c));
  }
  return std::lgamma(static_cast<double>(a) + 1) - std::lgamma(static_cast<double>(b) + 1) -
         std::lgamma(static_cast<double>(a - b) + 1);
}

bool rational_path_feasible(const MomentInputs& in) {
  validate(in);
  return rational_feasible_g(g_of(in));
}

mpq_class clique_prob_q(const MomentInputs& in) {
  validate(in);
  require_rational(in, "clique_prob_q");
  return falling_ratio_q(g_of(in), in.m, beta_of(in));
}

double clique_prob_exact(const MomentInputs& in, NumericPath path) {
  validate(in);
  if (resolve_path(in, path, "clique_prob_exact") == NumericPath::kRational) {
    return q_to_double(clique_prob_q(in));
  }
  const double lp = log_falling_ratio(g_of(in), in.m, beta_of(in));
  return lp == kNegInf ? 0.0 : std::exp(lp);
}

double clique_prob_stirling(const MomentInputs& in) {
  validate(in);
  const std::int64_t g = g_of(in);
  const std::int64_t beta = beta_of(in);
  if (in.m <= beta) {
    throw std::invalid_argument("clique_prob_stirling: requires m > beta = " +
                                std::to_string(beta));
  }
  const double ratio = static_cast<double>(in.m) / static_cast<double>(g);
  const double correction =
      1.0 + static_cast<double>(beta) * static_cast<double>(g - in.m) /
                (static_cast<double>(in.m - beta) * static_cast<double>(g));
  return std::exp(static_cast<double>(beta) * std::log(ratio)) * std::sqrt(correction);
}

mpq_class expected_cliques_q(const MomentInputs& in) {
  validate(in);
  require_rational(in, "expected_cliques_q");
  return mpq_class(binom_z(in.n, in.k)) * clique_prob_q(in);
}

double expected_cliques(const MomentInputs& in, NumericPath path) {
  validate(in);
  if (resolve_path(in, path, "expected_cliques") == NumericPath::kRational) {
    return q_to_double(expected_cliques_q(in));
  }
  const double le = expected_log(in);
  return le == kNegInf ? 0.0 : std::exp(le);
}

mpq_class second_moment_q(const MomentInputs& in) {
  validate(in);
  require_rational(in, "second_moment_q");
  const std::int64_t g = g_of(in);
  mpq_class total = expected_cliques_q(in);
  const mpq_class cnk(binom_z(in.n, in.k));
  for (std::int32_t r = 0; r < in.k; ++r) {
    const mpz_class pairs = binom_z(in.k, r) * binom_z(in.n - in.k, in.k - r);
    if (pairs == 0) continue;
    total += cnk * mpq_class(pairs) * falling_ratio_q(g, in.m, w_of(in, r));
  }
  return total;
}

double second_moment(const MomentInputs& in, NumericPath path) {
  validate(in);
  if (resolve_path(in, path, "second_moment") == NumericPath::kRational) {
    return q_to_double(second_moment_q(in));
  }
  const double lsm = second_moment_log(in);
  return lsm == kNegInf ? 0.0 : std::exp(lsm);
}

VarianceDecompositionQ variance_decomposition_q(const MomentInputs& in) {
  validate(in);
  require_rational(in, "variance_decomposition_q");
  if (in.m < beta_of(in)) {
    throw std::invalid_argument("variance_decomposition_q: E[X] = 0 at m < beta");
  }
  const std::int64_t g = g_of(in);
  const std::int64_t beta = beta_of(in);

  VarianceDecompositionQ out;
  out.ex = expected_cliques_q(in);
  out.ex2 = second_moment_q(in);
  out.var = out.ex2 - out.ex * out.ex;
  out.ratio = out.var / (out.ex * out.ex);

  const mpz_class cnk = binom_z(in.n, in.k);
  out.a_n = mpq_class(binom_z(in.n - in.k, in.k) + in.k * binom_z(in.n - in.k, in.k - 1)) /
            mpq_class(cnk);

  const mpq_class base = falling_ratio_q(g, in.m, beta);  // > 0 since m >= beta
  out.b_n = falling_ratio_q(g - beta, in.m - beta, beta) / base;

  out.c_n = 0;
  for (std::int32_t r = 2; r < in.k; ++r) {
    const mpz_class pairs = binom_z(in.k, r) * binom_z(in.n - in.k, in.k - r);
    if (pairs == 0) continue;
    out.c_n += mpq_class(pairs) / mpq_class(cnk) *
               (falling_ratio_q(g - beta, in.m - beta, w_of(in, r) - beta) / base);
  }
  return out;
}

VarianceDecomposition variance_decomposition(const MomentInputs& in, NumericPath path) {
  validate(in);
  const std::int64_t g = g_of(in);
  const std::int64_t beta = beta_of(in);
  if (in.m < beta) {
    throw std::invalid_argument("variance_decomposition: E[X] = 0 at m < beta");
  }

  VarianceDecomposition out;
  const NumericPath chosen = resolve_path(in, path, "variance_decomposition");

  if (chosen == NumericPath::kRational) {
    const auto q = variance_decomposition_q(in);
    out.ex = q_to_double(q.ex);
    out.ex2 = q_to_double(q.ex2);
    out.var = q_to_double(q.var);
    out.a_n = q_to_double(q.a_n);
    out.b_n = q_to_double(q.b_n);
    out.c_n = q_to_double(q.c_n);
    out.ratio = q_to_double(q.ratio);
    const mpq_class cnk(binom_z(in.n, in.k));
    for (std::int32_t r = 0; r < in.k; ++r) {
      const std::int64_t w = w_of(in, r);
      const mpq_class term = cnk *
                             mpq_class(binom_z(in.k, r) * binom_z(in.n - in.k, in.k - r)) *
                             falling_ratio_q(g, in.m, w);
      out.overlap_terms.push_back({r, w, q_to_double(term)});
    }
    return out;
  }

  out.ex = expected_cliques(in, NumericPath::kLogSpace);
  out.a_n = std::exp(log_binom_product(in.n - in.k, in.k) - log_binom_product(in.n, in.k)) +
            in.k * std::exp(log_binom_product(in.n - in.k, in.k - 1) -
                            log_binom_product(in.n, in.k));
  const double lbase = log_falling_ratio(g, in.m, beta);
  const double lb = log_falling_ratio(g - beta, in.m - beta, beta);
  out.b_n = lb == kNegInf ? 0.0 : std::exp(lb - lbase);
  out.c_n = 0;
  for (std::int32_t r = 2; r < in.k; ++r) {
    const double lt = log_overlap_prefactor(in, r) +
                      log_falling_ratio(g - beta, in.m - beta, w_of(in, r) - beta) - lbase;
    if (lt != kNegInf && !std::isnan(lt)) out.c_n += std::exp(lt);
  }

  // The decomposition identity is exact, so the ratio assembled from its
  // well-conditioned pieces is far more accurate than E[X^2] - E[X]^2 would
  // be once the moments are astronomically large.
  out.ratio = 1.0 / out.ex + out.a_n * out.b_n + out.c_n - 1.0;
  out.var = out.ratio * out.ex * out.ex;
  out.ex2 = out.var + out.ex * out.ex;

  for (std::int32_t r = 0; r < in.k; ++r) {
    const std::int64_t w = w_of(in, r);
    const double lt = log_binom_product(in.n, in.k) + log_binom_product(in.k, r) +
                      log_binom_product(in.n - in.k, in.k - r) +
                      log_falling_ratio(g, in.m, w);
    out.overlap_terms.push_back({r, w, lt == kNegInf ? 0.0 : std::exp(lt)});
  }
  return out;
}

CalibrationResult calibrate_m(std::int64_t n, std::int32_t k, double target) {
  const MomentInputs probe{n, k, 0};
  validate(probe);
  if (!(target > 0) || !std::isfinite(target)) {
    throw std::invalid_argument("calibrate_m: target must be positive and finite");
  }
  const std::int64_t g = n * (n - 1) / 2;
  const std::int64_t beta = static_cast<std::int64_t>(k) * (k - 1) / 2;
  const double log_cnk = log_binom_product(n, k);
  if (std::log(target) > log_cnk + 1e-12 * std::max(1.0, std::abs(log_cnk))) {
    throw std::invalid_argument("calibrate_m: target exceeds C(n,k), unreachable at any m");
  }

  const auto ex_at = [&](std::int64_t m) {
    return expected_cliques(MomentInputs{n, k, m});
  };

  // E[X](m) is nondecreasing in m (each added edge can only help), so the
  // smallest m with E[X] >= target is found by bisection on the predicate.
  std::int64_t lo = beta - 1;  // E = 0 < target
  std::int64_t hi = g;
  if (ex_at(hi) < target) {
    // target == C(n,k) up to rounding; the top of the range is the answer.
    hi = g;
  } else {
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (ex_at(mid) >= target) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }

  // Local fixup so the bracket certificate holds even if rounding nudged the
  // bisection by one.
  std::int64_t m_star = hi;
  while (m_star > beta && ex_at(m_star - 1) >= target) --m_star;
  while (m_star < g && ex_at(m_star) < target) ++m_star;

  CalibrationResult out;
  out.m_star = m_star;
  out.ex_at_m = ex_at(m_star);
  out.ex_below = m_star > 0 ? ex_at(m_star - 1) : 0.0;
  out.m0 = derived_params(MomentInputs{n, k, 0}).m0;
  out.epsilon = static_cast<double>(m_star) - out.m0;
  return out;
}

SurvivalProbability survival_probability(std::int64_t n, std::int32_t k, std::int64_t m) {
  const MomentInputs in{n, k, m};
  validate(in);
  const std::int64_t g = g_of(in);
  const std::int64_t beta = beta_of(in);
  if (m < beta) {
    throw std::invalid_argument("survival_probability: requires m >= beta = " +
                                std::to_string(beta));
  }
  const std::int64_t j = k - 2;

  double raw = 0;
  if (rational_feasible_g(g)) {
    const mpq_class p1 = falling_ratio_q(g - beta, m - beta, j);
    const mpq_class p2 = falling_ratio_q(g - beta, m - beta, 2 * j);
    raw = q_to_double(2 * p1 - p2);
  } else {
    const auto prod = [&](std::int64_t count) {
      if (m - beta < count) return 0.0;
      double p = 1;
      for (std::int64_t i = 0; i < count; ++i) {
        p *= static_cast<double>(m - beta - i) / static_cast<double>(g - beta - i);
      }
      return p;
    };
    raw = 2 * prod(j) - prod(2 * j);
  }

  SurvivalProbability out;
  out.raw = raw;
  out.value = std::clamp(raw, 0.0, 1.0);
  out.clamped = raw < 0.0 || raw > 1.0;
  return out;
}

double pxpos_lower_bound(const MomentInputs& in, NumericPath path) {
  validate(in);
  if (in.m < beta_of(in)) return 0.0;
  if (resolve_path(in, path, "pxpos_lower_bound") == NumericPath::kRational) {
    const mpq_class ex = expected_cliques_q(in);
    if (ex == 0) return 0.0;
    return q_to_double(ex * ex / second_moment_q(in));
  }
  const double le = expected_log(in);
  if (le == kNegInf) return 0.0;
  return std::exp(2 * le - second_moment_log(in));
}

std::string moment_report_json(const MomentInputs& in) {
  validate(in);
  const DerivedParams d = derived_params(in);
  nlohmann::ordered_json j;
  j["n"] = in.n;
  j["k"] = in.k;
  j["m"] = in.m;
  j["g"] = d.g;
  j["beta"] = d.beta;
  j["rho"] = d.rho;
  j["m0"] = d.m0;
  if (d.c) {
    j["c"] = *d.c;
  } else {
    j["c"] = nullptr;
  }
  if (in.m >= d.beta) {
    const VarianceDecomposition v = variance_decomposition(in);
    j["ex"] = v.ex;
    j["ex2"] = v.ex2;
    j["var"] = v.var;
    j["a_n"] = v.a_n;
    j["b_n"] = v.b_n;
    j["c_n"] = v.c_n;
    j["ratio"] = v.ratio;
  } else {
    j["ex"] = 0.0;
    j["ex2"] = 0.0;
    j["var"] = 0.0;
    j["a_n"] = std::exp(log_binom_product(in.n - in.k, in.k) - log_binom_product(in.n, in.k)) +
               in.k * std::exp(log_binom_product(in.n - in.k, in.k - 1) -
                               log_binom_product(in.n, in.k));
    j["b_n"] = nullptr;
    j["c_n"] = nullptr;
    j["ratio"] = nullptr;
  }
  return j.dump();
}

}  // namespace cliquelab::moments
