#include "medstat/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace medstat {

namespace {

void require_nondegenerate(const Table2x2& t) {
  if (t.row1_total() == 0 || t.row2_total() == 0 || t.col1_total() == 0 ||
      t.col2_total() == 0) {
    throw std::domain_error("degenerate 2x2 table: zero row or column margin");
  }
}

// log P(K = k) for the central hypergeometric distribution, up to the
// normalizing constant shared across the support. Margins: population N,
// success count m = col1, draw count n = row1.
double log_weight(long long k, const Table2x2& t) {
  const long long pop = t.total();
  const long long succ = t.col1_total();
  const long long draws = t.row1_total();
  return log_choose(succ, k) + log_choose(pop - succ, draws - k);
}

// Conditional log-likelihood of the observed cell a at log odds ratio
// theta, normalized by log-sum-exp over the support.
double cond_log_lik(double theta, const Table2x2& t, long long lo,
                    long long hi) {
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (long long k = lo; k <= hi; ++k) {
    const double v = log_weight(k, t) + theta * static_cast<double>(k);
    terms.push_back(v);
    max_term = std::max(max_term, v);
  }
  double sum = 0;
  for (double v : terms) sum += std::exp(v - max_term);
  const double log_norm = max_term + std::log(sum);
  return log_weight(t.a, t) + theta * static_cast<double>(t.a) - log_norm;
}

}  // namespace

std::pair<long long, long long> hypergeom_support(const Table2x2& t) {
  const long long lo = std::max(0LL, t.row1_total() - t.col2_total());
  const long long hi = std::min(t.row1_total(), t.col1_total());
  return {lo, hi};
}

std::vector<double> noncentral_hypergeom_pmf(const Table2x2& t, double psi) {
  require_nondegenerate(t);
  if (!(psi > 0) || !std::isfinite(psi)) {
    throw std::domain_error("odds ratio must be positive and finite");
  }
  const auto [lo, hi] = hypergeom_support(t);
  const double theta = std::log(psi);
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(hi - lo + 1));
  double max_term = -std::numeric_limits<double>::infinity();
  for (long long k = lo; k <= hi; ++k) {
    const double v = log_weight(k, t) + theta * static_cast<double>(k);
    logs.push_back(v);
    max_term = std::max(max_term, v);
  }
  double sum = 0;
  for (double v : logs) sum += std::exp(v - max_term);
  std::vector<double> pmf(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    pmf[i] = std::exp(logs[i] - max_term) / sum;
  }
  return pmf;
}

double cond_mle_odds_ratio(const Table2x2& t) {
  require_nondegenerate(t);
  const auto [lo, hi] = hypergeom_support(t);
  if (t.a == lo && t.a == hi) {
    throw std::domain_error(
        "odds ratio not identifiable: table is fixed by its margins");
  }
  if (t.a == lo) return 0.0;
  if (t.a == hi) return std::numeric_limits<double>::infinity();

  // Golden-section maximization of the conditional log-likelihood over
  // theta = log psi. The likelihood is strictly log-concave in theta, so
  // the interior maximum found here is global.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double left = -30.0;
  double right = 30.0;
  double x1 = right - gr * (right - left);
  double x2 = left + gr * (right - left);
  double f1 = cond_log_lik(x1, t, lo, hi);
  double f2 = cond_log_lik(x2, t, lo, hi);
  while (right - left > 1e-10) {
    if (f1 < f2) {
      left = x1;
      x1 = x2;
      f1 = f2;
      x2 = left + gr * (right - left);
      f2 = cond_log_lik(x2, t, lo, hi);
    } else {
      right = x2;
      x2 = x1;
      f2 = f1;
      x1 = right - gr * (right - left);
      f1 = cond_log_lik(x1, t, lo, hi);
    }
  }
  return std::exp((left + right) / 2.0);
}

ExactTestResult fisher_less(const Table2x2& t) {
  require_nondegenerate(t);
  const auto [lo, hi] = hypergeom_support(t);
  const long long pop = t.total();
  const long long succ = t.col1_total();
  const long long draws = t.row1_total();
  double p = 0;
  for (long long k = lo; k <= t.a; ++k) {
    p += hypergeom_pmf(k, pop, succ, draws).value();
  }
  p = std::min(p, 1.0);
  ExactTestResult r;
  r.p_value = Probability(p);
  r.alternative = Alternative::less;
  if (t.a == lo && t.a == hi) {
    r.odds_ratio_cmle = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.odds_ratio_cmle = cond_mle_odds_ratio(t);
  }
  return r;
}

}  // namespace medstat
