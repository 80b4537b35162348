#pragma once

#include <utility>
#include <vector>

#include "medstat/contingency.hpp"
#include "medstat/special_fn.hpp"

namespace medstat {

enum class Alternative { less };

struct ExactTestResult {
  Probability p_value;
  double odds_ratio_cmle = 0;  // +infinity when cell (1,1) is at its maximum
  Alternative alternative = Alternative::less;
};

// Feasible range [lo, hi] of the (1,1) cell with all margins of t held
// fixed.
std::pair<long long, long long> hypergeom_support(const Table2x2& t);

// Fisher noncentral hypergeometric pmf over the support of t at odds ratio
// psi > 0, indexed from the low end of the support. psi = 1 recovers the
// central hypergeometric distribution.
std::vector<double> noncentral_hypergeom_pmf(const Table2x2& t, double psi);

// Conditional maximum-likelihood odds ratio: the psi maximizing the
// noncentral hypergeometric likelihood of the observed (1,1) cell given
// the margins. 0 at the lower support boundary, +infinity at the upper.
double cond_mle_odds_ratio(const Table2x2& t);

// One-sided exact test of the (1,1) cell against the alternative that the
// true odds ratio is less than 1: p = P(K <= a) under the central
// hypergeometric distribution with the margins of t fixed.
ExactTestResult fisher_less(const Table2x2& t);

}  // namespace medstat
