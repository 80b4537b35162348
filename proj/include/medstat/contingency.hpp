#pragma once

#include "medstat/special_fn.hpp"

namespace medstat {

// 2x2 cross-classification of counts. Rows are the outcome category
// (adverse / normal), columns the condition being compared (for example
// nurse A / nurse B, or before / after):
//
//             condition 1   condition 2
//   adverse        a             b
//   normal         c             d
struct Table2x2 {
  long long a = 0;
  long long b = 0;
  long long c = 0;
  long long d = 0;

  Table2x2(long long a_, long long b_, long long c_, long long d_);

  long long row1_total() const { return a + b; }
  long long row2_total() const { return c + d; }
  long long col1_total() const { return a + c; }
  long long col2_total() const { return b + d; }
  long long total() const { return a + b + c + d; }
};

// Expected cell counts under independence: e_ij = row_i * col_j / N.
struct ExpectedCounts {
  double e11 = 0, e12 = 0, e21 = 0, e22 = 0;
};

struct TestResult {
  double statistic = 0;
  double df = 0;
  Probability p_value;
  bool continuity_corrected = false;
};

// Per-column adverse proportions and the two effect-size measures built
// from them. relative_risk is +infinity when risk2 = 0 with risk1 > 0, and
// NaN when both risks are zero (0/0, undefined).
struct RiskSummary {
  Probability risk1;
  Probability risk2;
  double relative_risk = 0;
  double absolute_risk_difference = 0;
};

// Throws std::domain_error if any row or column margin is zero.
ExpectedCounts expected_counts(const Table2x2& t);

// Pearson statistic: sum over cells of (O - E)^2 / E.
double pearson_chi2_stat(const Table2x2& t);

// Deviance statistic: 2 * sum of O * ln(O / E), with 0 * ln(0) = 0.
double deviance_stat(const Table2x2& t);

// Asymptotic chi-squared test on 1 df. With continuity_correction set,
// |O - E| is replaced by max(0, |O - E| - 0.5) (Yates).
TestResult chi2_test(const Table2x2& t, bool continuity_correction = false);

// Requires both column totals > 0.
RiskSummary risk_summary(const Table2x2& t);

}  // namespace medstat
