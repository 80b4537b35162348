#include "medstat/contingency.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace medstat {

namespace {

void require_positive_margins(const Table2x2& t) {
  if (t.row1_total() <= 0 || t.row2_total() <= 0 || t.col1_total() <= 0 ||
      t.col2_total() <= 0)
    throw std::domain_error("degenerate 2x2 table: zero row or column margin");
}

}  // namespace

Table2x2::Table2x2(long long a_, long long b_, long long c_, long long d_)
    : a(a_), b(b_), c(c_), d(d_) {
  if (a < 0 || b < 0 || c < 0 || d < 0)
    throw std::domain_error("2x2 table cells must be non-negative");
  if (total() <= 0) throw std::domain_error("2x2 table must have N > 0");
}

ExpectedCounts expected_counts(const Table2x2& t) {
  require_positive_margins(t);
  double n = static_cast<double>(t.total());
  ExpectedCounts e;
  e.e11 = static_cast<double>(t.row1_total()) * t.col1_total() / n;
  e.e12 = static_cast<double>(t.row1_total()) * t.col2_total() / n;
  e.e21 = static_cast<double>(t.row2_total()) * t.col1_total() / n;
  e.e22 = static_cast<double>(t.row2_total()) * t.col2_total() / n;
  return e;
}

double pearson_chi2_stat(const Table2x2& t) {
  ExpectedCounts e = expected_counts(t);
  const double obs[4] = {static_cast<double>(t.a), static_cast<double>(t.b),
                         static_cast<double>(t.c), static_cast<double>(t.d)};
  const double exp[4] = {e.e11, e.e12, e.e21, e.e22};
  double g = 0.0;
  for (int i = 0; i < 4; ++i) {
    double diff = obs[i] - exp[i];
    g += diff * diff / exp[i];
  }
  return g;
}

double deviance_stat(const Table2x2& t) {
  ExpectedCounts e = expected_counts(t);
  const double obs[4] = {static_cast<double>(t.a), static_cast<double>(t.b),
                         static_cast<double>(t.c), static_cast<double>(t.d)};
  const double exp[4] = {e.e11, e.e12, e.e21, e.e22};
  double dev = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (obs[i] > 0.0) dev += obs[i] * std::log(obs[i] / exp[i]);
  }
  return 2.0 * dev;
}

TestResult chi2_test(const Table2x2& t, bool continuity_correction) {
  TestResult r;
  r.continuity_corrected = continuity_correction;
  r.df = 1.0;
  if (!continuity_correction) {
    r.statistic = pearson_chi2_stat(t);
  } else {
    ExpectedCounts e = expected_counts(t);
    const double obs[4] = {static_cast<double>(t.a), static_cast<double>(t.b),
                           static_cast<double>(t.c), static_cast<double>(t.d)};
    const double exp[4] = {e.e11, e.e12, e.e21, e.e22};
    double g = 0.0;
    for (int i = 0; i < 4; ++i) {
      double diff = std::fabs(obs[i] - exp[i]) - 0.5;
      if (diff < 0.0) diff = 0.0;
      g += diff * diff / exp[i];
    }
    r.statistic = g;
  }
  r.p_value = chi2_sf(r.statistic, r.df);
  return r;
}

RiskSummary risk_summary(const Table2x2& t) {
  long long n1 = t.col1_total();
  long long n2 = t.col2_total();
  if (n1 <= 0 || n2 <= 0)
    throw std::domain_error("risk_summary requires both column totals > 0");
  RiskSummary s;
  s.risk1 = Probability(static_cast<double>(t.a) / static_cast<double>(n1));
  s.risk2 = Probability(static_cast<double>(t.b) / static_cast<double>(n2));
  // integer cross-products: exact whenever the mathematical ratio and
  // difference are representable (for example RR of exactly 2 or 11)
  double num = static_cast<double>(t.a) * static_cast<double>(n2);
  double den = static_cast<double>(t.b) * static_cast<double>(n1);
  if (t.b > 0) {
    s.relative_risk = num / den;
  } else if (t.a > 0) {
    s.relative_risk = std::numeric_limits<double>::infinity();
  } else {
    s.relative_risk = std::numeric_limits<double>::quiet_NaN();
  }
  s.absolute_risk_difference =
      (num - den) / (static_cast<double>(n1) * static_cast<double>(n2));
  return s;
}

}  // namespace medstat
