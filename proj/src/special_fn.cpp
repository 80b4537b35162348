#include "medstat/special_fn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace medstat {

namespace {

constexpr double kProbabilitySlack = 1e-12;

// Lanczos coefficients for g = 7.
constexpr double kLanczos[9] = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2

double log_gamma_lanczos(double x) {
  // valid for x >= 0.5
  double z = x - 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
  double t = z + 7.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

// P(s, x) by series, for x < s + 1.
double lower_gamma_series(double s, double x) {
  double ap = s;
  double del = 1.0 / s;
  double sum = del;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - log_gamma(s));
}

// Q(s, x) by modified Lentz continued fraction, for x >= s + 1.
double upper_gamma_cf(double s, double x) {
  constexpr double kFpMin = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    double an = -static_cast<double>(i) * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= 1e-16) break;
  }
  return std::exp(-x + s * std::log(x) - log_gamma(s)) * h;
}

}  // namespace

Probability::Probability(double v) {
  if (!(v >= -kProbabilitySlack && v <= 1.0 + kProbabilitySlack))
    throw std::domain_error("probability out of range: " + std::to_string(v));
  value_ = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("log_gamma requires finite x > 0");
  if (x >= 0.5) return log_gamma_lanczos(x);
  // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
  return std::log(M_PI / std::sin(M_PI * x)) - log_gamma_lanczos(1.0 - x);
}

double reg_lower_gamma(double s, double x) {
  if (!(s > 0.0) || !(x >= 0.0) || !std::isfinite(s) || !std::isfinite(x))
    throw std::domain_error("reg_lower_gamma requires s > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < s + 1.0) return lower_gamma_series(s, x);
  return 1.0 - upper_gamma_cf(s, x);
}

double reg_upper_gamma(double s, double x) {
  if (!(s > 0.0) || !(x >= 0.0) || !std::isfinite(s) || !std::isfinite(x))
    throw std::domain_error("reg_upper_gamma requires s > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - lower_gamma_series(s, x);
  return upper_gamma_cf(s, x);
}

Probability chi2_sf(double x, double df) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::domain_error("chi2_sf requires x >= 0");
  if (!(df > 0.0) || !std::isfinite(df))
    throw std::domain_error("chi2_sf requires df > 0");
  return Probability(reg_upper_gamma(df / 2.0, x / 2.0));
}

Probability chi2_cdf(double x, double df) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw std::domain_error("chi2_cdf requires x >= 0");
  if (!(df > 0.0) || !std::isfinite(df))
    throw std::domain_error("chi2_cdf requires df > 0");
  return Probability(reg_lower_gamma(df / 2.0, x / 2.0));
}

double log_choose(long long n, long long k) {
  if (n < 0 || k < 0 || k > n)
    throw std::domain_error("log_choose requires 0 <= k <= n");
  if (k > n - k) k = n - k;
  if (k == 0) return 0.0;
  if (n <= 50) {
    // every intermediate value is itself a binomial coefficient, and all
    // binomials with n <= 50 fit a double exactly
    double c = 1.0;
    for (long long i = 1; i <= k; ++i) {
      c *= static_cast<double>(n - k + i);
      c /= static_cast<double>(i);
    }
    return std::log(c);
  }
  return log_gamma(static_cast<double>(n) + 1.0) -
         log_gamma(static_cast<double>(k) + 1.0) -
         log_gamma(static_cast<double>(n - k) + 1.0);
}

Probability hypergeom_pmf(long long k, long long pop, long long succ,
                          long long draws) {
  if (pop < 0 || succ < 0 || succ > pop || draws < 0 || draws > pop)
    throw std::domain_error("hypergeom_pmf: inconsistent margins");
  long long lo = draws + succ - pop;
  if (lo < 0) lo = 0;
  long long hi = draws < succ ? draws : succ;
  if (k < lo || k > hi) return Probability(0.0);
  double lp = log_choose(succ, k) + log_choose(pop - succ, draws - k) -
              log_choose(pop, draws);
  return Probability(std::exp(lp));
}

Probability poisson_tail(long long k, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::domain_error("poisson_tail requires finite lambda > 0");
  if (k <= 0) return Probability(1.0);
  if (static_cast<double>(k) <= lambda && lambda < 700.0) {
    // complement of the lower tail; exp(-lambda) is representable here and
    // the complement is >= ~0.5, so no damaging cancellation
    double term = std::exp(-lambda);
    double cum = term;
    for (long long j = 1; j < k; ++j) {
      term *= lambda / static_cast<double>(j);
      cum += term;
    }
    return Probability(1.0 - cum);
  }
  if (static_cast<double>(k) <= lambda) {
    // lambda too large for exp(-lambda); same sum in log space
    double lmax = -lambda + static_cast<double>(k - 1) * std::log(lambda) -
                  log_gamma(static_cast<double>(k));
    double s = 0.0;
    for (long long j = 0; j < k; ++j) {
      double lj = -lambda + static_cast<double>(j) * std::log(lambda) -
                  log_gamma(static_cast<double>(j) + 1.0);
      s += std::exp(lj - lmax);
    }
    return Probability(1.0 - std::exp(lmax + std::log(s)));
  }
  // k > lambda: sum the upper tail directly from its largest term
  double lk = -lambda + static_cast<double>(k) * std::log(lambda) -
              log_gamma(static_cast<double>(k) + 1.0);
  double term = 1.0;
  double s = 1.0;
  for (long long j = k + 1;; ++j) {
    term *= lambda / static_cast<double>(j);
    s += term;
    if (term < s * 1e-17) break;
  }
  return Probability(std::exp(lk + std::log(s)));
}

}  // namespace medstat
