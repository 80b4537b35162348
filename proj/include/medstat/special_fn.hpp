#pragma once

namespace medstat {

// A probability value, kept in [0, 1]. Inputs within 1e-12 of the interval
// are clamped onto it; anything further out is a real violation and is
// rejected with std::domain_error.
class Probability {
 public:
  Probability() = default;
  explicit Probability(double v);
  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

// ln Gamma(x) for x > 0. Lanczos approximation (g = 7, 9 coefficients),
// reflection formula below 0.5.
double log_gamma(double x);

// Regularized incomplete gamma ratios P(s, x) and Q(s, x) = 1 - P(s, x),
// s > 0, x >= 0. Series expansion for x < s + 1, continued fraction
// otherwise.
double reg_lower_gamma(double s, double x);
double reg_upper_gamma(double s, double x);

// Upper-tail and lower-tail probabilities of the chi-squared distribution
// with df degrees of freedom: sf(x) = P(X >= x) = Q(df/2, x/2).
Probability chi2_sf(double x, double df);
Probability chi2_cdf(double x, double df);

// ln C(n, k), 0 <= k <= n. Exact multiplicative evaluation for n <= 50,
// log_gamma for larger arguments.
double log_choose(long long n, long long k);

// P(K = k) for the hypergeometric distribution: k successes among `draws`
// draws without replacement from a population of size `pop` containing
// `succ` successes. Zero outside the feasible range.
Probability hypergeom_pmf(long long k, long long pop, long long succ,
                          long long draws);

// P(X >= k) for X ~ Poisson(lambda).
Probability poisson_tail(long long k, double lambda);

}  // namespace medstat
