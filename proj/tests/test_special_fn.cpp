#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "medstat/special_fn.hpp"

using namespace medstat;

namespace {

// References computed with 50-digit arithmetic, frozen.
struct LogGammaRef {
  double x;
  double value;
};
const LogGammaRef kLogGammaRefs[] = {
    {0.5, 0.57236494292470008707},
    {1.5, -0.12078223763524522235},
    {3.25, 0.93580193110872535826},
    {5.0, 3.1780538303479456196},
    {10.0, 12.801827480081469611},
    {100.25, 360.28455963776423497},
    {1000.0, 5905.2204232091812118},
    {1e6, 12815504.569147611660},
};

struct Chi2Ref {
  double x;
  double df;
  double sf;
};
const Chi2Ref kChi2Refs[] = {
    {2.142857, 1.0, 0.14323492085988164},
    {21.42857142857143, 1.0, 3.6725751142656269e-06},
    {0.5, 3.0, 0.91889141165467586},
    {10.0, 4.0, 0.040427681994512803},
    {5.6678, 1.0, 0.017279113037716590},
    {100.0, 50.0, 3.4549313829848639e-05},
};

double exact_hypergeom(long long k, long long pop, long long succ,
                       long long draws) {
  // Enumerates every subset of size `draws` from a population of `pop`
  // items whose first `succ` are the successes.
  long long match = 0;
  long long total = 0;
  const std::uint32_t mask_succ = (1u << succ) - 1u;
  for (std::uint32_t m = 0; m < (1u << pop); ++m) {
    if (std::popcount(m) != draws) continue;
    ++total;
    if (std::popcount(m & mask_succ) == k) ++match;
  }
  return static_cast<double>(match) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("probability clamps its tolerance band and rejects beyond it") {
  CHECK(Probability(0.0).value() == 0.0);
  CHECK(Probability(1.0).value() == 1.0);
  CHECK(Probability(-1e-13).value() == 0.0);
  CHECK(Probability(1.0 + 1e-13).value() == 1.0);
  CHECK(Probability(0.25).value() == 0.25);
  CHECK_THROWS_AS(Probability(-1e-9), std::domain_error);
  CHECK_THROWS_AS(Probability(1.0 + 1e-9), std::domain_error);
  CHECK_THROWS_AS(Probability(std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
}

TEST_CASE("log_gamma matches high-precision references") {
  for (const auto& ref : kLogGammaRefs) {
    const double tol = std::max(1e-12, 5e-15 * std::abs(ref.value));
    CHECK(std::abs(log_gamma(ref.x) - ref.value) <= tol);
  }
  CHECK(std::abs(log_gamma(1.0)) <= 1e-12);
  CHECK(std::abs(log_gamma(2.0)) <= 1e-12);
  CHECK(std::abs(log_gamma(10.0) - std::log(362880.0)) <= 1e-12);
}

TEST_CASE("log_gamma satisfies the recurrence ln G(x+1) = ln G(x) + ln x") {
  for (double x = 0.5; x <= 100.0; x += 0.37) {
    const double lhs = log_gamma(x + 1.0);
    const double rhs = log_gamma(x) + std::log(x);
    CHECK(std::abs(lhs - rhs) <=
          std::max(1e-12, 1e-14 * std::abs(lhs)));
  }
}

TEST_CASE("log_gamma rejects non-positive and non-finite arguments") {
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-2.5), std::domain_error);
  CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::infinity()),
                  std::domain_error);
  CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::quiet_NaN()),
                  std::domain_error);
}

TEST_CASE("chi2_sf matches references to 1e-10 relative") {
  for (const auto& ref : kChi2Refs) {
    const double got = chi2_sf(ref.x, ref.df).value();
    CHECK(std::abs(got - ref.sf) <= 1e-10 * ref.sf);
  }
  CHECK(chi2_sf(0.0, 1.0).value() == 1.0);
}

TEST_CASE("chi2_sf and chi2_cdf are complementary and sf is monotone") {
  for (double df : {1.0, 2.0, 3.5, 10.0, 50.0}) {
    double prev = 1.0;
    for (double x = 0.0; x <= 80.0; x += 0.83) {
      const double sf = chi2_sf(x, df).value();
      const double cdf = chi2_cdf(x, df).value();
      CHECK(std::abs(sf + cdf - 1.0) <= 1e-10);
      CHECK(sf <= prev + 1e-15);
      prev = sf;
    }
  }
}

TEST_CASE("chi2_sf rejects bad arguments") {
  CHECK_THROWS_AS(chi2_sf(-0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(chi2_sf(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(chi2_sf(1.0, -2.0), std::domain_error);
}

TEST_CASE("log_choose agrees with exact binomial coefficients") {
  CHECK(log_choose(0, 0) == 0.0);
  CHECK(log_choose(17, 0) == 0.0);
  CHECK(std::abs(log_choose(5, 2) - std::log(10.0)) <= 1e-13);
  CHECK(std::abs(log_choose(52, 5) - std::log(2598960.0)) <= 1e-12);

  // Exact Pascal triangle for small n.
  std::vector<std::vector<double>> pascal(35);
  for (std::size_t n = 0; n < pascal.size(); ++n) {
    pascal[n].assign(n + 1, 1.0);
    for (std::size_t k = 1; k < n; ++k) {
      pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
    }
  }
  for (std::size_t n = 0; n < pascal.size(); ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      const double got = std::exp(log_choose(static_cast<long long>(n),
                                             static_cast<long long>(k)));
      CHECK(std::abs(got - pascal[n][k]) <= 1e-12 * pascal[n][k]);
    }
  }
}

TEST_CASE("log_choose stays accurate up to n = 1000") {
  // Long-double Pascal rows: ~1e-17 relative accumulation, far inside
  // the 1e-9 requirement.
  std::vector<long double> row{1.0L};
  for (int n = 1; n <= 1000; ++n) {
    std::vector<long double> next(static_cast<std::size_t>(n) + 1, 1.0L);
    for (int k = 1; k < n; ++k) {
      next[static_cast<std::size_t>(k)] =
          row[static_cast<std::size_t>(k - 1)] +
          row[static_cast<std::size_t>(k)];
    }
    row = std::move(next);
    if (n == 60 || n == 300 || n == 1000) {
      for (int k : {1, n / 4, n / 2}) {
        const double ref =
            static_cast<double>(row[static_cast<std::size_t>(k)]);
        const double got = std::exp(log_choose(n, k));
        CHECK(std::abs(got - ref) <= 1e-9 * ref);
      }
    }
  }
}

TEST_CASE("log_choose ratio identity holds for large n") {
  for (long long n : {200LL, 997LL}) {
    for (long long k = 1; k <= n; k += 37) {
      const double lhs = log_choose(n, k) - log_choose(n, k - 1);
      const double rhs = std::log(static_cast<double>(n - k + 1) /
                                  static_cast<double>(k));
      CHECK(std::abs(lhs - rhs) <= 1e-11);
    }
  }
  CHECK_THROWS_AS(log_choose(3, 4), std::domain_error);
  CHECK_THROWS_AS(log_choose(-1, 0), std::domain_error);
  CHECK_THROWS_AS(log_choose(3, -1), std::domain_error);
}

TEST_CASE("hypergeom_pmf normalizes and matches enumeration") {
  CHECK(std::abs(hypergeom_pmf(2, 4, 2, 2).value() - 1.0 / 6.0) <= 1e-15);
  CHECK(std::abs(hypergeom_pmf(0, 4, 2, 2).value() - 1.0 / 6.0) <= 1e-15);

  for (long long pop = 2; pop <= 12; ++pop) {
    for (long long succ = 0; succ <= pop; succ += 2) {
      for (long long draws = 1; draws <= pop; draws += 3) {
        double sum = 0;
        for (long long k = 0; k <= draws; ++k) {
          const double p = hypergeom_pmf(k, pop, succ, draws).value();
          sum += p;
          CHECK(std::abs(p - exact_hypergeom(k, pop, succ, draws)) <= 1e-12);
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("hypergeom_pmf is zero outside the support and validates margins") {
  CHECK(hypergeom_pmf(3, 4, 2, 2).value() == 0.0);
  CHECK(hypergeom_pmf(-1, 4, 2, 2).value() == 0.0);
  // draws + succ - pop = 3, so k = 2 is infeasible
  CHECK(hypergeom_pmf(2, 5, 4, 4).value() == 0.0);
  CHECK_THROWS_AS(hypergeom_pmf(0, 4, 5, 2), std::domain_error);
  CHECK_THROWS_AS(hypergeom_pmf(0, 4, 2, 5), std::domain_error);
  CHECK_THROWS_AS(hypergeom_pmf(0, -1, 0, 0), std::domain_error);
}

TEST_CASE("poisson_tail matches direct summation") {
  CHECK(poisson_tail(0, 2.5).value() == 1.0);
  CHECK(std::abs(poisson_tail(1, 1.0).value() - (1.0 - std::exp(-1.0))) <=
        1e-14);

  for (double lambda : {0.3, 1.0, 4.7, 12.0, 30.0}) {
    for (long long k = 0; k <= 100; k += 7) {
      double direct = 0;
      double term = std::exp(-lambda);
      for (long long j = 0; j < k; ++j) {
        direct += term;
        term *= lambda / static_cast<double>(j + 1);
      }
      const double expect = std::max(0.0, 1.0 - direct);
      CHECK(std::abs(poisson_tail(k, lambda).value() - expect) <= 1e-12);
    }
  }
}

TEST_CASE("poisson_tail is monotone in k and stable across the large-lambda "
          "branch") {
  const double rate = 1000.0 / 365.0;
  CHECK(std::abs(poisson_tail(8, rate).value() - 0.0071930408807796045) <=
        1e-12 * 0.0071930408807796045);
  CHECK(poisson_tail(8, rate).value() < 0.01);

  for (long long k = 0; k < 20; ++k) {
    CHECK(poisson_tail(k, rate).value() >=
          poisson_tail(k + 1, rate).value());
  }

  const double lo = poisson_tail(650, 699.9999).value();
  const double hi = poisson_tail(650, 700.0001).value();
  CHECK(std::abs(lo - hi) <= 1e-5);

  CHECK_THROWS_AS(poisson_tail(1, 0.0), std::domain_error);
  CHECK_THROWS_AS(poisson_tail(1, -3.0), std::domain_error);
  CHECK_THROWS_AS(poisson_tail(1, std::numeric_limits<double>::infinity()),
                  std::domain_error);
  CHECK(poisson_tail(-1, 1.0).value() == 1.0);
}
