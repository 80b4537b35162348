#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "medstat/scenarios.hpp"

using namespace medstat;

namespace {

const BiasScenario kReviewScenario{Probability(0.10), Probability(0.15),
                                   Probability(0.05)};

FrequencyDataset shift_data(bool biased) {
  const long long deaths_unbiased[4] = {4, 2, 3, 7};
  const long long deaths_biased[4] = {3, 1, 4, 8};
  const long long* deaths = biased ? deaths_biased : deaths_unbiased;
  std::vector<FrequencyRow> rows = {
      {{"no", "no"}, 28.0, deaths[0]},
      {{"no", "yes"}, 2.0, deaths[1]},
      {{"yes", "no"}, 7.0, deaths[2]},
      {{"yes", "yes"}, 8.0, deaths[3]},
  };
  return FrequencyDataset({"nurse", "morning"}, rows);
}

}  // namespace

TEST_CASE("classification splits deaths per the scenario rates") {
  const auto [unbiased, biased] =
      classify_suspicious(100, 200, kReviewScenario);
  CHECK(unbiased.a == 10);
  CHECK(unbiased.b == 20);
  CHECK(unbiased.c == 90);
  CHECK(unbiased.d == 180);
  CHECK(biased.a == 5);
  CHECK(biased.b == 30);
  CHECK(biased.c == 95);
  CHECK(biased.d == 170);
}

TEST_CASE("equal rates make the two tables identical") {
  const BiasScenario flat{Probability(0.12), Probability(0.12),
                          Probability(0.12)};
  const auto [unbiased, biased] = classify_suspicious(83, 129, flat);
  CHECK(unbiased.a == biased.a);
  CHECK(unbiased.b == biased.b);
  CHECK(unbiased.c == biased.c);
  CHECK(unbiased.d == biased.d);
}

TEST_CASE("each column conserves its period's deaths") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long long> deaths(1, 500);
  std::uniform_real_distribution<double> rate(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    const long long before = deaths(rng);
    const long long after = deaths(rng);
    const BiasScenario s{Probability(rate(rng)), Probability(rate(rng)),
                         Probability(rate(rng))};
    const auto [unbiased, biased] = classify_suspicious(before, after, s);
    for (const Table2x2* t : {&unbiased, &biased}) {
      CHECK(t->a + t->c == before);
      CHECK(t->b + t->d == after);
      CHECK(t->a >= 0);
      CHECK(t->b >= 0);
    }
  }
}

TEST_CASE("expected counts round half to even") {
  const BiasScenario half{Probability(0.5), Probability(0.5),
                          Probability(0.5)};
  const auto [unbiased, biased] = classify_suspicious(5, 7, half);
  CHECK(unbiased.a == 2);  // 2.5 rounds down to the even neighbour
  CHECK(unbiased.b == 4);  // 3.5 rounds up to the even neighbour
  CHECK(biased.a == 2);
  CHECK(biased.b == 4);
}

TEST_CASE("negative death counts are rejected") {
  CHECK_THROWS_AS(classify_suspicious(-1, 10, kReviewScenario),
                  std::invalid_argument);
  CHECK_THROWS_AS(classify_suspicious(10, -1, kReviewScenario),
                  std::invalid_argument);
}

TEST_CASE("review bias scenario reproduces the worked comparison") {
  const Example1Report report = evaluate_example1(100, 200, kReviewScenario);

  CHECK(report.unbiased.table.a == 10);
  CHECK(report.unbiased.table.b == 20);
  CHECK(std::abs(report.unbiased.test.p_value.value() -
                 0.5875615565392872) <= 1e-9);
  CHECK(std::abs(report.unbiased.test.odds_ratio_cmle - 1.0) <= 1e-6);
  CHECK(report.unbiased.risk_ratio == 2.0);

  CHECK(report.biased.table.a == 5);
  CHECK(report.biased.table.b == 30);
  CHECK(std::abs(report.biased.test.p_value.value() -
                 0.006817645339255523) <= 1e-9);
  CHECK(std::abs(report.biased.test.odds_ratio_cmle - 0.2992371) <= 1e-4);
  CHECK(report.biased.risk_ratio == 6.0);
}

TEST_CASE("shift comparison reproduces the worked p-value grid") {
  const Example2Report report =
      evaluate_example2(shift_data(false), shift_data(true));
  CHECK(std::abs(report.unbiased.nurse_p_ignoring.value() -
                 0.017279079057623013) <= 1e-9);
  CHECK(std::abs(report.unbiased.nurse_p_allowing.value() -
                 0.378491674383851) <= 1e-9);
  CHECK(std::abs(report.biased.nurse_p_ignoring.value() -
                 0.0006539773087028702) <= 1e-9);
  CHECK(std::abs(report.biased.nurse_p_allowing.value() -
                 0.030811380614333774) <= 1e-9);

  // the summary p-values are the last rows of the corresponding tables
  CHECK(report.unbiased.ignoring_morning.rows.back().term == "nurse");
  CHECK(report.unbiased.ignoring_morning.rows.back().p_value->value() ==
        report.unbiased.nurse_p_ignoring.value());
  CHECK(report.biased.allowing_morning.rows.size() == 3);
  CHECK(report.biased.allowing_morning.rows[1].term == "morning");
}

TEST_CASE("identical datasets give identical arms") {
  const Example2Report report =
      evaluate_example2(shift_data(false), shift_data(false));
  CHECK(report.unbiased.nurse_p_ignoring.value() ==
        report.biased.nurse_p_ignoring.value());
  CHECK(report.unbiased.nurse_p_allowing.value() ==
        report.biased.nurse_p_allowing.value());
}

TEST_CASE("bonferroni adjustment") {
  const auto one = bonferroni_adjust({Probability(0.03)});
  REQUIRE(one.size() == 1);
  CHECK(one[0].value() == 0.03);

  const auto two = bonferroni_adjust({Probability(0.01), Probability(0.04)});
  CHECK(two[0].value() == 0.02);
  CHECK(two[1].value() == 0.08);

  const auto many = bonferroni_adjust(
      std::vector<Probability>(20, Probability(0.05)));
  for (const auto& p : many) CHECK(p.value() == 1.0);

  CHECK_THROWS_AS(bonferroni_adjust({}), std::invalid_argument);
}

TEST_CASE("max bin estimates are deterministic in seed and replicates") {
  const MonteCarloEstimate first =
      max_bin_cluster_prob(50, 12, 10, 20000, 99, 1);
  const MonteCarloEstimate again =
      max_bin_cluster_prob(50, 12, 10, 20000, 99, 4);
  CHECK(first.hits == again.hits);
  CHECK(first.estimate.value() == again.estimate.value());
  CHECK(first.replicates == 20000);
  CHECK(first.seed == 99);

  const MonteCarloEstimate auto_workers =
      max_bin_cluster_prob(50, 12, 10, 20000, 99);
  CHECK(auto_workers.hits == first.hits);

  const MonteCarloEstimate other_seed =
      max_bin_cluster_prob(50, 12, 10, 20000, 100, 2);
  CHECK(other_seed.hits != first.hits);
}

TEST_CASE("max bin degenerate thresholds") {
  const MonteCarloEstimate impossible =
      max_bin_cluster_prob(10, 4, 11, 5000, 1);
  CHECK(impossible.estimate.value() == 0.0);
  CHECK(impossible.hits == 0);

  const MonteCarloEstimate certain = max_bin_cluster_prob(10, 4, 1, 5000, 1);
  CHECK(certain.estimate.value() == 1.0);
  CHECK(certain.hits == 5000);
}

TEST_CASE("max bin estimate matches an exact small case") {
  // 10 events in 2 bins: max count >= 7 iff one bin gets 7 or more, with
  // probability 2 * P(Bin(10, 1/2) >= 7) = 0.34375
  const double exact = 0.34375;
  const MonteCarloEstimate est = max_bin_cluster_prob(10, 2, 7, 50000, 7);
  CHECK(est.std_error > 0.0);
  CHECK(std::abs(est.estimate.value() - exact) <= 4.0 * est.std_error);
}

TEST_CASE("max bin argument validation") {
  CHECK_THROWS_AS(max_bin_cluster_prob(0, 4, 1, 5000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(max_bin_cluster_prob(10, 0, 1, 5000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(max_bin_cluster_prob(10, 4, 0, 5000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(max_bin_cluster_prob(10, 4, 1, 999, 1),
                  std::invalid_argument);
}

TEST_CASE("single bin tail probability") {
  const Probability year = single_bin_cluster_prob(1000, 365, 8);
  CHECK(std::abs(year.value() - 0.00710654862981890509) <=
        1e-10 * 0.00710654862981890509);
  CHECK(year.value() < 0.01);

  CHECK(single_bin_cluster_prob(10, 4, 0).value() == 1.0);
  CHECK(single_bin_cluster_prob(10, 4, -3).value() == 1.0);
  CHECK(single_bin_cluster_prob(10, 1, 10).value() == 1.0);
  CHECK(single_bin_cluster_prob(10, 4, 11).value() == 0.0);

  // complements add to one
  for (long long k = 0; k <= 11; ++k) {
    const double upper = single_bin_cluster_prob(10, 3, k).value();
    double lower = 0.0;
    for (long long j = k; j <= 10; ++j) {
      const double below = single_bin_cluster_prob(10, 3, j).value();
      const double above = single_bin_cluster_prob(10, 3, j + 1).value();
      lower += below - above;
    }
    CHECK(std::abs(upper - lower) <= 1e-12);
  }
  CHECK_THROWS_AS(single_bin_cluster_prob(0, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(single_bin_cluster_prob(10, 0, 1), std::invalid_argument);
}

TEST_CASE("single bin bound is consistent with the max bin estimate") {
  // P(one particular bin clusters) <= P(some bin clusters)
  const Probability single = single_bin_cluster_prob(1000, 365, 8);
  const MonteCarloEstimate max_est =
      max_bin_cluster_prob(1000, 365, 8, 20000, 42);
  CHECK(single.value() <= max_est.estimate.value() + 3.0 * max_est.std_error);
  // and the union bound caps the other side
  CHECK(max_est.estimate.value() - 3.0 * max_est.std_error <=
        365.0 * single.value());
}
