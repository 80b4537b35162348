#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "medstat/contingency.hpp"
#include "medstat/dataset.hpp"
#include "medstat/exact.hpp"
#include "medstat/glm.hpp"
#include "medstat/special_fn.hpp"

namespace medstat {

// Classification rates for a death review: the fraction of deaths deemed
// suspicious by a fair review, and the (possibly distorted) fractions
// applied to deaths on and off the suspect's duty.
struct BiasScenario {
  Probability unbiased_rate;
  Probability on_duty_rate;
  Probability off_duty_rate;
};

// Splits each period's deaths into suspicious and non-suspicious counts.
// Expected suspicious counts are rate x deaths, rounded to the nearest
// integer with ties to even. The unbiased table applies unbiased_rate to
// both periods; the biased table applies off_duty_rate to the before
// period and on_duty_rate to the after period. Rows are suspicious /
// non-suspicious, columns before / after, so deaths are conserved within
// each column.
std::pair<Table2x2, Table2x2> classify_suspicious(long long deaths_before,
                                                  long long deaths_after,
                                                  const BiasScenario& s);

// One arm's table with its exact test and the after/before ratio of
// suspicious counts. The two periods are taken to carry equal exposure,
// so the count ratio doubles as a rate ratio.
struct Example1Arm {
  Table2x2 table;
  ExactTestResult test;
  double risk_ratio = 0;
};

struct Example1Report {
  Example1Arm unbiased;
  Example1Arm biased;
};

// Runs both arms of the review-bias scenario: classify deaths per period,
// then test each table with the one-sided exact test.
Example1Report evaluate_example1(long long deaths_before,
                                 long long deaths_after,
                                 const BiasScenario& s);

// One arm's pair of sequential analyses over a shift-structured dataset:
// the nurse effect ignoring time of day (terms [nurse]) and allowing for
// it (terms [morning, nurse]).
struct Example2Arm {
  DevianceTable ignoring_morning;
  DevianceTable allowing_morning;
  Probability nurse_p_ignoring;
  Probability nurse_p_allowing;
};

struct Example2Report {
  Example2Arm unbiased;
  Example2Arm biased;
};

// Both datasets must carry factors named "nurse" and "morning".
Example2Report evaluate_example2(const FrequencyDataset& data_unbiased,
                                 const FrequencyDataset& data_biased);

// min(1, m * p) for each of the m p-values.
std::vector<Probability> bonferroni_adjust(
    const std::vector<Probability>& p_values);

struct MonteCarloEstimate {
  Probability estimate;
  double std_error = 0;
  long long hits = 0;
  long long replicates = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of P(max bin count >= threshold) when n_events are
// placed uniformly at random into n_bins. Deterministic for a given seed
// and replicate count: replicates are simulated in fixed-size blocks,
// each block's generator seeded from (seed, block index), so the result
// is bit-identical for any number of worker threads. workers = 0 uses the
// hardware concurrency.
MonteCarloEstimate max_bin_cluster_prob(long long n_events, long long n_bins,
                                        long long threshold,
                                        long long replicates,
                                        std::uint64_t seed, int workers = 0);

// Exact P(Bin(n_events, 1/n_bins) >= threshold): the chance that one
// particular bin receives at least `threshold` of the events. Computed in
// log space. threshold <= 0 gives 1; threshold > n_events gives 0.
Probability single_bin_cluster_prob(long long n_events, long long n_bins,
                                    long long threshold);

}  // namespace medstat
