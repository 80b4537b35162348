#pragma once

#include "medstat/special_fn.hpp"

namespace medstat {

enum class OddsOrientation { against, in_favour };

// Uncertainty on the odds scale. The orientation is explicit because a
// bare "the odds are 5" is ambiguous; 5 against and 5 in favour describe
// probabilities 1/6 and 5/6.
class Odds {
 public:
  Odds(double magnitude, OddsOrientation orientation);

  double magnitude() const { return magnitude_; }
  OddsOrientation orientation() const { return orientation_; }

  double in_favour_magnitude() const;
  double against_magnitude() const;

  // Same odds, re-expressed in the requested orientation.
  Odds with_orientation(OddsOrientation orientation) const;

  // Probability of the event the odds describe.
  Probability to_probability() const;

 private:
  double magnitude_;
  OddsOrientation orientation_;
};

// Odds against an event of probability p: magnitude (1/p) - 1.
Odds prob_to_odds_against(const Probability& p);

struct TestCharacteristics {
  Probability sensitivity;
  Probability specificity;

  TestCharacteristics(Probability sens, Probability spec);
};

// Ratio of the probabilities of the observed evidence under the two
// competing hypotheses. Infinite for evidence impossible under the
// second hypothesis (a test that never gives false positives).
class LikelihoodRatio {
 public:
  explicit LikelihoodRatio(double value);
  static LikelihoodRatio infinite();

  double value() const { return value_; }
  bool is_infinite() const;

 private:
  double value_;
};

// Posterior odds = prior odds x likelihood ratio, reported in the
// orientation of the prior. The likelihood ratio is oriented in favour of
// the event the odds describe.
Odds bayes_update(const Odds& prior, const LikelihoodRatio& lr);

// sensitivity / (1 - specificity); the infinite marker when specificity
// is 1.
LikelihoodRatio likelihood_ratio_from_test(const TestCharacteristics& tc);

// Expected counts when a population of size n with the given disease
// prevalence is screened by a test with the given characteristics.
struct PopulationTable {
  double n_total = 0;
  double n_diseased = 0;
  double n_well = 0;
  double pos_diseased = 0;
  double pos_well = 0;
  double neg_diseased = 0;
  double neg_well = 0;

  double total_positive() const { return pos_diseased + pos_well; }
  double total_negative() const { return neg_diseased + neg_well; }
  Probability posterior_given_positive() const;
};

PopulationTable population_table(double n, const Probability& prevalence,
                                 const TestCharacteristics& tc);

}  // namespace medstat
