#include "medstat/bayes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace medstat {

Odds::Odds(double magnitude, OddsOrientation orientation)
    : magnitude_(magnitude), orientation_(orientation) {
  if (!(magnitude > 0) || !std::isfinite(magnitude)) {
    throw std::domain_error("odds magnitude must be positive and finite");
  }
}

double Odds::in_favour_magnitude() const {
  return orientation_ == OddsOrientation::in_favour ? magnitude_
                                                    : 1.0 / magnitude_;
}

double Odds::against_magnitude() const {
  return orientation_ == OddsOrientation::against ? magnitude_
                                                  : 1.0 / magnitude_;
}

Odds Odds::with_orientation(OddsOrientation orientation) const {
  if (orientation == orientation_) return *this;
  return Odds(1.0 / magnitude_, orientation);
}

Probability Odds::to_probability() const {
  const double f = in_favour_magnitude();
  return Probability(f / (f + 1.0));
}

Odds prob_to_odds_against(const Probability& p) {
  if (p.value() <= 0 || p.value() >= 1) {
    throw std::domain_error(
        "odds are undefined for probabilities of exactly 0 or 1");
  }
  return Odds(1.0 / p.value() - 1.0, OddsOrientation::against);
}

TestCharacteristics::TestCharacteristics(Probability sens, Probability spec)
    : sensitivity(sens), specificity(spec) {
  if (sens.value() <= 0 || spec.value() <= 0) {
    throw std::domain_error(
        "sensitivity and specificity must be in (0, 1]");
  }
}

LikelihoodRatio::LikelihoodRatio(double value) : value_(value) {
  if (!(value > 0)) {
    throw std::domain_error("likelihood ratio must be positive");
  }
}

LikelihoodRatio LikelihoodRatio::infinite() {
  return LikelihoodRatio(std::numeric_limits<double>::infinity());
}

bool LikelihoodRatio::is_infinite() const { return std::isinf(value_); }

Odds bayes_update(const Odds& prior, const LikelihoodRatio& lr) {
  if (lr.is_infinite()) {
    throw std::domain_error(
        "posterior odds are unbounded for an infinite likelihood ratio");
  }
  const Odds posterior(prior.in_favour_magnitude() * lr.value(),
                       OddsOrientation::in_favour);
  return posterior.with_orientation(prior.orientation());
}

LikelihoodRatio likelihood_ratio_from_test(const TestCharacteristics& tc) {
  const double fpr = 1.0 - tc.specificity.value();
  if (fpr <= 0) return LikelihoodRatio::infinite();
  return LikelihoodRatio(tc.sensitivity.value() / fpr);
}

Probability PopulationTable::posterior_given_positive() const {
  const double pos = total_positive();
  if (pos <= 0) {
    throw std::domain_error(
        "posterior undefined: no positives expected in the population");
  }
  return Probability(pos_diseased / pos);
}

PopulationTable population_table(double n, const Probability& prevalence,
                                 const TestCharacteristics& tc) {
  if (!(n > 0) || !std::isfinite(n)) {
    throw std::domain_error("population size must be positive and finite");
  }
  if (prevalence.value() <= 0 || prevalence.value() >= 1) {
    throw std::domain_error("prevalence must be strictly between 0 and 1");
  }
  PopulationTable t;
  t.n_total = n;
  t.n_diseased = n * prevalence.value();
  t.n_well = n - t.n_diseased;
  t.pos_diseased = t.n_diseased * tc.sensitivity.value();
  t.neg_diseased = t.n_diseased - t.pos_diseased;
  t.neg_well = t.n_well * tc.specificity.value();
  t.pos_well = t.n_well - t.neg_well;
  return t;
}

}  // namespace medstat
