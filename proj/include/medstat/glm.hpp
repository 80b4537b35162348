#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "medstat/contingency.hpp"
#include "medstat/dataset.hpp"
#include "medstat/special_fn.hpp"

namespace medstat {

// Row-major 0/1 design matrix with an intercept in the first column.
// Indicator columns are labeled "factor=level"; interaction columns
// "factorA=levelA:factorB=levelB".
struct DesignMatrix {
  std::vector<std::string> column_labels;
  std::size_t n_rows = 0;
  std::vector<double> values;

  std::size_t n_cols() const { return column_labels.size(); }
  double at(std::size_t i, std::size_t j) const {
    return values[i * column_labels.size() + j];
  }
};

struct GlmFit {
  std::vector<std::string> coefficient_names;
  std::vector<double> coefficients;
  std::vector<double> fitted;
  double deviance = 0;
  long long residual_df = 0;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> warnings;
};

// One row of a sequential analysis-of-deviance table. The leading NULL
// row carries only the residual columns.
struct DevianceRow {
  std::string term;
  std::optional<long long> df;
  std::optional<double> deviance_drop;
  long long residual_df = 0;
  double residual_deviance = 0;
  std::optional<Probability> p_value;
};

struct DevianceTable {
  std::vector<DevianceRow> rows;
};

// Treatment-coded design for the given terms, in order. Each term is a
// factor name or a two-factor interaction "A:B". The reference level of
// every factor is its lexicographically smallest level.
DesignMatrix build_design(const FrequencyDataset& data,
                          const std::vector<std::string>& terms);

// Maximum-likelihood Poisson regression with log link and ln(exposure)
// offset, fitted by iteratively reweighted least squares.
GlmFit fit_poisson(const FrequencyDataset& data, const DesignMatrix& design);

// Fits the intercept-only model, then adds terms one at a time in the
// given order, recording each deviance drop against chi-squared.
DevianceTable anova_sequential(const FrequencyDataset& data,
                               const std::vector<std::string>& terms);

// Casts the four cells of t as a frequency dataset with unit exposures
// and factors {outcome, condition}, then runs the sequential analysis
// with terms [outcome, condition, outcome:condition]. The interaction row
// is the 2x2 independence test in deviance form.
DevianceTable saturated_2x2_analysis(const Table2x2& t);

}  // namespace medstat
