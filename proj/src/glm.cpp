#include "medstat/glm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace medstat {

namespace {

struct Term {
  std::vector<std::size_t> factors;  // one entry, or two for an interaction
};

Term parse_term(const FrequencyDataset& data, const std::string& term) {
  Term out;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = term.find(':', start);
    const std::string part = term.substr(
        start, colon == std::string::npos ? std::string::npos : colon - start);
    if (part.empty()) {
      throw std::invalid_argument("malformed term: " + term);
    }
    out.factors.push_back(data.factor_index(part));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (out.factors.size() > 2) {
    throw std::invalid_argument(
        "only two-factor interactions are supported: " + term);
  }
  return out;
}

double poisson_deviance(const std::vector<FrequencyRow>& rows,
                        const Eigen::VectorXd& mu) {
  double dev = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double y = static_cast<double>(rows[i].events);
    const double m = mu[static_cast<Eigen::Index>(i)];
    if (y > 0) dev += y * std::log(y / m);
    dev -= y - m;
  }
  return 2.0 * dev;
}

}  // namespace

DesignMatrix build_design(const FrequencyDataset& data,
                          const std::vector<std::string>& terms) {
  const auto& rows = data.rows();
  DesignMatrix design;
  design.n_rows = rows.size();
  design.column_labels.push_back("(intercept)");

  struct Column {
    std::string label;
    std::vector<std::pair<std::size_t, std::string>> required;
  };
  std::vector<Column> columns;
  for (const auto& term : terms) {
    const Term parsed = parse_term(data, term);
    if (parsed.factors.size() == 1) {
      const std::size_t f = parsed.factors[0];
      const auto levels = data.levels_of(f);
      for (std::size_t li = 1; li < levels.size(); ++li) {
        columns.push_back({data.factor_names()[f] + "=" + levels[li],
                           {{f, levels[li]}}});
      }
    } else {
      const std::size_t fa = parsed.factors[0];
      const std::size_t fb = parsed.factors[1];
      const auto levels_a = data.levels_of(fa);
      const auto levels_b = data.levels_of(fb);
      for (std::size_t la = 1; la < levels_a.size(); ++la) {
        for (std::size_t lb = 1; lb < levels_b.size(); ++lb) {
          columns.push_back({data.factor_names()[fa] + "=" + levels_a[la] +
                                 ":" + data.factor_names()[fb] + "=" +
                                 levels_b[lb],
                             {{fa, levels_a[la]}, {fb, levels_b[lb]}}});
        }
      }
    }
  }

  for (const auto& col : columns) design.column_labels.push_back(col.label);
  design.values.assign(design.n_rows * design.n_cols(), 0.0);
  for (std::size_t i = 0; i < design.n_rows; ++i) {
    design.values[i * design.n_cols()] = 1.0;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      bool match = true;
      for (const auto& [f, level] : columns[j].required) {
        if (rows[i].levels[f] != level) {
          match = false;
          break;
        }
      }
      if (match) design.values[i * design.n_cols() + j + 1] = 1.0;
    }
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(design.n_rows),
                    static_cast<Eigen::Index>(design.n_cols()));
  for (std::size_t i = 0; i < design.n_rows; ++i) {
    for (std::size_t j = 0; j < design.n_cols(); ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          design.at(i, j);
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(design.n_cols())) {
    const auto perm = qr.colsPermutation().indices();
    const auto aliased = static_cast<std::size_t>(perm[qr.rank()]);
    throw std::invalid_argument("design is rank deficient: column '" +
                                design.column_labels[aliased] +
                                "' is aliased");
  }
  return design;
}

GlmFit fit_poisson(const FrequencyDataset& data, const DesignMatrix& design) {
  const auto& rows = data.rows();
  if (design.n_rows != rows.size()) {
    throw std::invalid_argument("design does not align with dataset rows");
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(design.n_cols());
  if (n < p) {
    throw std::invalid_argument("more coefficients than rows");
  }

  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  Eigen::VectorXd offset(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      x(i, j) = design.at(static_cast<std::size_t>(i),
                          static_cast<std::size_t>(j));
    }
    y[i] = static_cast<double>(rows[static_cast<std::size_t>(i)].events);
    offset[i] = std::log(rows[static_cast<std::size_t>(i)].exposure);
  }

  GlmFit fit;
  fit.coefficient_names = design.column_labels;
  fit.residual_df = static_cast<long long>(n - p);

  Eigen::VectorXd mu = y.array() + 0.5;
  Eigen::VectorXd eta = mu.array().log();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double dev = poisson_deviance(rows, mu);

  for (int iter = 1; iter <= 50; ++iter) {
    const Eigen::VectorXd w = mu.array().sqrt();
    const Eigen::VectorXd z =
        (eta - offset).array() + (y - mu).array() / mu.array();
    const Eigen::MatrixXd xw = w.asDiagonal() * x;
    const Eigen::VectorXd zw = w.asDiagonal() * z;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xw);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
      throw std::invalid_argument(
          "design is rank deficient under the working weights");
    }
    beta = qr.solve(zw);
    eta = x * beta + offset;
    mu = eta.array().exp();
    const double new_dev = poisson_deviance(rows, mu);
    fit.iterations = iter;
    if (std::abs(new_dev - dev) / (0.1 + std::abs(new_dev)) < 1e-10) {
      fit.converged = true;
      dev = new_dev;
      break;
    }
    dev = new_dev;
  }

  fit.deviance = dev;
  fit.coefficients.assign(beta.data(), beta.data() + p);
  fit.fitted.assign(mu.data(), mu.data() + n);
  if (!fit.converged) {
    fit.warnings.push_back("IRLS did not converge within 50 iterations");
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    if (std::abs(beta[j]) > 30) {
      fit.warnings.push_back("coefficient '" + design.column_labels[
                                 static_cast<std::size_t>(j)] +
                             "' appears unbounded (possible separation)");
    }
  }
  return fit;
}

DevianceTable anova_sequential(const FrequencyDataset& data,
                               const std::vector<std::string>& terms) {
  DevianceTable table;
  std::vector<std::string> active;
  auto fit_active = [&](const std::string& label) {
    try {
      return fit_poisson(data, build_design(data, active));
    } catch (const std::exception& e) {
      throw std::runtime_error("while fitting sub-model '" + label +
                               "': " + e.what());
    }
  };

  GlmFit prev = fit_active("(null)");
  DevianceRow null_row;
  null_row.term = "NULL";
  null_row.residual_df = prev.residual_df;
  null_row.residual_deviance = prev.deviance;
  table.rows.push_back(std::move(null_row));

  for (const auto& term : terms) {
    active.push_back(term);
    GlmFit cur = fit_active(term);
    DevianceRow row;
    row.term = term;
    row.df = prev.residual_df - cur.residual_df;
    double drop = prev.deviance - cur.deviance;
    if (drop < 0 && drop > -1e-8) drop = 0;
    row.deviance_drop = drop;
    row.residual_df = cur.residual_df;
    row.residual_deviance = cur.deviance;
    if (*row.df > 0) {
      row.p_value = chi2_sf(drop, static_cast<double>(*row.df));
    }
    table.rows.push_back(std::move(row));
    prev = std::move(cur);
  }
  return table;
}

DevianceTable saturated_2x2_analysis(const Table2x2& t) {
  if (t.row1_total() == 0 || t.row2_total() == 0 || t.col1_total() == 0 ||
      t.col2_total() == 0) {
    throw std::domain_error("degenerate 2x2 table: zero row or column margin");
  }
  std::vector<FrequencyRow> rows = {
      {{"adverse", "group1"}, 1.0, t.a},
      {{"adverse", "group2"}, 1.0, t.b},
      {{"normal", "group1"}, 1.0, t.c},
      {{"normal", "group2"}, 1.0, t.d},
  };
  FrequencyDataset data({"outcome", "condition"}, std::move(rows));
  return anova_sequential(data,
                          {"outcome", "condition", "outcome:condition"});
}

}  // namespace medstat
