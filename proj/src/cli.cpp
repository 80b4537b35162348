#include "medstat/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "medstat/bayes.hpp"
#include "medstat/contingency.hpp"
#include "medstat/dataset.hpp"
#include "medstat/exact.hpp"
#include "medstat/glm.hpp"
#include "medstat/ingest.hpp"
#include "medstat/report.hpp"
#include "medstat/scenarios.hpp"
#include "medstat/special_fn.hpp"

namespace medstat::cli {

namespace {

using nlohmann::ordered_json;

// Mis-invocations detected after flag parsing (conflicting or missing
// inputs); mapped to exit code 2 like CLI11's own parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_kv(std::ostream& os, const std::string& key,
              const std::string& value) {
  os << "  " << std::left << std::setw(32) << key << value << "\n";
}

void write_note(std::ostream& os) {
  os << "\nnote: " << kPValueInterpretationNote << "\n";
}

void write_table_counts(std::ostream& os, const Table2x2& t) {
  write_kv(os, "counts (row 1)",
           std::to_string(t.a) + "  " + std::to_string(t.b));
  write_kv(os, "counts (row 2)",
           std::to_string(t.c) + "  " + std::to_string(t.d));
}

void write_deviance_table(std::ostream& os, const DevianceTable& tbl) {
  std::size_t tw = 4;
  for (const auto& r : tbl.rows) tw = std::max(tw, r.term.size());
  os << "  " << std::left << std::setw(static_cast<int>(tw)) << "Term"
     << std::right << std::setw(4) << "Df" << std::setw(11) << "Deviance"
     << std::setw(11) << "Resid. Df" << std::setw(12) << "Resid. Dev"
     << std::setw(10) << "P" << "\n";
  for (const auto& r : tbl.rows) {
    os << "  " << std::left << std::setw(static_cast<int>(tw)) << r.term
       << std::right << std::setw(4)
       << (r.df ? std::to_string(*r.df) : std::string());
    os << std::setw(11)
       << (r.deviance_drop ? fmt_stat(*r.deviance_drop) : std::string());
    os << std::setw(11) << r.residual_df;
    os << std::setw(12) << fmt_stat(r.residual_deviance);
    os << std::setw(10)
       << (r.p_value ? fmt_p(r.p_value->value()) : std::string());
    os << "\n";
  }
}

ordered_json deviance_table_json(const DevianceTable& tbl) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : tbl.rows) {
    ordered_json row;
    row["term"] = r.term;
    row["df"] = r.df ? ordered_json(*r.df) : ordered_json(nullptr);
    row["deviance_drop"] =
        r.deviance_drop ? json_number(*r.deviance_drop) : ordered_json(nullptr);
    row["resid_df"] = r.residual_df;
    row["resid_dev"] = json_number(r.residual_deviance);
    row["p_value"] =
        r.p_value ? json_number(r.p_value->value()) : ordered_json(nullptr);
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json cells_json(const Table2x2& t) {
  return ordered_json::array({t.a, t.b, t.c, t.d});
}

std::string cell_label(const FrequencyDataset& data, const FrequencyRow& row) {
  std::string label;
  for (std::size_t f = 0; f < data.factor_names().size(); ++f) {
    if (f > 0) label += ',';
    label += data.factor_names()[f] + "=" + row.levels[f];
  }
  return label.empty() ? "(all)" : label;
}

void emit(std::ostream& out, bool as_json, const ReportDocument& doc,
          const std::function<void(std::ostream&)>& text) {
  if (as_json) {
    out << doc.to_json().dump(2) << "\n";
  } else {
    text(out);
  }
}

// ---- shared 2x2 table input -------------------------------------------

struct TableOptions {
  std::vector<long long> cells;
  std::string csv_path;
  std::string row_factor;
  std::string col_factor;
  bool as_json = false;
};

void add_table_options(CLI::App* sub, TableOptions& opt) {
  sub->add_option("--cells", opt.cells,
                  "four counts a,b,c,d in row-major order")
      ->delimiter(',');
  sub->add_option("csv", opt.csv_path,
                  "CSV with an events column and factor columns");
  sub->add_option("--row-factor", opt.row_factor,
                  "factor giving the table rows (must have 2 levels)");
  sub->add_option("--col-factor", opt.col_factor,
                  "factor giving the table columns (must have 2 levels)");
  sub->add_flag("--json", opt.as_json, "emit the JSON report");
}

struct ResolvedTable {
  Table2x2 table{1, 1, 1, 1};
  std::string digest;
  ordered_json parameters;
};

Table2x2 table_from_dataset(const FrequencyDataset& data,
                            const std::string& row_factor,
                            const std::string& col_factor,
                            std::vector<std::string>& row_levels,
                            std::vector<std::string>& col_levels) {
  std::size_t ri = 0;
  std::size_t ci = 0;
  try {
    ri = data.factor_index(row_factor);
    ci = data.factor_index(col_factor);
  } catch (const std::out_of_range& e) {
    throw std::runtime_error(e.what());
  }
  row_levels = data.levels_of(ri);
  col_levels = data.levels_of(ci);
  if (row_levels.size() != 2) {
    throw std::runtime_error("factor '" + row_factor +
                             "' must have exactly 2 levels, found " +
                             std::to_string(row_levels.size()));
  }
  if (col_levels.size() != 2) {
    throw std::runtime_error("factor '" + col_factor +
                             "' must have exactly 2 levels, found " +
                             std::to_string(col_levels.size()));
  }
  long long cell[2][2] = {{0, 0}, {0, 0}};
  for (const auto& row : data.rows()) {
    const int i = row.levels[ri] == row_levels[0] ? 0 : 1;
    const int j = row.levels[ci] == col_levels[0] ? 0 : 1;
    cell[i][j] += row.events;
  }
  return Table2x2(cell[0][0], cell[0][1], cell[1][0], cell[1][1]);
}

ResolvedTable resolve_table(const TableOptions& opt) {
  ResolvedTable rt;
  if (!opt.cells.empty()) {
    if (!opt.csv_path.empty()) {
      throw UsageError("--cells cannot be combined with a CSV input");
    }
    if (opt.cells.size() != 4) {
      throw UsageError("--cells requires exactly four counts");
    }
    rt.table = Table2x2(opt.cells[0], opt.cells[1], opt.cells[2],
                        opt.cells[3]);
    rt.parameters["cells"] = cells_json(rt.table);
    rt.digest = fnv1a_hex(rt.parameters.dump());
    return rt;
  }
  if (opt.csv_path.empty()) {
    throw UsageError("provide --cells or a CSV path");
  }
  if (opt.row_factor.empty() || opt.col_factor.empty()) {
    throw UsageError("CSV table input requires --row-factor and --col-factor");
  }
  const FrequencyDataset data = ingest_csv(opt.csv_path);
  std::vector<std::string> row_levels;
  std::vector<std::string> col_levels;
  rt.table = table_from_dataset(data, opt.row_factor, opt.col_factor,
                                row_levels, col_levels);
  rt.parameters["csv"] = opt.csv_path;
  rt.parameters["row_factor"] = opt.row_factor;
  rt.parameters["col_factor"] = opt.col_factor;
  rt.parameters["row_levels"] = row_levels;
  rt.parameters["col_levels"] = col_levels;
  rt.parameters["cells"] = cells_json(rt.table);
  rt.digest = fnv1a_hex(to_canonical_csv(data));
  return rt;
}

// ---- subcommands -------------------------------------------------------

void setup_tabulate(CLI::App& app, std::ostream& out) {
  auto opt = std::make_shared<TableOptions>();
  auto* sub = app.add_subcommand(
      "tabulate", "aggregate a CSV into canonical frequency-table form");
  sub->add_option("csv", opt->csv_path, "input CSV")->required();
  sub->add_flag("--json", opt->as_json, "emit the JSON report");
  sub->callback([opt, &out] {
    const FrequencyDataset data = ingest_csv(opt->csv_path);
    const std::string canonical = to_canonical_csv(data);
    ReportDocument doc;
    doc.analysis = "tabulate";
    doc.inputs_digest = fnv1a_hex(canonical);
    doc.parameters["csv"] = opt->csv_path;
    ordered_json columns = ordered_json::array();
    for (const auto& f : data.factor_names()) columns.push_back(f);
    columns.push_back("exposure");
    columns.push_back("events");
    ordered_json rows = ordered_json::array();
    for (const auto& row : data.rows()) {
      ordered_json r = ordered_json::array();
      for (const auto& level : row.levels) r.push_back(level);
      r.push_back(json_number(row.exposure));
      r.push_back(row.events);
      rows.push_back(std::move(r));
    }
    doc.results["columns"] = std::move(columns);
    doc.results["rows"] = std::move(rows);
    emit(out, opt->as_json, doc,
         [&](std::ostream& os) { os << canonical; });
  });
}

void setup_chisq(CLI::App& app, std::ostream& out) {
  auto opt = std::make_shared<TableOptions>();
  auto correction = std::make_shared<bool>(false);
  auto* sub = app.add_subcommand(
      "chisq", "Pearson chi-squared test of independence for a 2x2 table");
  add_table_options(sub, *opt);
  sub->add_flag("--correction,!--no-correction", *correction,
                "apply the Yates continuity correction (off by default)");
  sub->callback([opt, correction, &out] {
    ResolvedTable rt = resolve_table(*opt);
    const TestResult res = chi2_test(rt.table, *correction);
    const ExpectedCounts e = expected_counts(rt.table);
    ReportDocument doc;
    doc.analysis = "chisq";
    doc.inputs_digest = rt.digest;
    doc.parameters = rt.parameters;
    doc.parameters["continuity_correction"] = *correction;
    doc.results["statistic"] = json_number(res.statistic);
    doc.results["df"] = json_number(res.df);
    doc.results["p_value"] = json_number(res.p_value.value());
    doc.results["continuity_corrected"] = res.continuity_corrected;
    doc.results["expected"] = ordered_json::array(
        {json_number(e.e11), json_number(e.e12), json_number(e.e21),
         json_number(e.e22)});
    doc.results["interpretation"] = std::string(kPValueInterpretationNote);
    emit(out, opt->as_json, doc, [&](std::ostream& os) {
      os << "chi-squared test of independence\n";
      write_table_counts(os, rt.table);
      write_kv(os, "statistic", fmt_stat(res.statistic));
      write_kv(os, "df", fmt_stat(res.df));
      write_kv(os, "p-value", fmt_p(res.p_value.value()));
      write_kv(os, "continuity correction",
               res.continuity_corrected ? "on" : "off");
      write_note(os);
    });
  });
}

void setup_fisher(CLI::App& app, std::ostream& out) {
  auto opt = std::make_shared<TableOptions>();
  auto alternative = std::make_shared<std::string>("less");
  auto* sub = app.add_subcommand(
      "fisher", "exact conditional test for a 2x2 table (one-sided)");
  add_table_options(sub, *opt);
  sub->add_option("--alternative", *alternative,
                  "alternative hypothesis (only 'less' is supported)")
      ->check(CLI::IsMember({"less"}));
  sub->callback([opt, alternative, &out] {
    ResolvedTable rt = resolve_table(*opt);
    const ExactTestResult res = fisher_less(rt.table);
    ReportDocument doc;
    doc.analysis = "fisher";
    doc.inputs_digest = rt.digest;
    doc.parameters = rt.parameters;
    doc.parameters["alternative"] = *alternative;
    doc.results["p_value"] = json_number(res.p_value.value());
    doc.results["odds_ratio_cmle"] = json_number(res.odds_ratio_cmle);
    doc.results["alternative"] = "less";
    doc.results["interpretation"] = std::string(kPValueInterpretationNote);
    emit(out, opt->as_json, doc, [&](std::ostream& os) {
      os << "exact conditional test\n";
      write_table_counts(os, rt.table);
      write_kv(os, "alternative", "true odds ratio is less than 1");
      write_kv(os, "p-value", fmt_p(res.p_value.value()));
      write_kv(os, "odds ratio (cond. mle)", fmt_stat(res.odds_ratio_cmle));
      write_note(os);
    });
  });
}

void setup_risk(CLI::App& app, std::ostream& out) {
  auto opt = std::make_shared<TableOptions>();
  auto* sub = app.add_subcommand(
      "risk", "per-column risks, relative risk, and risk difference");
  add_table_options(sub, *opt);
  sub->callback([opt, &out] {
    ResolvedTable rt = resolve_table(*opt);
    const RiskSummary rs = risk_summary(rt.table);
    ReportDocument doc;
    doc.analysis = "risk";
    doc.inputs_digest = rt.digest;
    doc.parameters = rt.parameters;
    doc.results["risk1"] = json_number(rs.risk1.value());
    doc.results["risk2"] = json_number(rs.risk2.value());
    doc.results["relative_risk"] = json_number(rs.relative_risk);
    doc.results["absolute_risk_difference"] =
        json_number(rs.absolute_risk_difference);
    doc.results["interpretation"] = std::string(kPValueInterpretationNote);
    emit(out, opt->as_json, doc, [&](std::ostream& os) {
      os << "risk comparison\n";
      write_table_counts(os, rt.table);
      write_kv(os, "risk (column 1)", fmt_stat(rs.risk1.value()));
      write_kv(os, "risk (column 2)", fmt_stat(rs.risk2.value()));
      write_kv(os, "relative risk", fmt_stat(rs.relative_risk));
      write_kv(os, "absolute risk difference",
               fmt_stat(rs.absolute_risk_difference));
      write_note(os);
    });
  });
}

void setup_glm_anova(CLI::App& app, std::ostream& out) {
  struct Options {
    std::string csv_path;
    std::vector<std::string> terms;
    bool as_json = false;
  };
  auto opt = std::make_shared<Options>();
  auto* sub = app.add_subcommand(
      "glm-anova",
      "Poisson log-linear rate model with sequential analysis of deviance");
  sub->add_option("csv", opt->csv_path, "input CSV")->required();
  sub->add_option("--terms", opt->terms,
                  "model terms, first to last (comma separated)")
      ->delimiter(',')
      ->required();
  sub->add_flag("--json", opt->as_json, "emit the JSON report");
  sub->callback([opt, &out] {
    const FrequencyDataset data = ingest_csv(opt->csv_path);
    const DevianceTable table = anova_sequential(data, opt->terms);
    const GlmFit fit = fit_poisson(data, build_design(data, opt->terms));
    ReportDocument doc;
    doc.analysis = "glm-anova";
    doc.inputs_digest = fnv1a_hex(to_canonical_csv(data));
    doc.parameters["csv"] = opt->csv_path;
    doc.parameters["terms"] = opt->terms;
    doc.warnings = fit.warnings;
    doc.results["deviance_table"] = deviance_table_json(table);
    ordered_json fitted = ordered_json::array();
    for (std::size_t i = 0; i < data.rows().size(); ++i) {
      ordered_json cell;
      cell["cell"] = cell_label(data, data.rows()[i]);
      cell["exposure"] = json_number(data.rows()[i].exposure);
      cell["events"] = data.rows()[i].events;
      cell["fitted"] = json_number(fit.fitted[i]);
      fitted.push_back(std::move(cell));
    }
    doc.results["fitted"] = std::move(fitted);
    ordered_json coef = ordered_json::array();
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j) {
      ordered_json c;
      c["name"] = fit.coefficient_names[j];
      c["estimate"] = json_number(fit.coefficients[j]);
      coef.push_back(std::move(c));
    }
    doc.results["coefficients"] = std::move(coef);
    doc.results["converged"] = fit.converged;
    doc.results["interpretation"] = std::string(kPValueInterpretationNote);
    emit(out, opt->as_json, doc, [&](std::ostream& os) {
      os << "analysis of deviance (Poisson log-linear model)\n";
      os << "terms added sequentially, first to last\n\n";
      write_deviance_table(os, table);
      os << "\nfitted values\n";
      std::size_t lw = 4;
      for (const auto& row : data.rows()) {
        lw = std::max(lw, cell_label(data, row).size());
      }
      for (std::size_t i = 0; i < data.rows().size(); ++i) {
        os << "  " << std::left << std::setw(static_cast<int>(lw))
           << cell_label(data, data.rows()[i]) << std::right << std::setw(11)
           << fmt_stat(fit.fitted[i]) << "\n";
      }
      if (!fit.warnings.empty()) {
        os << "\n";
        for (const auto& w : fit.warnings) os << "warning: " << w << "\n";
      }
      write_note(os);
    });
  });
}

void setup_bayes(CLI::App& app, std::ostream& out) {
  struct Options {
    double prior_against = 0;
    double lr = 0;
    bool as_json = false;
  };
  auto opt = std::make_shared<Options>();
  auto* sub = app.add_subcommand(
      "bayes", "update prior odds with a likelihood ratio");
  sub->add_option("--prior-against", opt->prior_against,
                  "prior odds against the hypothesis")
      ->required()
      ->check(CLI::PositiveNumber);
  sub->add_option("--lr", opt->lr,
                  "likelihood ratio in favour of the hypothesis")
      ->required()
      ->check(CLI::PositiveNumber);
  sub->add_flag("--json", opt->as_json, "emit the JSON report");
  sub->callback([opt, &out] {
    const Odds prior(opt->prior_against, OddsOrientation::against);
    const Odds posterior = bayes_update(prior, LikelihoodRatio(opt->lr));
    ReportDocument doc;
    doc.analysis = "bayes";
    doc.parameters["prior_against"] = json_number(opt->prior_against);
    doc.parameters["lr"] = json_number(opt->lr);
    doc.inputs_digest = fnv1a_hex(doc.parameters.dump());
    doc.results["prior_odds_against"] = json_number(prior.against_magnitude());
    doc.results["likelihood_ratio"] = json_number(opt->lr);
    doc.results["posterior_odds_against"] =
        json_number(posterior.against_magnitude());
    doc.results["posterior_probability"] =
        json_number(posterior.to_probability().value());
    doc.results["interpretation"] = std::string(kPValueInterpretationNote);
    emit(out, opt->as_json, doc, [&](std::ostream& os) {
      os << "bayes update\n";
      os << "  prior odds against: " << fmt_stat(prior.against_magnitude())
         << "\n";
      os << "  likelihood ratio: " << fmt_stat(opt->lr) << "\n";
      os << "  posterior odds against: "
         << fmt_stat(posterior.against_magnitude()) << "\n";
      os << "  posterior probability: "
         << fmt_stat(posterior.to_probability().value()) << "\n";
      write_note(os);
    });
  });
}

void setup_bias_example1(CLI::App& app, std::ostream& out) {
  struct Options {
    std::string csv_path;
    double unbiased_rate = 0;
    double on_duty_rate = 0;
    double off_duty_rate = 0;
    bool as_json = false;
  };
  auto opt = std::make_shared<Options>();
  auto* sub = app.add_subcommand(
      "bias-example1",
      "review-bias scenario: classify deaths per period, test both arms");
  sub->add_option("csv", opt->csv_path,
                  "deaths CSV with a 'period' factor (levels before/after)")
      ->required();
  sub->add_option("--unbiased-rate", opt->unbiased_rate,
                  "fraction deemed suspicious by a fair review")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--on-duty-rate", opt->on_duty_rate,
                  "fraction deemed suspicious when the suspect was on duty")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--off-duty-rate", opt->off_duty_rate,
                  "fraction deemed suspicious when the suspect was off duty")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sub->add_flag("--json", opt->as_json, "emit the JSON report");
  sub->callback([opt, &out] {
    const FrequencyDataset data = ingest_csv(opt->csv_path);
    std::size_t pi = 0;
    try {
      pi = data.factor_index("period");
    } catch (const std::out_of_range&) {
      throw std::runtime_error(
          "input must carry a 'period' factor with levels before/after");
    }
    long long deaths_before = 0;
    long long deaths_after = 0;
    for (const auto& row : data.rows()) {
      const std::string& level = row.levels[pi];
      if (level == "before") {
        deaths_before += row.events;
      } else if (level == "after") {
        deaths_after += row.events;
      } else {
        throw std::runtime_error("unexpected period level '" + level +
                                 "' (expected before/after)");
      }
    }
    const BiasScenario scenario{Probability(opt->unbiased_rate),
                                Probability(opt->on_duty_rate),
                                Probability(opt->off_duty_rate)};
    const Example1Report report =
        evaluate_example1(deaths_before, deaths_after, scenario);
    ReportDocument doc;
    doc.analysis = "bias-example1";
    doc.inputs_digest = fnv1a_hex(to_canonical_csv(data));
    doc.parameters["csv"] = opt->csv_path;
    doc.parameters["unbiased_rate"] = json_number(opt->unbiased_rate);
    doc.parameters["on_duty_rate"] = json_number(opt->on_duty_rate);
    doc.parameters["off_duty_rate"] = json_number(opt->off_duty_rate);
    doc.parameters["deaths_before"] = deaths_before;
    doc.parameters["deaths_after"] = deaths_after;
    auto arm_json = [](const Example1Arm& arm) {
      ordered_json a;
      a["cells"] = cells_json(arm.table);
      a["p_value"] = json_number(arm.test.p_value.value());
      a["odds_ratio_cmle"] = json_number(arm.test.odds_ratio_cmle);
      a["risk_ratio"] = json_number(arm.risk_ratio);
      return a;
    };
    doc.results["unbiased"] = arm_json(report.unbiased);
    doc.results["biased"] = arm_json(report.biased);
    doc.results["interpretation"] = std::string(kPValueInterpretationNote);
    emit(out, opt->as_json, doc, [&](std::ostream& os) {
      os << "review-bias scenario (exact one-sided tests)\n";
      auto write_arm = [&os](const std::string& name,
                             const Example1Arm& arm) {
        os << "\n" << name << "\n";
        write_kv(os, "suspicious (before, after)",
                 std::to_string(arm.table.a) + "  " +
                     std::to_string(arm.table.b));
        write_kv(os, "non-suspicious (before, after)",
                 std::to_string(arm.table.c) + "  " +
                     std::to_string(arm.table.d));
        write_kv(os, "p-value", fmt_p(arm.test.p_value.value()));
        write_kv(os, "odds ratio (cond. mle)",
                 fmt_stat(arm.test.odds_ratio_cmle));
        write_kv(os, "risk ratio (after/before)", fmt_stat(arm.risk_ratio));
      };
      write_arm("unbiased review", report.unbiased);
      write_arm("biased review", report.biased);
      write_note(os);
    });
  });
}

void setup_bias_example2(CLI::App& app, std::ostream& out) {
  struct Options {
    std::string unbiased_path;
    std::string biased_path;
    bool as_json = false;
  };
  auto opt = std::make_shared<Options>();
  auto* sub = app.add_subcommand(
      "bias-example2",
      "shift-pattern bias scenario: nurse effect with and without the "
      "morning factor, on both datasets");
  sub->add_option("--unbiased", opt->unbiased_path,
                  "CSV of shifts with the unbiased death counts")
      ->required();
  sub->add_option("--biased", opt->biased_path,
                  "CSV of shifts with the biased death counts")
      ->required();
  sub->add_flag("--json", opt->as_json, "emit the JSON report");
  sub->callback([opt, &out] {
    const FrequencyDataset unbiased = ingest_csv(opt->unbiased_path);
    const FrequencyDataset biased = ingest_csv(opt->biased_path);
    const Example2Report report = evaluate_example2(unbiased, biased);
    ReportDocument doc;
    doc.analysis = "bias-example2";
    doc.inputs_digest = fnv1a_hex(to_canonical_csv(unbiased) + "\n--\n" +
                                  to_canonical_csv(biased));
    doc.parameters["unbiased_csv"] = opt->unbiased_path;
    doc.parameters["biased_csv"] = opt->biased_path;
    auto arm_json = [](const Example2Arm& arm) {
      ordered_json a;
      a["nurse_p_ignoring_morning"] =
          json_number(arm.nurse_p_ignoring.value());
      a["nurse_p_allowing_morning"] =
          json_number(arm.nurse_p_allowing.value());
      a["anova_ignoring_morning"] = deviance_table_json(arm.ignoring_morning);
      a["anova_allowing_morning"] = deviance_table_json(arm.allowing_morning);
      return a;
    };
    doc.results["unbiased"] = arm_json(report.unbiased);
    doc.results["biased"] = arm_json(report.biased);
    doc.results["interpretation"] = std::string(kPValueInterpretationNote);
    emit(out, opt->as_json, doc, [&](std::ostream& os) {
      os << "shift-pattern bias scenario (Poisson log-linear analyses)\n";
      auto write_arm = [&os](const std::string& name,
                             const Example2Arm& arm) {
        os << "\n" << name << ", ignoring morning\n";
        write_deviance_table(os, arm.ignoring_morning);
        os << "\n" << name << ", allowing for morning\n";
        write_deviance_table(os, arm.allowing_morning);
      };
      write_arm("unbiased data", report.unbiased);
      write_arm("biased data", report.biased);
      os << "\nnurse-effect p-values\n";
      write_kv(os, "unbiased, ignoring morning",
               fmt_p(report.unbiased.nurse_p_ignoring.value()));
      write_kv(os, "unbiased, allowing for morning",
               fmt_p(report.unbiased.nurse_p_allowing.value()));
      write_kv(os, "biased, ignoring morning",
               fmt_p(report.biased.nurse_p_ignoring.value()));
      write_kv(os, "biased, allowing for morning",
               fmt_p(report.biased.nurse_p_allowing.value()));
      write_note(os);
    });
  });
}

void setup_cluster_prob(CLI::App& app, std::ostream& out) {
  struct Options {
    long long events = 0;
    long long bins = 0;
    long long threshold = 0;
    long long replicates = 100000;
    std::uint64_t seed = 1;
    int workers = 0;
    bool as_json = false;
  };
  auto opt = std::make_shared<Options>();
  auto* sub = app.add_subcommand(
      "cluster-prob",
      "chance of an event cluster: exact for one particular bin, Monte "
      "Carlo for the maximum over all bins");
  sub->add_option("--events", opt->events, "number of events")
      ->required()
      ->check(CLI::PositiveNumber);
  sub->add_option("--bins", opt->bins, "number of bins")
      ->required()
      ->check(CLI::PositiveNumber);
  sub->add_option("--threshold", opt->threshold, "cluster size of interest")
      ->required()
      ->check(CLI::PositiveNumber);
  sub->add_option("--replicates", opt->replicates,
                  "Monte Carlo replicates (at least 1000)")
      ->check(CLI::Range(1000LL, 1000000000LL));
  sub->add_option("--seed", opt->seed, "random seed");
  sub->add_option("--workers", opt->workers,
                  "worker threads (0 = hardware concurrency)")
      ->check(CLI::NonNegativeNumber);
  sub->add_flag("--json", opt->as_json, "emit the JSON report");
  sub->callback([opt, &out] {
    const Probability single =
        single_bin_cluster_prob(opt->events, opt->bins, opt->threshold);
    const MonteCarloEstimate mc =
        max_bin_cluster_prob(opt->events, opt->bins, opt->threshold,
                             opt->replicates, opt->seed, opt->workers);
    ReportDocument doc;
    doc.analysis = "cluster-prob";
    doc.parameters["events"] = opt->events;
    doc.parameters["bins"] = opt->bins;
    doc.parameters["threshold"] = opt->threshold;
    doc.parameters["replicates"] = opt->replicates;
    doc.parameters["seed"] = opt->seed;
    doc.inputs_digest = fnv1a_hex(doc.parameters.dump());
    doc.results["single_bin_exact"] = json_number(single.value());
    doc.results["max_bin_estimate"] = json_number(mc.estimate.value());
    doc.results["std_error"] = json_number(mc.std_error);
    doc.results["hits"] = mc.hits;
    doc.results["replicates"] = mc.replicates;
    doc.results["seed"] = mc.seed;
    doc.results["interpretation"] = std::string(kPValueInterpretationNote);
    emit(out, opt->as_json, doc, [&](std::ostream& os) {
      os << "cluster probabilities (" << opt->events << " events into "
         << opt->bins << " bins, threshold " << opt->threshold << ")\n";
      write_kv(os, "one particular bin (exact)", fmt_p(single.value()));
      write_kv(os, "any bin (monte carlo)", fmt_p(mc.estimate.value()));
      write_kv(os, "std error", fmt_p(mc.std_error));
      write_kv(os, "replicates", std::to_string(mc.replicates));
      write_kv(os, "seed", std::to_string(mc.seed));
      write_note(os);
    });
  });
}

void setup_adjust(CLI::App& app, std::ostream& out) {
  struct Options {
    std::vector<double> p_values;
    bool as_json = false;
  };
  auto opt = std::make_shared<Options>();
  auto* sub = app.add_subcommand(
      "adjust", "Bonferroni adjustment for multiple testing");
  sub->add_option("--p", opt->p_values, "p-values (comma separated)")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  sub->add_flag("--json", opt->as_json, "emit the JSON report");
  sub->callback([opt, &out] {
    std::vector<Probability> ps;
    ps.reserve(opt->p_values.size());
    for (double p : opt->p_values) ps.emplace_back(p);
    const std::vector<Probability> adjusted = bonferroni_adjust(ps);
    ReportDocument doc;
    doc.analysis = "adjust";
    ordered_json raw = ordered_json::array();
    for (double p : opt->p_values) raw.push_back(json_number(p));
    doc.parameters["p"] = raw;
    doc.inputs_digest = fnv1a_hex(doc.parameters.dump());
    doc.results["m"] = static_cast<long long>(adjusted.size());
    ordered_json adj = ordered_json::array();
    for (const auto& p : adjusted) adj.push_back(json_number(p.value()));
    doc.results["p"] = raw;
    doc.results["adjusted"] = std::move(adj);
    doc.results["interpretation"] = std::string(kPValueInterpretationNote);
    emit(out, opt->as_json, doc, [&](std::ostream& os) {
      os << "bonferroni adjustment (m = " << adjusted.size() << ")\n";
      for (std::size_t i = 0; i < adjusted.size(); ++i) {
        os << "  " << fmt_p(opt->p_values[i]) << "  ->  "
           << fmt_p(adjusted[i].value()) << "\n";
      }
      write_note(os);
    });
  });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "statistical evaluation of suspicious clusters of adverse events"};
  app.require_subcommand(1);
  setup_tabulate(app, out);
  setup_chisq(app, out);
  setup_fisher(app, out);
  setup_risk(app, out);
  setup_glm_anova(app, out);
  setup_bayes(app, out);
  setup_bias_example1(app, out);
  setup_bias_example2(app, out);
  setup_cluster_prob(app, out);
  setup_adjust(app, out);

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace medstat::cli
