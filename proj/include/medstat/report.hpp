#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "medstat/dataset.hpp"

namespace medstat {

// Interpretation caveat attached to every analysis report.
inline constexpr std::string_view kPValueInterpretationNote =
    "A p-value is the probability, computed assuming the null hypothesis, "
    "of evidence at least as extreme as what was observed. It is not the "
    "probability that the null hypothesis is true, and its complement is "
    "not the probability of any alternative; reading it that way "
    "transposes the conditional and can grossly overstate the evidence. A "
    "small p-value flags surprise under the null hypothesis; it does not "
    "by itself identify a cause.";

// 64-bit FNV-1a of the canonical input, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

// Numeric JSON value; infinities and NaN become the strings "inf",
// "-inf", "nan" so documents stay valid JSON.
nlohmann::ordered_json json_number(double v);

// Shortest decimal form that parses back to exactly v.
std::string fmt_full(double v);

// %.Ng formatting. Statistics are printed with 6 significant figures,
// p-values with 4.
std::string fmt_sig(double v, int significant);
std::string fmt_stat(double v);
std::string fmt_p(double v);

// Canonical CSV rendering of a dataset: header (factors, exposure,
// events), one row per aggregated tuple in dataset order. Re-ingesting
// the output reproduces the dataset exactly.
std::string to_canonical_csv(const FrequencyDataset& data);

struct ReportDocument {
  std::string analysis;
  std::string inputs_digest;
  nlohmann::ordered_json parameters;
  nlohmann::ordered_json results;
  std::vector<std::string> warnings;

  nlohmann::ordered_json to_json() const;
};

}  // namespace medstat
