#include "medstat/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace medstat {

namespace {

void validate_rows(const std::vector<std::string>& factor_names,
                   const std::vector<FrequencyRow>& rows) {
  for (const auto& row : rows) {
    if (row.levels.size() != factor_names.size()) {
      throw std::invalid_argument(
          "row has a different number of levels than there are factors");
    }
    if (row.events < 0) {
      throw std::invalid_argument("event count must be nonnegative");
    }
    if (!(row.exposure > 0) || !std::isfinite(row.exposure)) {
      throw std::invalid_argument("exposure must be positive and finite");
    }
  }
}

bool tuple_less(const FrequencyRow& x, const FrequencyRow& y) {
  return x.levels < y.levels;
}

}  // namespace

FrequencyDataset::FrequencyDataset(std::vector<std::string> factor_names,
                                   std::vector<FrequencyRow> rows)
    : factor_names_(std::move(factor_names)), rows_(std::move(rows)) {
  validate_rows(factor_names_, rows_);
  if (!std::is_sorted(rows_.begin(), rows_.end(), tuple_less)) {
    throw std::invalid_argument("rows must be in lexicographic tuple order");
  }
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    if (rows_[i - 1].levels == rows_[i].levels) {
      throw std::invalid_argument("duplicate factor-level tuple");
    }
  }
  std::set<std::string> seen(factor_names_.begin(), factor_names_.end());
  if (seen.size() != factor_names_.size()) {
    throw std::invalid_argument("duplicate factor name");
  }
}

FrequencyDataset FrequencyDataset::aggregated(
    std::vector<std::string> factor_names, std::vector<FrequencyRow> rows) {
  validate_rows(factor_names, rows);
  std::stable_sort(rows.begin(), rows.end(), tuple_less);
  std::vector<FrequencyRow> merged;
  for (auto& row : rows) {
    if (!merged.empty() && merged.back().levels == row.levels) {
      merged.back().events += row.events;
      merged.back().exposure += row.exposure;
    } else {
      merged.push_back(std::move(row));
    }
  }
  return FrequencyDataset(std::move(factor_names), std::move(merged));
}

std::size_t FrequencyDataset::factor_index(const std::string& name) const {
  for (std::size_t i = 0; i < factor_names_.size(); ++i) {
    if (factor_names_[i] == name) return i;
  }
  throw std::out_of_range("unknown factor: " + name);
}

std::vector<std::string> FrequencyDataset::levels_of(
    std::size_t factor) const {
  if (factor >= factor_names_.size()) {
    throw std::out_of_range("factor index out of range");
  }
  std::set<std::string> levels;
  for (const auto& row : rows_) levels.insert(row.levels[factor]);
  return {levels.begin(), levels.end()};
}

long long FrequencyDataset::total_events() const {
  long long total = 0;
  for (const auto& row : rows_) total += row.events;
  return total;
}

double FrequencyDataset::total_exposure() const {
  double total = 0;
  for (const auto& row : rows_) total += row.exposure;
  return total;
}

bool FrequencyDataset::operator==(const FrequencyDataset& other) const {
  if (factor_names_ != other.factor_names_) return false;
  if (rows_.size() != other.rows_.size()) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].levels != other.rows_[i].levels) return false;
    if (rows_[i].events != other.rows_[i].events) return false;
    if (rows_[i].exposure != other.rows_[i].exposure) return false;
  }
  return true;
}

}  // namespace medstat
