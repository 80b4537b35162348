#pragma once

#include <string>
#include <vector>

namespace medstat {

// One aggregated cell of a frequency table: a tuple of factor levels with
// its event count and exposure.
struct FrequencyRow {
  std::vector<std::string> levels;
  double exposure = 1.0;
  long long events = 0;
};

// Rectangular frequency data keyed by factor-level tuples. Rows are held
// in lexicographic order of their level tuples and tuples are unique.
class FrequencyDataset {
 public:
  FrequencyDataset(std::vector<std::string> factor_names,
                   std::vector<FrequencyRow> rows);

  // Sorts rows lexicographically and merges duplicate tuples, summing
  // events and exposure.
  static FrequencyDataset aggregated(std::vector<std::string> factor_names,
                                     std::vector<FrequencyRow> rows);

  const std::vector<std::string>& factor_names() const {
    return factor_names_;
  }
  const std::vector<FrequencyRow>& rows() const { return rows_; }

  std::size_t factor_index(const std::string& name) const;

  // Sorted unique levels observed for one factor.
  std::vector<std::string> levels_of(std::size_t factor) const;

  long long total_events() const;
  double total_exposure() const;

  bool operator==(const FrequencyDataset& other) const;

 private:
  std::vector<std::string> factor_names_;
  std::vector<FrequencyRow> rows_;
};

}  // namespace medstat
