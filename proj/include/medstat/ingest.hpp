#pragma once

#include <iosfwd>
#include <string>

#include "medstat/dataset.hpp"

namespace medstat {

// Column conventions for CSV ingest: `events_column` is required in the
// input, `exposure_column` is optional and defaults to default_exposure
// per record; every other column is treated as a factor.
struct CsvSchema {
  std::string events_column = "events";
  std::string exposure_column = "exposure";
  double default_exposure = 1.0;
};

// Parses header-first CSV (UTF-8, comma delimiter, double-quote quoting)
// and aggregates records by factor tuple: events and exposures summed,
// rows in lexicographic tuple order. `origin` names the stream in error
// messages, which carry 1-based line numbers ("origin:line: message").
FrequencyDataset parse_csv(std::istream& in, const CsvSchema& schema,
                           const std::string& origin);

FrequencyDataset ingest_csv(const std::string& path,
                            const CsvSchema& schema = {});

}  // namespace medstat
