#include "medstat/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace medstat {

namespace {

[[noreturn]] void fail(const std::string& origin, std::size_t line,
                       const std::string& message) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " +
                           message);
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_fields(const std::string& line,
                                      const std::string& origin,
                                      std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  std::size_t i = 0;
  while (true) {
    field.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field += '"';
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          field += line[i++];
        }
      }
      if (!closed) fail(origin, line_no, "unterminated quoted field");
      fields.push_back(field);
    } else {
      while (i < line.size() && line[i] != ',') field += line[i++];
      fields.push_back(trim(field));
    }
    if (i >= line.size()) break;
    if (line[i] != ',') fail(origin, line_no, "malformed quoted field");
    ++i;
    if (i == line.size()) {
      fields.emplace_back();
      break;
    }
  }
  return fields;
}

long long parse_events(const std::string& s, const std::string& origin,
                       std::size_t line_no) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(origin, line_no, "malformed event count '" + s + "'");
  }
  if (v < 0) fail(origin, line_no, "event count must be nonnegative");
  return v;
}

double parse_exposure(const std::string& s, const std::string& origin,
                      std::size_t line_no) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(origin, line_no, "malformed exposure '" + s + "'");
  }
  if (!(v > 0)) fail(origin, line_no, "exposure must be positive");
  return v;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

}  // namespace

FrequencyDataset parse_csv(std::istream& in, const CsvSchema& schema,
                           const std::string& origin) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!blank(line)) return true;
    }
    return false;
  };

  if (!next_line()) fail(origin, 1, "empty input");
  const std::vector<std::string> header = split_fields(line, origin, line_no);

  std::size_t events_col = header.size();
  std::size_t exposure_col = header.size();
  std::vector<std::string> factor_names;
  std::vector<std::size_t> factor_cols;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == schema.events_column) {
      if (events_col != header.size()) {
        fail(origin, line_no, "duplicate column '" + header[j] + "'");
      }
      events_col = j;
    } else if (header[j] == schema.exposure_column) {
      if (exposure_col != header.size()) {
        fail(origin, line_no, "duplicate column '" + header[j] + "'");
      }
      exposure_col = j;
    } else {
      if (header[j].empty()) fail(origin, line_no, "empty column name");
      factor_names.push_back(header[j]);
      factor_cols.push_back(j);
    }
  }
  if (events_col == header.size()) {
    fail(origin, line_no,
         "missing required column '" + schema.events_column + "'");
  }

  std::vector<FrequencyRow> rows;
  while (next_line()) {
    const std::vector<std::string> fields =
        split_fields(line, origin, line_no);
    if (fields.size() != header.size()) {
      fail(origin, line_no,
           "expected " + std::to_string(header.size()) + " fields, got " +
               std::to_string(fields.size()));
    }
    FrequencyRow row;
    row.levels.reserve(factor_cols.size());
    for (std::size_t c : factor_cols) row.levels.push_back(fields[c]);
    row.events = parse_events(fields[events_col], origin, line_no);
    row.exposure = exposure_col != header.size()
                       ? parse_exposure(fields[exposure_col], origin, line_no)
                       : schema.default_exposure;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(origin, line_no, "no data rows");
  return FrequencyDataset::aggregated(std::move(factor_names),
                                      std::move(rows));
}

FrequencyDataset ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open file");
  }
  return parse_csv(in, schema, path);
}

}  // namespace medstat
