#include "medstat/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace medstat {

namespace {

bool needs_quoting(const std::string& s) {
  if (s.empty()) return false;
  if (s.front() == ' ' || s.back() == ' ') return true;
  return s.find_first_of(",\"\n") != std::string::npos;
}

std::string csv_field(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::ordered_json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string fmt_full(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt_sig(double v, int significant) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

std::string fmt_stat(double v) { return fmt_sig(v, 6); }

std::string fmt_p(double v) { return fmt_sig(v, 4); }

std::string to_canonical_csv(const FrequencyDataset& data) {
  std::string out;
  for (const auto& name : data.factor_names()) {
    out += csv_field(name);
    out += ',';
  }
  out += "exposure,events\n";
  for (const auto& row : data.rows()) {
    for (const auto& level : row.levels) {
      out += csv_field(level);
      out += ',';
    }
    out += fmt_full(row.exposure);
    out += ',';
    out += std::to_string(row.events);
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json ReportDocument::to_json() const {
  nlohmann::ordered_json doc;
  doc["analysis"] = analysis;
  doc["inputs_digest"] = inputs_digest;
  doc["parameters"] = parameters;
  doc["results"] = results;
  doc["warnings"] = warnings;
  return doc;
}

}  // namespace medstat
