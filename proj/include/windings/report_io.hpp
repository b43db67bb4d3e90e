#pragma once

// Serialization of experiment reports (JSON) and result tables (CSV).
// Floating values in CSV files carry 6 significant digits plus a hex-float
// column for bit-exact comparison.

#include "windings/verify.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace windings {

std::string format_g6(double v);
// C99 hex-float representation, for example 0x1.999999999999ap-4.
std::string format_hex(double v);

nlohmann::ordered_json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

// Array of reports, 2-space indented, keys in a fixed order. Wall-clock
// runtime is not part of the payload, so equal seeds give equal bytes.
std::string reports_to_json(std::span<const ExperimentReport> reports);
std::vector<ExperimentReport> reports_from_json(const std::string& text);

// {"summary": {...}, "reports": [...]}.
std::string summary_json(std::span<const ExperimentReport> reports);

// Fixed-width human table, one row per check.
std::string format_table(std::span<const ExperimentReport> reports);

// 0 if every verdict is pass, else 4 if any failed, else 3.
int exit_status(std::span<const ExperimentReport> reports);

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::vector<std::string> header);

  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(long long v);
  CsvWriter& cell(std::uint64_t v);
  // Writes the value with 6 significant digits.
  CsvWriter& cell(double v);
  void end_row();

 private:
  std::ostream& os_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

}  // namespace windings
