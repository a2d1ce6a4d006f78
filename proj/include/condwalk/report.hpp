#pragma once

#include <filesystem>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "condwalk/montecarlo.hpp"
#include "json.hpp"

namespace condwalk {

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip-safe enough rendering for reports: printf "%.12g".
std::string csv_number(double v);

/// RFC-4180 field: quoted when it contains a comma, quote, CR or LF.
std::string csv_field(const std::string& s);

/// Accumulates CSV text (header first, '\n' line ends, UTF-8).
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(const std::vector<std::string>& cells);
  std::size_t columns() const { return header_.size(); }
  const std::string& text() const { return text_; }

 private:
  std::vector<std::string> header_;
  std::string text_;
};

inline const std::vector<std::string> kComparisonHeader{"case",  "mean",   "stderr", "ci_lo",       "ci_hi",
                                                         "exact", "sys_lo", "sys_hi", "trunc_bound", "z"};

CsvTable comparison_table(const std::vector<ComparisonReport>& reports);

nlohmann::json to_json(const Estimate& e);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const BracketedValue& b);

/// One pass/fail check of an experiment, with the raw number it was made on.
struct Gate {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<=", ">=", "<", ">", "==", "in"
  double threshold = 0.0;
  double threshold_hi = 0.0;  // upper end for "in"
  bool passed = false;
};

Gate make_gate(std::string name, double value, std::string relation, double threshold, double threshold_hi = 0.0);

/// Writes text to a file, creating parent directories. Throws ConfigError on
/// I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace condwalk
