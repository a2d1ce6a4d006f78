#include "condwalk/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "condwalk/errors.hpp"

namespace condwalk {

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw ConfigError("CSV header must not be empty");
  row(header_);
}

CsvTable& CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw ConfigError("CSV row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += csv_field(cells[i]);
  }
  text_ += '\n';
  return *this;
}

CsvTable comparison_table(const std::vector<ComparisonReport>& reports) {
  CsvTable t(kComparisonHeader);
  for (const auto& r : reports) {
    const auto& e = r.estimate;
    t.row({r.case_name, csv_number(e.mean()), csv_number(e.std_error()), csv_number(e.ci_lo()), csv_number(e.ci_hi()),
           csv_number(r.exact.value), csv_number(r.exact.sys_lo), csv_number(r.exact.sys_hi),
           csv_number(r.truncation_bound), csv_number(r.z_score)});
  }
  return t;
}

nlohmann::json to_json(const Estimate& e) {
  return {{"kind", e.kind() == Estimate::Kind::Event ? "event" : "real"},
          {"n_trials", e.trials()},
          {"successes", e.successes()},
          {"undecided", e.undecided()},
          {"mean", e.mean()},
          {"stderr", e.std_error()},
          {"ci95_lo", e.ci_lo()},
          {"ci95_hi", e.ci_hi()}};
}

nlohmann::json to_json(const BracketedValue& b) {
  return {{"value", b.value}, {"sys_lo", b.sys_lo}, {"sys_hi", b.sys_hi}};
}

nlohmann::json to_json(const ComparisonReport& r) {
  return {{"case", r.case_name},
          {"estimate", to_json(r.estimate)},
          {"exact", to_json(r.exact)},
          {"trunc_bound", r.truncation_bound},
          {"z", r.z_score},
          {"horizon_warning", r.horizon_warning}};
}

Gate make_gate(std::string name, double value, std::string relation, double threshold, double threshold_hi) {
  Gate g{std::move(name), value, std::move(relation), threshold, threshold_hi, false};
  if (std::isnan(value)) return g;
  if (g.relation == "<=") g.passed = value <= threshold;
  else if (g.relation == ">=") g.passed = value >= threshold;
  else if (g.relation == "<") g.passed = value < threshold;
  else if (g.relation == ">") g.passed = value > threshold;
  else if (g.relation == "==") g.passed = value == threshold;
  else if (g.relation == "in") g.passed = value >= threshold && value <= threshold_hi;
  else throw ConfigError("unknown gate relation " + g.relation);
  return g;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace condwalk
