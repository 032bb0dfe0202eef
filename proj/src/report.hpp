#pragma once

#include <string>
#include <variant>
#include <vector>

#include "config.hpp"

namespace polydisc {

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Gate {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  std::string name;
  ExperimentKind kind = ExperimentKind::norm_table;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<Gate> gates;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  double seconds = 0.0;

  bool passed() const;
};

struct Report {
  nlohmann::ordered_json config;
  std::vector<ExperimentReport> experiments;
  double seconds = 0.0;

  bool passed() const;
  std::size_t failed_gates() const;
};

std::string version_string();

/// Fixed column set of each experiment kind.
const std::vector<std::string>& columns_of(ExperimentKind kind);

std::string to_csv(const ExperimentReport& e);
std::string summary_csv(const Report& r);
/// Full report; the timing block is left out when include_timing is false.
nlohmann::ordered_json to_json(const Report& r, bool include_timing = true);

/// Writes <dir>/<experiment>.csv and summary.csv and/or <dir>/report.json.
std::vector<std::string> emit(const Report& r, const std::string& dir, OutputFormat format);

}  // namespace polydisc
