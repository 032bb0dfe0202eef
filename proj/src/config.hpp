#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polydisc/error.hpp"
#include "polydisc/quadrature.hpp"
#include "json.hpp"

namespace polydisc {

enum class ExperimentKind {
  norm_table,
  parseval_suite,
  pairing_check,
  embedding_sweep,
  ds_sweep,
  beta_integral_fit,
  lemma3_fit,
  theorem_scenario,
  proposition_probe,
};

std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& name);
const std::vector<ExperimentKind>& all_experiment_kinds();

enum class OutputFormat { csv, json, both };
OutputFormat parse_output_format(const std::string& name);
std::string to_string(OutputFormat f);

struct ExperimentConfig {
  std::string name;
  ExperimentKind kind = ExperimentKind::norm_table;
  GridOptions grid;
  /// Kind-specific parameters, validated and with every default filled in.
  nlohmann::ordered_json params;
};

struct RunConfig {
  std::uint64_t seed = 1;
  GridOptions grid;
  std::string out_dir = "polydisc-out";
  OutputFormat format = OutputFormat::both;
  std::vector<ExperimentConfig> experiments;
  /// The validated configuration with defaults, echoed into reports.
  nlohmann::ordered_json echo;

  const ExperimentConfig* find(const std::string& name) const;
};

/// Raised with every validation problem found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Default parameter object of one experiment kind (the documented defaults).
nlohmann::ordered_json default_params(ExperimentKind kind);

}  // namespace polydisc
