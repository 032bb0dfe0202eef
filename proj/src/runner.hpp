#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "config.hpp"
#include "report.hpp"

namespace polydisc {

struct RunOptions {
  std::optional<std::string> only;      // run a single experiment by name
  int workers = 0;                      // 0: POLYDISC_WORKERS or 1
};

/// Bounded worker count from POLYDISC_WORKERS (default 1).
int worker_count_from_env();

/// Replaces the global seed (and its echo) before a run.
void override_seed(RunConfig& cfg, std::uint64_t seed);

ExperimentReport run_experiment(const ExperimentConfig& e, std::uint64_t seed, int workers);
Report run(const RunConfig& cfg, const RunOptions& opts = {});

/// Calls fn(i) for i in [0,n) on up to `workers` threads. Results are
/// written by index so the output order never depends on scheduling.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace polydisc
