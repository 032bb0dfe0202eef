// polydisc-run: execute the experiments of a config file and write reports.
// Exit status: 0 all gates passed, 1 a gate failed, 2 usage or config error.

#include <cinttypes>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "polydisc/polydisc.h"

namespace {

struct ConfigHandle {
  pd_config* p = nullptr;
  ~ConfigHandle() { pd_config_free(p); }
};

struct ReportHandle {
  pd_report* p = nullptr;
  ~ReportHandle() { pd_report_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run polydisc experiments from a config file"};
  app.set_version_flag("--version", std::string(pd_version()));
  std::string config_path, experiment, out_dir, format;
  std::uint64_t seed = 0;
  bool list = false;
  app.add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--experiment", experiment, "run only the experiment with this name");
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides the config)");
  auto* fmt_opt = app.add_option("--format", format, "csv, json or both")
                      ->check(CLI::IsMember({"csv", "json", "both"}));
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_flag("--list", list, "list the configured experiments and exit");
  CLI11_PARSE(app, argc, argv);

  ConfigHandle cfg;
  if (pd_config_load(config_path.c_str(), &cfg.p) != PD_OK) {
    std::fprintf(stderr, "config error:\n%s\n", pd_last_error());
    return 2;
  }
  if (list) {
    for (size_t i = 0; i < pd_config_experiment_count(cfg.p); ++i)
      std::printf("%s\t%s\n", pd_config_experiment_name(cfg.p, i), pd_config_experiment_kind(cfg.p, i));
    return 0;
  }
  if (*seed_opt) pd_config_set_seed(cfg.p, seed);

  ReportHandle rep;
  if (pd_run(cfg.p, experiment.empty() ? nullptr : experiment.c_str(), 0, &rep.p) != PD_OK) {
    std::fprintf(stderr, "run failed: %s\n", pd_last_error());
    return 2;
  }
  const std::string dir = *out_opt ? out_dir : std::string(pd_config_out_dir(cfg.p));
  pd_format f = pd_config_format(cfg.p);
  if (*fmt_opt) f = format == "csv" ? PD_FORMAT_CSV : format == "json" ? PD_FORMAT_JSON : PD_FORMAT_BOTH;
  if (pd_report_emit(rep.p, dir.c_str(), f) != PD_OK) {
    std::fprintf(stderr, "cannot write report: %s\n", pd_last_error());
    return 2;
  }

  const size_t n = pd_report_gate_count(rep.p);
  for (size_t i = 0; i < n; ++i)
    std::printf("%-4s %s  %s\n", pd_report_gate_passed(rep.p, i) ? "ok" : "FAIL", pd_report_gate_name(rep.p, i),
                pd_report_gate_detail(rep.p, i));
  const size_t failed = pd_report_failed_count(rep.p);
  std::printf("%zu/%zu gates passed; report in %s\n", n - failed, n, dir.c_str());
  return failed == 0 ? 0 : 1;
}
