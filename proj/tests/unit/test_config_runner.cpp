#include <string>

#include "config.hpp"
#include "doctest.h"
#include "report.hpp"
#include "runner.hpp"

using namespace polydisc;

namespace {

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  for (auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config fills in defaults") {
  auto cfg = parse_config(R"({"experiments": [{"name": "n", "kind": "norm-table"}]})");
  REQUIRE(cfg.experiments.size() == 1);
  auto& e = cfg.experiments[0];
  CHECK(e.kind == ExperimentKind::norm_table);
  CHECK(e.params.at("degree") == 16);
  CHECK(e.grid.torus_tol == 1e-6);
  CHECK(cfg.seed == 1);
  CHECK(cfg.echo.contains("experiments"));
  CHECK(cfg.find("n") == &e);
  CHECK(cfg.find("missing") == nullptr);
}

TEST_CASE("hypothesis violations are config errors") {
  auto p = problems_of(R"({"experiments": [{"name": "t", "kind": "theorem-scenario",
      "hypothesis": {"t": 1.5, "s": 1.5}}]})");
  CHECK(any_contains(p, "t ≤ 1 required"));
}

TEST_CASE("every problem is reported") {
  auto p = problems_of(R"({"seed": -3, "experiments": [{"name": "b", "kind": "beta-integral-fit",
      "tol": -1, "per_octave": 0}]})");
  CHECK(p.size() >= 3);
  CHECK(any_contains(p, "tol"));
  CHECK(any_contains(p, "per_octave"));
}

TEST_CASE("unknown keys and kinds are rejected") {
  CHECK(any_contains(problems_of(R"({"experiments": [{"name": "n", "kind": "norm-table", "colour": 1}]})"),
                     "colour"));
  CHECK_FALSE(problems_of(R"({"experiments": [{"name": "n", "kind": "no-such-kind"}]})").empty());
  CHECK_FALSE(problems_of("{not json").empty());
  CHECK_FALSE(problems_of(R"({"experiments": [{"name": "a", "kind": "norm-table"},
      {"name": "a", "kind": "norm-table"}]})").empty());
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS(parallel_for(10, 2, [](std::size_t i) {
    if (i == 7) throw std::runtime_error("boom");
  }));
}

TEST_CASE("runs are deterministic apart from timing") {
  const std::string text = R"({"seed": 5, "experiments": [
      {"name": "n", "kind": "norm-table", "degree": 8,
        "spaces": [{"family": "hardy", "p": 1}, {"family": "mixed-a", "p": 2, "q": 1, "alpha": 0.5}]},
      {"name": "b", "kind": "beta-integral-fit"}]})";
  auto cfg = parse_config(text);
  auto a = to_json(run(cfg, {std::nullopt, 1}), false).dump();
  auto b = to_json(run(cfg, {std::nullopt, 2}), false).dump();
  CHECK(a == b);
  override_seed(cfg, 6);
  auto c = to_json(run(cfg, {std::nullopt, 1}), false).dump();
  CHECK(a != c);
}

TEST_CASE("gates pass on the defaults and fail on an impossible tolerance") {
  auto ok = run(parse_config(R"({"experiments": [{"name": "b", "kind": "beta-integral-fit"},
      {"name": "p", "kind": "parseval-suite", "count": 5}]})"));
  CHECK(ok.passed());
  CHECK(ok.failed_gates() == 0);

  auto bad = run(parse_config(R"({"experiments": [{"name": "b", "kind": "beta-integral-fit",
      "tol": 1e-9}]})"));
  CHECK_FALSE(bad.passed());
  CHECK(bad.failed_gates() >= 1);
  CHECK(to_csv(bad.experiments[0]).find("alpha") != std::string::npos);
}

TEST_CASE("run rejects an unknown experiment name") {
  auto cfg = parse_config(R"({"experiments": [{"name": "b", "kind": "beta-integral-fit"}]})");
  CHECK_THROWS(run(cfg, {std::string("nope"), 1}));
}
