#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polydisc/analysis.hpp"
#include "polydisc/multiplier.hpp"
#include "polydisc/norms.hpp"

namespace polydisc {

/// Source F^{p,q}_alpha or A^{p,q}_alpha, target A^{t,s}_beta or F^{t,s}_beta.
struct TheoremHypothesis {
  double p = 1.0, q = 1.0, alpha = 0.5;
  double t = 1.0, s = 1.0, beta = 0.25;
  int m = 2;
  SpaceSpec::Family source = SpaceSpec::Family::triebel_f;
  SpaceSpec::Family target = SpaceSpec::Family::mixed_a;
  int dim = 1;

  std::vector<std::string> violations() const;
  void validate() const;

  /// Weight exponent m + 1 - 1/p + beta - alpha of the multiplier condition.
  double tau() const;
  /// Kernel exponent gamma at which g = (1-wz)^{-(gamma+1)} stops satisfying
  /// the condition as w -> 1.
  double threshold_gamma() const;
  SpaceSpec source_spec() const;
  SpaceSpec target_spec() const;
};

struct ProfileWindow {
  int level_lo = 4;
  int level_hi = 10;
};

struct ConditionResult {
  SupProfile profile;
  double sup = 0.0;
  double slope = 0.0;  // fitted growth of the profile over the window
  bool flat = true;
};

/// sup_r M_t(D^m g, r)(1-r)^tau on the ladder; slope fitted over the window.
ConditionResult condition_profile(const CoeffFn& g, int m, double t, double tau,
                                  const ProfileWindow& window, int depth,
                                  const GridOptions& opts = {}, double flat_slope = 0.05);

/// The multiplier condition for hyp, with g the generating function of c.
ConditionResult condition_value(const MultiplierSeq& c, const TheoremHypothesis& hyp,
                                const ProfileWindow& window = {}, const GridOptions& opts = {});

struct OperatorRatio {
  Ratio ratio;
  bool converged = true;
};

/// ||M_c f||_target / ||f||_source.
OperatorRatio operator_ratio(const MultiplierSeq& c, const CoeffFn& f, const SpaceSpec& source,
                             const SpaceSpec& target, const GridOptions& opts = {});
OperatorRatio operator_ratio(const MultiplierSeq& c, const CoeffFn& f,
                             const TheoremHypothesis& hyp, const GridOptions& opts = {});

/// Degree for the kernel test function (1-wz)^{-(order+1)} large enough that
/// M_c applied to it keeps the truncation tail small.
std::size_t probe_degree(const MultiplierSeq& c, double w_abs, double order);

struct NecessityResult {
  FitResult fit;
  std::vector<double> complements;
  std::vector<Ratio> ratios;
  double growth_factor = 1.0;  // max ratio / first ratio along the ladder
  bool converged = true;
};

/// Ratios along the kernel test family f_w = (1-wz)^{-(order+1)}, w on the
/// diagonal at 1 - 2^-l.
NecessityResult kernel_ratio_probe(const MultiplierSeq& c, const SpaceSpec& source,
                                   const SpaceSpec& target, int dim, double order,
                                   const ProfileWindow& window, const GridOptions& opts = {});

NecessityResult necessity_probe(const MultiplierSeq& c, const TheoremHypothesis& hyp,
                                const ProfileWindow& window = {}, const GridOptions& opts = {});

enum class Verdict { consistent_bounded, consistent_unbounded, inconclusive };
std::string to_string(Verdict v);

struct VerdictRule {
  double flat_slope = 0.05;
  double growth_factor = 3.0;
};

/// One member of the g-family of a scenario.
struct GSpec {
  enum class Kind { kernel, constant, zero };
  Kind kind = Kind::kernel;
  double gamma = 0.0;   // kernel: g = (1 - w z)^{-(gamma+1)}
  double value = 1.0;   // constant
  std::string id;

  MultiplierSeq multiplier(int dim, double w_g) const;
};

struct ScenarioOptions {
  ProfileWindow window;
  double w_g_level = 16.0;  // w_g = 1 - 2^-level
  int corpus_count = 8;
  std::size_t corpus_degree = 16;
  std::uint64_t seed = 1;
  VerdictRule rule;
};

struct ScenarioRow {
  std::string g_id;
  std::optional<double> gamma;
  std::optional<double> excess;  // gamma - threshold for kernel members
  double K = 0.0;
  double K_slope = 0.0;
  double max_ratio = 0.0;
  double corpus_max_ratio = 0.0;
  double necessity_slope = 0.0;
  double growth_factor = 1.0;
  std::vector<double> probe_ratios;
  Verdict verdict = Verdict::inconclusive;
  std::string flags;  // why a row is inconclusive, empty otherwise
};

Verdict decide(double K_slope, double necessity_slope, double growth, bool flagged,
               const VerdictRule& rule);

ScenarioRow scenario_row(const TheoremHypothesis& hyp, const GSpec& g, const ScenarioOptions& so,
                         const GridOptions& opts = {});
std::vector<ScenarioRow> theorem_scenario(const TheoremHypothesis& hyp, const std::vector<GSpec>& family,
                                          const ScenarioOptions& so, const GridOptions& opts = {});

/// Kernel g-family gamma* + step * j, j = j_lo..j_hi.
std::vector<GSpec> kernel_sweep(double threshold, double step, int j_lo, int j_hi);

struct PropositionParams {
  double v = 2.0, p = 2.0, s = 0.5;
  int m = 1;
  int dim = 1;

  std::vector<std::string> violations() const;
  void validate() const;
  double tau() const { return m + 1.0 + s - 1.0 / p; }
  double threshold_gamma() const { return tau() - m - 1.0 + 1.0 / p; }
};

struct PropositionResult {
  ConditionResult condition;
  NecessityResult probe;
};

/// Growth condition with tau = m+1+s-1/p and the H^v -> F^{p,inf,s} ratio probe.
PropositionResult proposition_probe(const MultiplierSeq& c, const PropositionParams& prm,
                                    const ProfileWindow& window = {}, const GridOptions& opts = {});

}  // namespace polydisc
