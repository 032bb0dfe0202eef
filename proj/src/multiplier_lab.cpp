#include "polydisc/multiplier_lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace polydisc {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "; " : "") + v[i];
  return out;
}


}  // namespace

std::vector<std::string> TheoremHypothesis::violations() const {
  using F = SpaceSpec::Family;
  std::vector<std::string> v;
  if (!(t <= 1.0)) v.emplace_back("t ≤ 1 required");
  if (!(t > 0.0)) v.emplace_back("t > 0 required");
  if (!(t / 2.0 < s && s <= t)) v.emplace_back("t/2 < s ≤ t required");
  if (!(p > 0.0 && q > 0.0 && std::max(p, q) <= s)) v.emplace_back("0 < max(p,q) ≤ s required");
  if (!(beta + 1.0 / t < alpha + 1.0 / p)) v.emplace_back("β + 1/t < α + 1/p required");
  if (!(alpha + 1.0 / p < 2.0 / t)) v.emplace_back("α + 1/p < 2/t required");
  if (!(alpha > 0.0)) v.emplace_back("α > 0 required");
  if (!(beta > 0.0)) v.emplace_back("β > 0 required");
  if (!(m >= 1)) v.emplace_back("m ∈ N required");
  if (!(m > 2.0 / t - 1.0)) v.emplace_back("m > 2/t - 1 required");
  if (source != F::triebel_f && source != F::mixed_a) v.emplace_back("source family must be triebel-f or mixed-a");
  if (target != F::triebel_f && target != F::mixed_a) v.emplace_back("target family must be triebel-f or mixed-a");
  if (dim < 1 || dim > kMaxDim) v.emplace_back("dimension out of range");
  return v;
}

void TheoremHypothesis::validate() const {
  const auto v = violations();
  if (!v.empty()) fail(ErrorCode::domain, "hypothesis: " + join(v));
}

double TheoremHypothesis::tau() const { return m + 1.0 - 1.0 / p + beta - alpha; }

double TheoremHypothesis::threshold_gamma() const { return tau() - m - 1.0 + 1.0 / t; }

SpaceSpec TheoremHypothesis::source_spec() const {
  return source == SpaceSpec::Family::triebel_f ? SpaceSpec::triebel_f(p, q, alpha)
                                                : SpaceSpec::mixed_a(p, q, alpha);
}

SpaceSpec TheoremHypothesis::target_spec() const {
  return target == SpaceSpec::Family::triebel_f ? SpaceSpec::triebel_f(t, s, beta)
                                                : SpaceSpec::mixed_a(t, s, beta);
}

ConditionResult condition_profile(const CoeffFn& g, int m, double t, double tau,
                                  const ProfileWindow& window, int depth, const GridOptions& opts,
                                  double flat_slope) {
  if (window.level_hi - window.level_lo < 3 || window.level_lo < 0)
    fail(ErrorCode::invalid_argument, "profile window must span at least 4 levels");
  ConditionResult res;
  res.profile = weighted_sup_profile(g, m, t, tau, depth, opts);
  res.sup = res.profile.sup;
  if (res.sup == 0.0) return res;
  std::vector<double> c, v;
  for (const auto& pt : res.profile.points) {
    if (!pt.diagonal || pt.level < window.level_lo || pt.level > window.level_hi) continue;
    c.push_back(std::exp2(-pt.level));
    v.push_back(pt.value);
  }
  const FitResult fit = fit_power_law(c, v);
  res.slope = fit.slope;
  res.flat = fit.slope <= flat_slope;
  return res;
}

namespace {

// Generating function accurate up to radius r_max after m differentiations.
CoeffFn generating_for_profile(const MultiplierSeq& c, double r_max, int m) {
  if (const auto* k = std::get_if<MultiplierSeq::Kernel>(&c.rule())) {
    Degree d(static_cast<std::size_t>(c.dim()));
    for (std::size_t j = 0; j < d.size(); ++j)
      d[j] = kernel_degree(std::abs(k->w[j]), k->beta + m, r_max, 1e-12);
    return c.materialize(d);
  }
  if (std::holds_alternative<MultiplierSeq::Ones>(c.rule())) {
    Degree d(static_cast<std::size_t>(c.dim()), kernel_degree(r_max, static_cast<double>(m), 1.0, 1e-12));
    return c.materialize(d);
  }
  return c.generating_function(r_max);
}

}  // namespace

ConditionResult condition_value(const MultiplierSeq& c, const TheoremHypothesis& hyp,
                                const ProfileWindow& window, const GridOptions& opts) {
  hyp.validate();
  if (c.dim() != hyp.dim) fail(ErrorCode::invalid_argument, "multiplier dimension differs from hypothesis");
  const int depth = window.level_hi + 2;
  const CoeffFn g = generating_for_profile(c, 1.0 - std::exp2(-depth), hyp.m);
  return condition_profile(g, hyp.m, hyp.t, hyp.tau(), window, depth, opts);
}

OperatorRatio operator_ratio(const MultiplierSeq& c, const CoeffFn& f, const SpaceSpec& source,
                             const SpaceSpec& target, const GridOptions& opts) {
  const CoeffFn h = hadamard(c, f);
  const NormResult num = space_norm(h, target, opts);
  const NormResult den = space_norm(f, source, opts);
  return {Ratio::of(num.value, den.value), num.converged && den.converged};
}

OperatorRatio operator_ratio(const MultiplierSeq& c, const CoeffFn& f,
                             const TheoremHypothesis& hyp, const GridOptions& opts) {
  hyp.validate();
  return operator_ratio(c, f, hyp.source_spec(), hyp.target_spec(), opts);
}

std::size_t probe_degree(const MultiplierSeq& c, double w_abs, double order) {
  std::size_t d = kernel_degree(w_abs, order);
  if (const auto* k = std::get_if<MultiplierSeq::Kernel>(&c.rule())) {
    double wc = 0.0;
    for (const auto& x : k->w) wc = std::max(wc, std::abs(x));
    d = std::max(d, kernel_degree(w_abs * wc, order + k->beta));
  }
  return d;
}

NecessityResult kernel_ratio_probe(const MultiplierSeq& c, const SpaceSpec& source,
                                   const SpaceSpec& target, int dim, double order,
                                   const ProfileWindow& window, const GridOptions& opts) {
  if (window.level_hi - window.level_lo < 3 || window.level_lo < 1)
    fail(ErrorCode::invalid_argument, "probe window must span at least 4 levels starting at 1");
  if (c.dim() != dim) fail(ErrorCode::invalid_argument, "multiplier dimension differs from probe dimension");
  NecessityResult res;
  std::vector<double> positive;
  for (int l = window.level_lo; l <= window.level_hi; ++l) {
    const double cl = std::exp2(-l);
    const double w = 1.0 - cl;
    const std::vector<cplx> wv(static_cast<std::size_t>(dim), cplx(w, 0.0));
    const Degree deg(static_cast<std::size_t>(dim), probe_degree(c, w, order));
    const CoeffFn f = bergman_kernel(wv, order, deg);
    const OperatorRatio r = operator_ratio(c, f, source, target, opts);
    res.converged = res.converged && r.converged && r.ratio.finite();
    res.complements.push_back(cl);
    res.ratios.push_back(r.ratio);
    positive.push_back(r.ratio.value);
  }
  const double first = positive.front();
  const double top = *std::max_element(positive.begin(), positive.end());
  const bool all_zero = top == 0.0;
  if (all_zero) return res;
  if (std::any_of(positive.begin(), positive.end(), [](double x) { return !(x > 0.0); })) {
    res.converged = false;
    return res;
  }
  res.growth_factor = top / first;
  res.fit = fit_power_law(res.complements, positive);
  return res;
}

NecessityResult necessity_probe(const MultiplierSeq& c, const TheoremHypothesis& hyp,
                                const ProfileWindow& window, const GridOptions& opts) {
  hyp.validate();
  return kernel_ratio_probe(c, hyp.source_spec(), hyp.target_spec(), hyp.dim, hyp.m, window, opts);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent_bounded: return "consistent-bounded";
    case Verdict::consistent_unbounded: return "consistent-unbounded";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

MultiplierSeq GSpec::multiplier(int dim, double w_g) const {
  switch (kind) {
    case Kind::kernel: return MultiplierSeq::kernel(std::vector<cplx>(static_cast<std::size_t>(dim), w_g), gamma);
    case Kind::constant: return MultiplierSeq::explicit_table(CoeffFn::constant(dim, value));
    case Kind::zero: return MultiplierSeq::zero(dim);
  }
  return MultiplierSeq::zero(dim);
}

Verdict decide(double K_slope, double necessity_slope, double growth, bool flagged,
               const VerdictRule& rule) {
  if (flagged) return Verdict::inconclusive;
  if (K_slope <= rule.flat_slope && necessity_slope <= rule.flat_slope && growth < rule.growth_factor)
    return Verdict::consistent_bounded;
  if (K_slope > rule.flat_slope && necessity_slope > rule.flat_slope) return Verdict::consistent_unbounded;
  return Verdict::inconclusive;
}

ScenarioRow scenario_row(const TheoremHypothesis& hyp, const GSpec& g, const ScenarioOptions& so,
                         const GridOptions& opts) {
  hyp.validate();
  const double w_g = 1.0 - std::exp2(-so.w_g_level);
  const MultiplierSeq c = g.multiplier(hyp.dim, w_g);
  ScenarioRow row;
  row.g_id = g.id;
  if (g.kind == GSpec::Kind::kernel) {
    row.gamma = g.gamma;
    row.excess = g.gamma - hyp.threshold_gamma();
  }
  std::vector<std::string> flags;

  const ConditionResult cond = condition_value(c, hyp, so.window, opts);
  row.K = cond.sup;
  row.K_slope = cond.slope;

  const NecessityResult nec = necessity_probe(c, hyp, so.window, opts);
  row.necessity_slope = nec.fit.slope;
  row.growth_factor = nec.growth_factor;
  if (!nec.converged) flags.emplace_back("necessity probe unconverged");
  for (const auto& r : nec.ratios) {
    row.probe_ratios.push_back(r.value);
    row.max_ratio = std::max(row.max_ratio, r.value);
  }

  const Degree deg(static_cast<std::size_t>(hyp.dim), so.corpus_degree);
  for (int i = 0; i < so.corpus_count; ++i) {
    const CoeffFn f = random_poly(so.seed + static_cast<std::uint64_t>(i), hyp.dim, deg);
    const OperatorRatio r = operator_ratio(c, f, hyp, opts);
    if (!r.converged || !r.ratio.finite()) flags.emplace_back("corpus ratio " + std::to_string(i) + " flagged");
    row.corpus_max_ratio = std::max(row.corpus_max_ratio, r.ratio.value);
  }
  row.max_ratio = std::max(row.max_ratio, row.corpus_max_ratio);
  if (!std::isfinite(row.K)) flags.emplace_back("condition value not finite");

  row.flags = join(flags);
  row.verdict = decide(row.K_slope, row.necessity_slope, row.growth_factor, !flags.empty(), so.rule);
  return row;
}

std::vector<ScenarioRow> theorem_scenario(const TheoremHypothesis& hyp, const std::vector<GSpec>& family,
                                          const ScenarioOptions& so, const GridOptions& opts) {
  hyp.validate();
  std::vector<ScenarioRow> rows;
  rows.reserve(family.size());
  for (const auto& g : family) rows.push_back(scenario_row(hyp, g, so, opts));
  return rows;
}

std::vector<GSpec> kernel_sweep(double threshold, double step, int j_lo, int j_hi) {
  if (!(step > 0.0)) fail(ErrorCode::invalid_argument, "sweep step must be positive");
  std::vector<GSpec> out;
  for (int j = j_lo; j <= j_hi; ++j) {
    GSpec g;
    g.kind = GSpec::Kind::kernel;
    g.gamma = threshold + step * j;
    if (!(g.gamma > -1.0)) continue;
    std::ostringstream id;
    id << "kernel[" << (j >= 0 ? "+" : "") << j << "]";
    g.id = id.str();
    out.push_back(g);
  }
  return out;
}

std::vector<std::string> PropositionParams::violations() const {
  std::vector<std::string> out;
  if (!(v > 0.0 && v <= p)) out.emplace_back("0 < v ≤ p required");
  if (!(p > 0.0 && p < kInfinity)) out.emplace_back("0 < p < inf required");
  if (!(s > 0.0)) out.emplace_back("s > 0 required");
  if (!(m >= 0)) out.emplace_back("m ≥ 0 required");
  if (!(m > 1.0 / p - 1.0 - s)) out.emplace_back("m > 1/p - 1 - s required");
  if (dim < 1 || dim > kMaxDim) out.emplace_back("dimension out of range");
  return out;
}

void PropositionParams::validate() const {
  const auto out = violations();
  if (!out.empty()) fail(ErrorCode::domain, "proposition: " + join(out));
}

PropositionResult proposition_probe(const MultiplierSeq& c, const PropositionParams& prm,
                                    const ProfileWindow& window, const GridOptions& opts) {
  prm.validate();
  if (c.dim() != prm.dim) fail(ErrorCode::invalid_argument, "multiplier dimension differs from probe dimension");
  PropositionResult out;
  const int depth = window.level_hi + 2;
  const CoeffFn g = generating_for_profile(c, 1.0 - std::exp2(-depth), prm.m);
  out.condition = condition_profile(g, prm.m, prm.p, prm.tau(), window, depth, opts);
  out.probe = kernel_ratio_probe(c, SpaceSpec::hardy(prm.v), SpaceSpec::limit_f(prm.p, prm.s), prm.dim,
                                 prm.m, window, opts);
  return out;
}

}  // namespace polydisc
