#include "polydisc/analysis.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "math_util.hpp"
#include "polydisc/torus.hpp"

namespace polydisc {

Ratio Ratio::of(double numerator, double denominator) {
  Ratio r;
  r.numerator = numerator;
  r.denominator = denominator;
  if (numerator == 0.0 && denominator == 0.0) {
    r.degenerate_zero = true;
    return r;
  }
  r.value = denominator == 0.0 ? std::numeric_limits<double>::infinity() : numerator / denominator;
  return r;
}

std::string Ratio::tag() const {
  if (degenerate_zero) return "degenerate-zero";
  return std::isfinite(value) ? "ok" : "infinite";
}

void RatioReport::add(std::string id, Ratio r) {
  if (!r.degenerate_zero && (arg_max.empty() || r.value > max_ratio)) {
    max_ratio = r.value;
    arg_max = id;
  }
  cases.push_back({std::move(id), r});
}

namespace {

void check_radius(std::span<const double> r, int dim) {
  if (static_cast<int>(r.size()) != dim)
    fail(ErrorCode::invalid_argument, "radius vector has " + std::to_string(r.size()) +
                                          " entries, function has dimension " + std::to_string(dim));
  for (double x : r)
    if (!(x >= 0.0 && x < 1.0)) fail(ErrorCode::domain, "radius entries must lie in [0,1)");
}

// Visits the tensor product of per-variable rules.
template <class Visit>
void for_each_node(const std::vector<QuadRule>& rules, Visit&& visit) {
  const std::size_t n = rules.size();
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    visit(std::span<const std::size_t>(idx));
    std::size_t j = n;
    while (j > 0) {
      --j;
      if (++idx[j] < rules[j].size()) break;
      idx[j] = 0;
      if (j == 0) return;
    }
    if (n == 0) return;
  }
}

Degree joint_degree(const CoeffFn& f, const CoeffFn& g) {
  if (f.dim() != g.dim()) fail(ErrorCode::invalid_argument, "pairing: dimensions differ");
  Degree d(f.degree());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = std::max(d[j], g.degree()[j]);
  return d;
}

}  // namespace

cplx lp_pairing_lhs(const CoeffFn& f, const CoeffFn& g, std::span<const double> r,
                    const GridOptions& opts) {
  check_radius(r, f.dim());
  const TorusSize grid = torus_size(joint_degree(f, g), opts);
  const auto fv = evaluate_torus_grid(f, r, grid);
  const auto gv = evaluate_torus_grid(g, r, grid);
  cplx acc = 0.0;
  for (std::size_t l = 0; l < gv.size(); ++l) acc += fv[conjugate_grid_index(l, grid)] * gv[l];
  return acc / static_cast<double>(gv.size());
}

std::string to_string(PairingVariant v) {
  return v == PairingVariant::as_stated ? "as-stated" : "proof-form";
}

PairingVariant parse_pairing_variant(const std::string& name) {
  if (name == "as-stated") return PairingVariant::as_stated;
  if (name == "proof-form") return PairingVariant::proof_form;
  fail(ErrorCode::invalid_argument, "unknown pairing variant '" + name + "'");
}

PairingShape pairing_shape(double alpha, PairingVariant v) {
  if (!(alpha > 0.0)) fail(ErrorCode::domain, "pairing: alpha > 0 required");
  if (v == PairingVariant::as_stated) return {alpha, alpha + 1.0};
  return {alpha - 1.0, alpha};
}

cplx lp_pairing_rhs(const CoeffFn& f, const CoeffFn& g, std::span<const double> r, double alpha,
                    PairingVariant v, const GridOptions& opts) {
  check_radius(r, f.dim());
  const auto [e, order] = pairing_shape(alpha, v);
  const int n = f.dim();
  const Degree deg = joint_degree(f, g);
  const TorusSize grid = torus_size(deg, opts);
  const CoeffFn dg = frac_derivative(g, order);
  const auto fv = evaluate_torus_grid(f, r, grid);
  TorusEvaluator ev(dg, grid);

  // R = r rho turns (r^2 - R^2)^e R dR into r^{2e+2} (1-rho)^e rho (1+rho)^e d rho.
  const int panels = opts.radial_panels >= 0 ? opts.radial_panels : auto_radial_panels(f.max_degree());
  const QuadRule rule = radial_rule(e, opts.radial_points, panels);
  std::vector<double> smooth(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i)
    smooth[i] = rule.weights[i] * rule.nodes[i] * std::pow(1.0 + rule.nodes[i], e);
  const std::vector<QuadRule> rules(static_cast<std::size_t>(n), rule);

  std::vector<std::size_t> conj(fv.size());
  for (std::size_t l = 0; l < conj.size(); ++l) conj[l] = conjugate_grid_index(l, grid);

  std::vector<double> radius(static_cast<std::size_t>(n));
  cplx acc = 0.0;
  for_each_node(rules, [&](std::span<const std::size_t> idx) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) {
      const auto i = idx[static_cast<std::size_t>(j)];
      radius[static_cast<std::size_t>(j)] = r[static_cast<std::size_t>(j)] * rule.nodes[i];
      w *= smooth[i];
    }
    const auto dv = ev.at(radius);
    cplx mean = 0.0;
    for (std::size_t l = 0; l < dv.size(); ++l) mean += dv[l] * fv[conj[l]];
    acc += w * mean / static_cast<double>(dv.size());
  });
  double pre = std::pow(2.0 * alpha, n);
  for (double x : r) pre *= std::pow(x, 2.0 * (e - alpha) + 2.0);
  return pre * acc;
}

PairingDiagonal pairing_diagonal(double alpha, PairingVariant v, std::size_t k_max) {
  const auto [e, order] = pairing_shape(alpha, v);
  PairingDiagonal out;
  out.r_power = 2.0 * (e - alpha) + 2.0;
  out.lambda.resize(k_max + 1);
  boost::math::quadrature::tanh_sinh<double> ts;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const double kk = static_cast<double>(k);
    // xc > 0 is the distance to rho = 1, keeping 1 - rho^2 exact near the endpoint.
    auto integrand = [&](double rho, double xc) {
      const double c = xc > 0.0 ? xc : 1.0 - rho;
      return std::pow(c * (1.0 + rho), e) * std::pow(rho, kk + 1.0);
    };
    const double radial = ts.integrate(integrand, 0.0, 1.0, 1e-14);
    out.lambda[k] = 2.0 * alpha * frac_factor(k, order) * radial;
    out.max_unit_deviation = std::max(out.max_unit_deviation, std::abs(out.lambda[k] - 1.0));
  }
  out.unit = out.r_power == 0.0 && out.max_unit_deviation <= 1e-10;
  return out;
}

cplx lp_pairing_rhs_diagonal(const CoeffFn& f, const CoeffFn& g, std::span<const double> r,
                             double alpha, PairingVariant v) {
  check_radius(r, f.dim());
  const Degree deg = joint_degree(f, g);
  std::size_t kmax = 0;
  for (auto d : deg) kmax = std::max(kmax, d);
  const PairingDiagonal diag = pairing_diagonal(alpha, v, kmax);
  const int n = f.dim();
  double rp = 1.0;
  for (double x : r) rp *= std::pow(x, diag.r_power);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const MultiIndex k = f.index_of(i);
    const cplx b = g[k];
    if (b == 0.0) continue;
    double lam = 1.0;
    for (int j = 0; j < n; ++j)
      lam *= diag.lambda[k[j]] * std::pow(r[static_cast<std::size_t>(j)], 2.0 * static_cast<double>(k[j]));
    acc += lam * f.at_linear(i) * b;
  }
  return rp * acc;
}

double volume_integral(const CoeffFn& f, double s, const VolumeWeight& weight,
                       const GridOptions& opts) {
  if (!(s > 0.0 && s < kInfinity)) fail(ErrorCode::domain, "volume integral: 0 < s < inf required");
  const int n = f.dim();
  const bool shifted = !weight.shift.empty();
  if (shifted && static_cast<int>(weight.shift.size()) != n)
    fail(ErrorCode::invalid_argument, "volume integral: shift has wrong dimension");
  const int panels = opts.radial_panels >= 0 ? opts.radial_panels : auto_radial_panels(f.max_degree());

  // A shift of exactly 1 turns the shifted factor into a boundary singularity,
  // which then goes into the Jacobi weight of that variable's rule.
  std::vector<QuadRule> rules;
  std::vector<std::vector<double>> factor;
  for (int j = 0; j < n; ++j) {
    const double rj = shifted ? weight.shift[static_cast<std::size_t>(j)] : 0.0;
    if (shifted && !(rj >= 0.0 && rj <= 1.0)) fail(ErrorCode::domain, "volume integral: shift must lie in [0,1]");
    const bool fold = shifted && rj == 1.0;
    const double gamma = weight.gamma + (fold ? weight.kappa : 0.0);
    if (!(gamma > -1.0)) fail(ErrorCode::domain, "volume integral: weight exponent must exceed -1");
    QuadRule rule = radial_rule(gamma, opts.radial_points, panels);
    std::vector<double> fac(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
      double x = rule.weights[i] * rule.nodes[i];
      if (shifted && !fold && weight.kappa != 0.0)
        x *= std::pow(rule.complements[i] + rule.nodes[i] * (1.0 - rj), weight.kappa);
      fac[i] = x;
    }
    rules.push_back(std::move(rule));
    factor.push_back(std::move(fac));
  }
  const double total = with_torus_doubling(opts, [&](const GridOptions& g, double& disc) {
    TorusEvaluator ev(f, torus_size(f.degree(), g));
    const auto coarse = coarse_subgrid(ev.grid());
    std::vector<double> radius(static_cast<std::size_t>(n));
    double acc = 0.0, acc_coarse = 0.0;
    for_each_node(rules, [&](std::span<const std::size_t> idx) {
      double w = 1.0;
      for (int j = 0; j < n; ++j) {
        const auto i = idx[static_cast<std::size_t>(j)];
        radius[static_cast<std::size_t>(j)] = rules[static_cast<std::size_t>(j)].nodes[i];
        w *= factor[static_cast<std::size_t>(j)][i];
      }
      const auto v = ev.at(radius);
      double mean = 0.0, mean_coarse = 0.0;
      for (const auto& x : v) mean += abs_pow(x, s);
      for (auto l : coarse) mean_coarse += abs_pow(v[l], s);
      acc += w * mean / static_cast<double>(v.size());
      acc_coarse += w * mean_coarse / static_cast<double>(coarse.size());
    });
    const double scale = std::max(acc, acc_coarse);
    disc = scale == 0.0 ? 0.0 : std::abs(acc - acc_coarse) / scale;
    return acc;
  }).first;
  return std::pow(2.0 * std::numbers::pi, n) * total;
}

Ratio embedding_ratio(const CoeffFn& f, double p, double q, double s, double alpha,
                      SpaceSpec::Family source, const GridOptions& opts) {
  std::vector<std::string> bad;
  if (!(p > 0.0 && q > 0.0)) bad.emplace_back("0 < p, q required");
  if (!(std::max(p, q) <= s)) bad.emplace_back("max(p,q) <= s required");
  if (!(s < kInfinity)) bad.emplace_back("s < inf required");
  if (!(alpha > 0.0)) bad.emplace_back("alpha > 0 required");
  if (source != SpaceSpec::Family::triebel_f && source != SpaceSpec::Family::mixed_a)
    bad.emplace_back("source must be triebel-f or mixed-a");
  if (!bad.empty()) {
    std::string msg = "embedding: ";
    for (std::size_t i = 0; i < bad.size(); ++i) msg += (i ? "; " : "") + bad[i];
    fail(ErrorCode::domain, msg);
  }
  const double lhs = std::pow(volume_integral(f, s, {s * (alpha + 1.0 / p) - 2.0, 0.0, {}}, opts), 1.0 / s);
  const SpaceSpec spec = source == SpaceSpec::Family::triebel_f ? SpaceSpec::triebel_f(p, q, alpha)
                                                                : SpaceSpec::mixed_a(p, q, alpha);
  return Ratio::of(lhs, space_norm(f, spec, opts).value);
}

Ratio mean_growth_ratio(const CoeffFn& f, double t, double beta, std::span<const double> r,
                        const GridOptions& opts) {
  if (!(t > 0.0 && t < kInfinity)) fail(ErrorCode::domain, "mean growth: 0 < t < inf required");
  if (!(beta > 0.0)) fail(ErrorCode::domain, "mean growth: beta > 0 required");
  check_radius(r, f.dim());
  double lhs = m_p_norm(f, r, t, opts);
  for (double x : r) lhs *= std::pow(1.0 - x, beta);
  const double rhs = std::pow(volume_integral(f, t, {t * beta - 1.0, 0.0, {}}, opts), 1.0 / t);
  return Ratio::of(lhs, rhs);
}

std::vector<std::string> ds_violations(double v, double q_w, double t, bool shifted,
                                       bool shift_touches_boundary) {
  std::vector<std::string> bad;
  if (shifted) {
    if (!(v > 0.5 && v <= 1.0)) bad.emplace_back("1/2 < v <= 1 required");
  } else if (!(v > 0.0 && v <= 1.0)) {
    bad.emplace_back("0 < v <= 1 required");
  }
  if ((!shifted || shift_touches_boundary) && !(q_w > 1.0 / v - 2.0))
    bad.emplace_back("q > 1/v - 2 required");
  if (!(t > 0.0 && t < kInfinity)) bad.emplace_back("t > 0 required");
  return bad;
}

Ratio ds_ratio(const CoeffFn& f, double v, double q_w, double t,
               const std::optional<std::vector<double>>& shift, const GridOptions& opts) {
  const bool touches =
      shift && std::any_of(shift->begin(), shift->end(), [](double x) { return x == 1.0; });
  const auto bad = ds_violations(v, q_w, t, shift.has_value(), touches);
  if (!bad.empty()) {
    std::string msg = "ds estimate: ";
    for (std::size_t i = 0; i < bad.size(); ++i) msg += (i ? "; " : "") + bad[i];
    fail(ErrorCode::domain, msg);
  }
  VolumeWeight lw, rw;
  if (shift) {
    lw = {0.0, q_w, *shift};
    rw = {2.0 * v - 2.0, q_w * v, *shift};
  } else {
    lw = {q_w, 0.0, {}};
    rw = {2.0 * v - 2.0 + q_w * v, 0.0, {}};
  }
  const double lhs = volume_integral(f, t, lw, opts);
  const double rhs = std::pow(volume_integral(f, v * t, rw, opts), 1.0 / v);
  return Ratio::of(lhs, rhs);
}

double beta_integral_c(double one_minus_r, double alpha, double lambda) {
  if (!(alpha > -1.0)) fail(ErrorCode::domain, "beta integral: alpha > -1 required");
  if (!(one_minus_r > 0.0 && one_minus_r <= 1.0)) fail(ErrorCode::domain, "beta integral: r must lie in [0,1)");
  const double c = one_minus_r;
  const double r = 1.0 - c;
  boost::math::quadrature::tanh_sinh<double> ts;
  // u = 1 - R, so 1 - R r = c + r u. Split at c * 4^i so the peak near u ~ c
  // is resolved on every piece.
  auto integrand = [&](double u) { return std::pow(u, alpha) * std::pow(c + r * u, -lambda); };
  double acc = 0.0, lo = 0.0, hi = std::min(1.0, c);
  while (true) {
    acc += ts.integrate(integrand, lo, hi, 1e-13);
    if (hi >= 1.0) break;
    lo = hi;
    hi = std::min(1.0, hi * 4.0);
  }
  return acc;
}

double beta_integral(double r, double alpha, double lambda) {
  if (!(r >= 0.0 && r < 1.0)) fail(ErrorCode::domain, "beta integral: r must lie in [0,1)");
  return beta_integral_c(1.0 - r, alpha, lambda);
}

FitResult beta_integral_exponent(double alpha, double lambda, double level_lo, double level_hi,
                                 int per_octave) {
  if (!(alpha > -1.0)) fail(ErrorCode::domain, "beta integral: alpha > -1 required");
  if (!(lambda > alpha + 1.0))
    fail(ErrorCode::domain, "beta integral fit: lambda > alpha + 1 required (otherwise the integral stays bounded)");
  if (per_octave < 1) fail(ErrorCode::invalid_argument, "beta integral fit: per_octave >= 1 required");
  std::vector<double> c, v;
  for (int i = static_cast<int>(std::ceil(level_lo * per_octave));
       i <= static_cast<int>(std::floor(level_hi * per_octave)); ++i) {
    const double ci = std::exp2(-static_cast<double>(i) / per_octave);
    c.push_back(ci);
    v.push_back(beta_integral_c(ci, alpha, lambda));
  }
  return fit_power_law(c, v);
}

std::optional<double> kernel_growth_exponent(const SpaceSpec& spec, double beta) {
  using F = SpaceSpec::Family;
  const double ip = spec.p == kInfinity ? 0.0 : 1.0 / spec.p;
  double e = 0.0;
  switch (spec.family) {
    case F::hardy: e = beta + 1.0 - ip; break;
    case F::mixed_a:
    case F::triebel_f: e = beta - spec.alpha - ip + 1.0; break;
    case F::limit_f:
    case F::limit_a: e = beta - spec.s - ip + 1.0; break;
    case F::sup_d: e = spec.alpha + beta + 1.0 - spec.beta; break;
  }
  if (!(e > 0.0)) return std::nullopt;
  return e;
}

KernelFit kernel_norm_fit(const SpaceSpec& spec, double beta, int dim, int level_lo, int level_hi,
                          const GridOptions& opts) {
  check_dim(dim);
  spec.validate();
  if (level_hi - level_lo + 1 < 4) fail(ErrorCode::invalid_argument, "kernel fit: window needs >= 4 levels");
  KernelFit out;
  for (int l = level_lo; l <= level_hi; ++l) {
    const double c = std::exp2(-l);
    const std::vector<cplx> w(static_cast<std::size_t>(dim), cplx(1.0 - c, 0.0));
    const CoeffFn f = bergman_kernel(w, beta);
    const NormResult nr = space_norm(f, spec, opts);
    out.converged = out.converged && nr.converged;
    out.complements.push_back(c);
    out.norms.push_back(nr.value);
  }
  out.fit = fit_power_law(out.complements, out.norms);
  return out;
}

}  // namespace polydisc
