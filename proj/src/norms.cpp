#include "polydisc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polydisc/torus.hpp"

namespace polydisc {

SpaceSpec SpaceSpec::hardy(double p) { return {Family::hardy, p, 0, 0, 0, 0}; }
SpaceSpec SpaceSpec::mixed_a(double p, double q, double alpha) {
  return {Family::mixed_a, p, q, alpha, 0, 0};
}
SpaceSpec SpaceSpec::triebel_f(double p, double q, double alpha) {
  return {Family::triebel_f, p, q, alpha, 0, 0};
}
SpaceSpec SpaceSpec::sup_d(double alpha, double beta) { return {Family::sup_d, 0, 0, alpha, beta, 0}; }
SpaceSpec SpaceSpec::limit_f(double p, double s) { return {Family::limit_f, p, 0, 0, 0, s}; }
SpaceSpec SpaceSpec::limit_a(double p, double s) { return {Family::limit_a, p, 0, 0, 0, s}; }

std::vector<std::string> SpaceSpec::violations() const {
  std::vector<std::string> v;
  auto need = [&](bool ok, const char* msg) {
    if (!ok) v.emplace_back(msg);
  };
  switch (family) {
    case Family::hardy:
      need(p > 0.0, "0 < p required");
      break;
    case Family::mixed_a:
      need(p > 0.0, "0 < p required");
      need(q > 0.0 && q < kInfinity, "0 < q < inf required");
      need(alpha > 0.0, "alpha > 0 required");
      break;
    case Family::triebel_f:
      need(p > 0.0 && p < kInfinity, "0 < p < inf required");
      need(q > 0.0 && q < kInfinity, "0 < q < inf required");
      need(alpha > 0.0, "alpha > 0 required");
      break;
    case Family::sup_d:
      need(alpha >= 0.0 && alpha < kInfinity, "alpha >= 0 required");
      need(beta >= 0.0 && beta < kInfinity, "beta >= 0 required");
      break;
    case Family::limit_f:
    case Family::limit_a:
      need(p > 0.0, "p > 0 required");
      need(s > 0.0 && s < kInfinity, "s > 0 required");
      break;
  }
  return v;
}

void SpaceSpec::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = str() + ": ";
  for (std::size_t i = 0; i < v.size(); ++i) msg += (i ? "; " : "") + v[i];
  fail(ErrorCode::domain, msg);
}

std::string to_string(SpaceSpec::Family f) {
  switch (f) {
    case SpaceSpec::Family::hardy: return "hardy";
    case SpaceSpec::Family::mixed_a: return "mixed-a";
    case SpaceSpec::Family::triebel_f: return "triebel-f";
    case SpaceSpec::Family::sup_d: return "sup-d";
    case SpaceSpec::Family::limit_f: return "limit-f";
    case SpaceSpec::Family::limit_a: return "limit-a";
  }
  return "?";
}

SpaceSpec::Family parse_family(const std::string& name) {
  using F = SpaceSpec::Family;
  for (F f : {F::hardy, F::mixed_a, F::triebel_f, F::sup_d, F::limit_f, F::limit_a})
    if (to_string(f) == name) return f;
  fail(ErrorCode::invalid_argument, "unknown space family '" + name + "'");
}

std::string SpaceSpec::str() const {
  std::ostringstream os;
  os << to_string(family) << '(';
  switch (family) {
    case Family::hardy: os << "p=" << p; break;
    case Family::mixed_a:
    case Family::triebel_f: os << "p=" << p << ",q=" << q << ",alpha=" << alpha; break;
    case Family::sup_d: os << "alpha=" << alpha << ",beta=" << beta; break;
    case Family::limit_f:
    case Family::limit_a: os << "p=" << p << ",s=" << s; break;
  }
  os << ')';
  return os.str();
}

double abs_pow(cplx v, double p) {
  if (p == 2.0) return std::norm(v);
  if (p == 1.0) return std::abs(v);
  const double a2 = std::norm(v);
  return a2 == 0.0 ? 0.0 : std::pow(a2, 0.5 * p);
}

double grid_mean(std::span<const cplx> values, double p) {
  if (!(p > 0.0)) fail(ErrorCode::domain, "integral mean exponent must satisfy p > 0");
  if (p == kInfinity) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (const auto& v : values) s += abs_pow(v, p);
  s /= static_cast<double>(values.size());
  return p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

double refine_max(const CoeffFn& f, std::span<const double> r, const TorusSize& grid,
                  std::span<const cplx> values, double tol) {
  const int n = f.dim();
  std::size_t best_i = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a > best) {
      best = a;
      best_i = i;
    }
  }
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (int j = n - 1; j >= 0; --j) {
    const auto m = grid[static_cast<std::size_t>(j)];
    theta[static_cast<std::size_t>(j)] =
        2.0 * std::numbers::pi * static_cast<double>(best_i % m) / static_cast<double>(m);
    best_i /= m;
  }
  std::vector<cplx> z(static_cast<std::size_t>(n));
  auto value_at = [&](const std::vector<double>& th) {
    for (int j = 0; j < n; ++j)
      z[static_cast<std::size_t>(j)] = std::polar(r[static_cast<std::size_t>(j)], th[static_cast<std::size_t>(j)]);
    return std::abs(f.evaluate(z));
  };
  constexpr double inv_phi = 0.6180339887498949;
  for (int sweep = 0; sweep < 20; ++sweep) {
    const double before = best;
    for (int j = 0; j < n; ++j) {
      if (r[static_cast<std::size_t>(j)] == 0.0) continue;
      const double h = 2.0 * std::numbers::pi / static_cast<double>(grid[static_cast<std::size_t>(j)]);
      auto th = theta;
      auto at = [&](double x) {
        th[static_cast<std::size_t>(j)] = x;
        return value_at(th);
      };
      double a = theta[static_cast<std::size_t>(j)] - h, b = theta[static_cast<std::size_t>(j)] + h;
      double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
      double f1 = at(x1), f2 = at(x2);
      for (int it = 0; it < 60 && (b - a) > 1e-13; ++it) {
        if (f1 < f2) {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + inv_phi * (b - a);
          f2 = at(x2);
        } else {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - inv_phi * (b - a);
          f1 = at(x1);
        }
      }
      const double xm = 0.5 * (a + b);
      const double fm = at(xm);
      if (fm > best) {
        best = fm;
        theta[static_cast<std::size_t>(j)] = xm;
      }
    }
    if (best - before <= tol * best) break;
  }
  return best;
}

namespace {

// A torus mean on the full grid and on its every-other-point subgrid.
struct Means {
  double fine = 0.0;
  double coarse = 0.0;
};

double gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double power_mean(double sum, std::size_t count, double p) {
  const double m = sum / static_cast<double>(count);
  return p == 2.0 ? std::sqrt(m) : std::pow(m, 1.0 / p);
}

Means mean_at(TorusEvaluator& ev, const std::vector<std::size_t>& coarse, std::span<const double> r, double p,
              double inf_tol) {
  const auto v = ev.at(r);
  if (p == kInfinity) {
    const double m = refine_max(ev.function(), r, ev.grid(), v, inf_tol);
    return {m, m};
  }
  if (!(p > 0.0)) fail(ErrorCode::domain, "integral mean exponent must satisfy p > 0");
  double all = 0.0, sub = 0.0;
  for (const auto& x : v) all += abs_pow(x, p);
  for (auto l : coarse) sub += abs_pow(v[l], p);
  return {power_mean(all, v.size(), p), power_mean(sub, coarse.size(), p)};
}

bool close_rel(double a, double b, double tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 || std::abs(a - b) <= tol * scale;
}

// Tensor-ladder rungs whose largest index falls in octave d.
std::vector<std::vector<int>> ladder_shell(int n, int per_octave, int d) {
  std::vector<std::vector<int>> out;
  if (d == 0) {
    out.emplace_back(static_cast<std::size_t>(n), 0);
    return out;
  }
  const int lo = (d - 1) * per_octave, hi = d * per_octave;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    if (*std::max_element(idx.begin(), idx.end()) > lo) out.push_back(idx);
    int j = n - 1;
    for (; j >= 0; --j) {
      if (++idx[static_cast<std::size_t>(j)] <= hi) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    if (j < 0) break;
  }
  return out;
}

template <class Visit>
void for_each_radial_node(const QuadRule& rule, int n, Visit&& visit) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> r(static_cast<std::size_t>(n));
  const std::size_t q = rule.size();
  while (true) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) {
      const auto i = idx[static_cast<std::size_t>(j)];
      r[static_cast<std::size_t>(j)] = rule.nodes[i];
      w *= rule.weights[i];
    }
    visit(std::span<const double>(r), w);
    int j = n - 1;
    for (; j >= 0; --j) {
      if (++idx[static_cast<std::size_t>(j)] < q) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
    if (j < 0) break;
  }
}

NormResult hardy_norm(const CoeffFn& f, double p, const GridOptions& opts, double& disc) {
  TorusEvaluator ev(f, torus_size(f.degree(), opts));
  const auto coarse = coarse_subgrid(ev.grid());
  const BoundaryLadder ladder{1};
  std::vector<double> r(static_cast<std::size_t>(f.dim()));
  NormResult res;
  res.converged = false;
  double prev = -1.0, sup = 0.0, sup_coarse = 0.0;
  for (int d = 0; d <= opts.ladder_max_depth; ++d) {
    std::fill(r.begin(), r.end(), ladder.radius(d));
    const Means v = mean_at(ev, coarse, r, p, opts.inf_tol);
    sup = std::max(sup, v.fine);
    sup_coarse = std::max(sup_coarse, v.coarse);
    res.ladder_depth = d;
    if (d >= opts.ladder_min_depth && prev >= 0.0 && close_rel(prev, v.fine, opts.sup_tol)) {
      res.converged = true;
      break;
    }
    prev = v.fine;
  }
  res.value = sup;
  disc = gap(sup, sup_coarse);
  return res;
}

// SupD, LimitA and LimitF share the tensor ladder and the octave-wise
// convergence test on the running sup.
NormResult ladder_sup_norm(const CoeffFn& f, const SpaceSpec& spec, const GridOptions& opts, double& disc) {
  using F = SpaceSpec::Family;
  const bool pointwise = spec.family == F::limit_f && spec.p != kInfinity;
  const CoeffFn g = spec.family == F::sup_d ? frac_derivative(f, spec.alpha) : f;
  const double mean_p = spec.family == F::sup_d ? kInfinity : spec.p;
  const double expo = spec.family == F::sup_d ? spec.beta : spec.s;
  const int n = f.dim();

  TorusEvaluator ev(g, torus_size(g.degree(), opts));
  const auto coarse = coarse_subgrid(ev.grid());
  const BoundaryLadder ladder{opts.ladder_per_octave};
  std::vector<double> phi(pointwise ? ev.points() : 0, 0.0);
  std::vector<double> r(static_cast<std::size_t>(n));

  auto phi_norm = [&](bool sub) {
    double acc = 0.0;
    auto add = [&](double x) { acc += x == 0.0 ? 0.0 : std::pow(x, spec.p); };
    if (sub)
      for (auto l : coarse) add(phi[l]);
    else
      for (double x : phi) add(x);
    return std::pow(acc / static_cast<double>(sub ? coarse.size() : phi.size()), 1.0 / spec.p);
  };

  NormResult res;
  res.converged = false;
  double sup = 0.0, sup_coarse = 0.0, prev_sup = -1.0, prev_phi = -1.0, phi_fine = 0.0;
  for (int d = 0; d <= opts.ladder_max_depth; ++d) {
    for (const auto& rung : ladder_shell(n, ladder.per_octave, d)) {
      double weight = 1.0;
      for (int j = 0; j < n; ++j) {
        const int i = rung[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(j)] = ladder.radius(i);
        weight *= std::pow(ladder.complement(i), expo);
      }
      if (pointwise) {
        const auto v = ev.at(r);
        double all = 0.0, sub = 0.0;
        for (std::size_t l = 0; l < phi.size(); ++l) {
          all += abs_pow(v[l], mean_p);
          phi[l] = std::max(phi[l], std::abs(v[l]) * weight);
        }
        for (auto l : coarse) sub += abs_pow(v[l], mean_p);
        sup = std::max(sup, power_mean(all, v.size(), mean_p) * weight);
        sup_coarse = std::max(sup_coarse, power_mean(sub, coarse.size(), mean_p) * weight);
      } else {
        const Means m = mean_at(ev, coarse, r, mean_p, opts.inf_tol);
        sup = std::max(sup, m.fine * weight);
        sup_coarse = std::max(sup_coarse, m.coarse * weight);
      }
    }
    res.ladder_depth = d;
    bool done = d >= opts.ladder_min_depth && prev_sup >= 0.0 && close_rel(prev_sup, sup, opts.sup_tol);
    if (pointwise) {
      phi_fine = phi_norm(false);
      done = done && prev_phi >= 0.0 && close_rel(prev_phi, phi_fine, opts.sup_tol);
      prev_phi = phi_fine;
    }
    prev_sup = sup;
    if (done) {
      res.converged = true;
      break;
    }
  }
  res.value = pointwise ? phi_fine : sup;
  disc = gap(sup, sup_coarse);
  if (pointwise) disc = std::max(disc, gap(phi_fine, phi_norm(true)));
  return res;
}

NormResult mixed_norm(const CoeffFn& f, const SpaceSpec& spec, const GridOptions& opts, double& disc) {
  const double gamma = spec.alpha * spec.q - 1.0;
  const QuadGrid grid = QuadGrid::build(f.degree(), gamma, opts);
  TorusEvaluator ev(f, grid.torus);
  const auto coarse = coarse_subgrid(ev.grid());
  const double q = spec.q;
  NormResult res;
  if (spec.family == SpaceSpec::Family::mixed_a) {
    double acc = 0.0, acc_coarse = 0.0;
    for_each_radial_node(grid.radial, f.dim(), [&](std::span<const double> r, double w) {
      const Means m = mean_at(ev, coarse, r, spec.p, opts.inf_tol);
      acc += w * (q == 1.0 ? m.fine : std::pow(m.fine, q));
      acc_coarse += w * (q == 1.0 ? m.coarse : std::pow(m.coarse, q));
    });
    res.value = q == 1.0 ? acc : std::pow(acc, 1.0 / q);
    disc = gap(acc, acc_coarse);
    return res;
  }
  std::vector<double> inner(ev.points(), 0.0);
  for_each_radial_node(grid.radial, f.dim(), [&](std::span<const double> r, double w) {
    const auto v = ev.at(r);
    for (std::size_t l = 0; l < inner.size(); ++l) inner[l] += w * abs_pow(v[l], q);
  });
  const double e = spec.p / q;
  auto lift = [e](double x) { return e == 1.0 ? x : (x == 0.0 ? 0.0 : std::pow(x, e)); };
  double outer = 0.0, outer_coarse = 0.0;
  for (double x : inner) outer += lift(x);
  for (auto l : coarse) outer_coarse += lift(inner[l]);
  outer /= static_cast<double>(inner.size());
  outer_coarse /= static_cast<double>(coarse.size());
  res.value = std::pow(outer, 1.0 / spec.p);
  disc = gap(outer, outer_coarse);
  return res;
}

}  // namespace

double m_p_norm(const CoeffFn& f, std::span<const double> r, double p, const GridOptions& opts) {
  if (!(p > 0.0)) fail(ErrorCode::domain, "integral mean exponent must satisfy p > 0");
  return with_torus_doubling(opts, [&](const GridOptions& g, double& disc) {
           TorusEvaluator ev(f, torus_size(f.degree(), g));
           const Means m = mean_at(ev, coarse_subgrid(ev.grid()), r, p, g.inf_tol);
           disc = gap(m.fine, m.coarse);
           return m.fine;
         }).first;
}

NormResult space_norm(const CoeffFn& f, const SpaceSpec& spec, const GridOptions& opts) {
  spec.validate();
  using F = SpaceSpec::Family;
  auto [res, ok] = with_torus_doubling(opts, [&](const GridOptions& g, double& disc) {
    switch (spec.family) {
      case F::hardy: return hardy_norm(f, spec.p, g, disc);
      case F::mixed_a:
      case F::triebel_f: return mixed_norm(f, spec, g, disc);
      case F::sup_d:
      case F::limit_a:
      case F::limit_f: break;
    }
    return ladder_sup_norm(f, spec, g, disc);
  });
  res.converged = res.converged && ok;
  return res;
}

namespace {

SupProfile sup_profile(const CoeffFn& g, double t, double tau, int depth, const GridOptions& opts,
                       std::uint64_t seed, int off_diagonal, double& disc) {
  const int n = g.dim();
  TorusEvaluator ev(g, torus_size(g.degree(), opts));
  const auto coarse = coarse_subgrid(ev.grid());
  const BoundaryLadder ladder{opts.ladder_per_octave};
  SupProfile prof;
  auto add = [&](const std::vector<int>& rung, bool diagonal) {
    ProfilePoint pt;
    pt.r.resize(static_cast<std::size_t>(n));
    double weight = 1.0;
    int top = 0;
    for (int j = 0; j < n; ++j) {
      const int i = rung[static_cast<std::size_t>(j)];
      pt.r[static_cast<std::size_t>(j)] = ladder.radius(i);
      weight *= std::pow(ladder.complement(i), tau);
      top = std::max(top, i);
    }
    pt.level = ladder.level(top);
    pt.diagonal = diagonal;
    const Means mean = mean_at(ev, coarse, pt.r, t, opts.inf_tol);
    pt.value = mean.fine * weight;
    disc = std::max(disc, gap(mean.fine, mean.coarse));
    if (prof.points.empty() || pt.value > prof.sup) {
      prof.sup = pt.value;
      prof.sup_at = pt.r;
    }
    prof.points.push_back(std::move(pt));
  };
  const int last = ladder.rungs(depth);
  for (int i = 0; i < last; ++i) add(std::vector<int>(static_cast<std::size_t>(n), i), true);
  if (n >= 2) {
    for (int d = 1; d <= depth; ++d) {
      const int hi = d * ladder.per_octave;
      for (int s = 0; s < off_diagonal; ++s) {
        std::vector<int> rung(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
          const double u = hashed_uniform(seed, static_cast<std::uint64_t>(d * 64 + s),
                                          static_cast<std::uint64_t>(j));
          rung[static_cast<std::size_t>(j)] = std::min(hi, static_cast<int>(u * (hi + 1)));
        }
        if (std::all_of(rung.begin(), rung.end(), [&](int x) { return x == rung[0]; })) continue;
        add(rung, false);
      }
    }
  }
  return prof;
}

}  // namespace

SupProfile weighted_sup_profile(const CoeffFn& f, int m, double t, double tau, int depth,
                                const GridOptions& opts, std::uint64_t seed, int off_diagonal) {
  if (!(t > 0.0)) fail(ErrorCode::domain, "profile exponent must satisfy t > 0");
  if (m < 0) fail(ErrorCode::domain, "derivative order m must be >= 0");
  if (depth < 0) fail(ErrorCode::invalid_argument, "profile depth must be >= 0");
  const CoeffFn g = frac_derivative(f, m);
  return with_torus_doubling(opts, [&](const GridOptions& o, double& disc) {
           return sup_profile(g, t, tau, depth, o, seed, off_diagonal, disc);
         }).first;
}

}  // namespace polydisc
