#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "polydisc/analysis.hpp"
#include "polydisc/multiplier_lab.hpp"
#include "polydisc/norms.hpp"
#include "math_util.hpp"

namespace polydisc {

using json = nlohmann::ordered_json;

int worker_count_from_env() {
  const char* s = std::getenv("POLYDISC_WORKERS");
  if (!s || !*s) return 1;
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 64));
}

void override_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.echo["seed"] = seed;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

using Row = std::vector<Cell>;

double num(const json& j) {
  if (j.is_string()) return kInfinity;
  return j.get<double>();
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

Cell opt_cell(const std::optional<double>& x) {
  if (x) return *x;
  return std::monostate{};
}

SpaceSpec space_from(const json& j) {
  SpaceSpec s;
  s.family = parse_family(j.at("family").get<std::string>());
  if (j.contains("p")) s.p = num(j.at("p"));
  if (j.contains("q")) s.q = num(j.at("q"));
  if (j.contains("alpha")) s.alpha = num(j.at("alpha"));
  if (j.contains("s")) s.s = num(j.at("s"));
  if (s.family == SpaceSpec::Family::sup_d)
    s.beta = j.contains("weight") ? num(j.at("weight")) : (j.contains("beta") ? num(j.at("beta")) : 0.0);
  return s;
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  return seed + 0x9e3779b97f4a7c15ULL * stream;
}

struct NamedFn {
  std::string id;
  CoeffFn f;
};

std::vector<NamedFn> functions_from(const json& specs, int dim, std::size_t degree, std::uint64_t seed) {
  std::vector<NamedFn> out;
  for (std::size_t si = 0; si < specs.size(); ++si) {
    const json& s = specs[si];
    const std::string type = s.at("type");
    if (type == "random") {
      const auto count = s.at("count").get<long long>();
      const CoeffLaw law = parse_coeff_law(s.at("law"));
      const std::size_t deg = s.contains("degree") ? s.at("degree").get<std::size_t>() : degree;
      for (long long i = 0; i < count; ++i)
        out.push_back({"random[" + std::to_string(si) + ":" + std::to_string(i) + "]",
                       random_poly(sub_seed(seed, si) + static_cast<std::uint64_t>(i), dim,
                                   Degree(static_cast<std::size_t>(dim), deg), law)});
    } else if (type == "kernel") {
      std::vector<cplx> w;
      std::string wid;
      for (const auto& x : s.at("w")) {
        w.emplace_back(x.get<double>(), 0.0);
        wid += (wid.empty() ? "" : ";") + fmt(x.get<double>());
      }
      const double beta = s.at("beta").get<double>();
      out.push_back({"kernel(w=" + wid + ",beta=" + fmt(beta) + ")", bergman_kernel(w, beta)});
    } else if (type == "lacunary") {
      const int levels = s.at("levels").get<int>();
      out.push_back({"lacunary(" + std::to_string(levels) + ")", lacunary_series(sub_seed(seed, si), dim, levels)});
    } else if (type == "constant") {
      const double v = s.at("value").get<double>();
      out.push_back({"constant(" + fmt(v) + ")", CoeffFn::constant(dim, v)});
    } else if (type == "file") {
      const std::string path = s.at("path");
      CoeffFn f = read_coeff_file(path);
      if (f.dim() != dim) fail(ErrorCode::invalid_argument, "coefficient file '" + path + "' has the wrong dimension");
      out.push_back({"file(" + path + ")", std::move(f)});
    }
  }
  return out;
}

Gate gate(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

// ---------------------------------------------------------------------------

void norm_table(const ExperimentConfig& e, std::uint64_t seed, int workers, ExperimentReport& rep) {
  const json& p = e.params;
  const int dim = p.at("dim");
  const auto fns = functions_from(p.at("functions"), dim, p.at("degree").get<std::size_t>(), seed);
  std::vector<SpaceSpec> spaces;
  for (const auto& s : p.at("spaces")) spaces.push_back(space_from(s));
  std::vector<NormResult> res(fns.size() * spaces.size());
  parallel_for(res.size(), workers, [&](std::size_t i) {
    res[i] = space_norm(fns[i / spaces.size()].f, spaces[i % spaces.size()], e.grid);
  });
  bool all = true;
  for (std::size_t i = 0; i < res.size(); ++i) {
    all = all && res[i].converged;
    rep.rows.push_back({fns[i / spaces.size()].id, spaces[i % spaces.size()].str(), res[i].value,
                        res[i].converged, static_cast<long long>(res[i].ladder_depth)});
  }
  rep.gates.push_back(gate("all-converged", all, all ? "every norm converged" : "unconverged norms present"));
}

void parseval_suite(const ExperimentConfig& e, std::uint64_t seed, int workers, ExperimentReport& rep) {
  const json& p = e.params;
  const auto count = p.at("count").get<std::size_t>();
  const auto degree = p.at("degree").get<std::size_t>();
  const CoeffLaw law = parse_coeff_law(p.at("law"));
  const double tol = p.at("tol");
  const std::vector<double> radii = p.at("radii");
  struct Case {
    int dim;
    std::size_t fn;
    double r;
  };
  std::vector<Case> cases;
  for (const auto& d : p.at("dims"))
    for (std::size_t i = 0; i < count; ++i)
      for (double r : radii) cases.push_back({static_cast<int>(d.get<double>()), i, r});
  std::vector<Row> rows(cases.size());
  std::vector<double> scaled(cases.size());
  parallel_for(cases.size(), workers, [&](std::size_t c) {
    const auto& cs = cases[c];
    const CoeffFn f = random_poly(sub_seed(seed, static_cast<std::uint64_t>(cs.dim)) + cs.fn, cs.dim,
                                  Degree(static_cast<std::size_t>(cs.dim), degree), law);
    const std::vector<double> r(static_cast<std::size_t>(cs.dim), cs.r);
    const double m2 = m_p_norm(f, r, 2.0, e.grid);
    const double lhs = m2 * m2;
    const double rhs = f.weighted_energy(r);
    double total = 0.0;
    for (const auto& a : f.coeffs()) total += std::norm(a);
    const double dev = std::abs(lhs - rhs);
    scaled[c] = dev / (1.0 + total);
    rows[c] = {static_cast<long long>(cs.dim), "random[" + std::to_string(cs.fn) + "]", cs.r, lhs, rhs, dev, scaled[c]};
  });
  rep.rows = std::move(rows);
  const double worst = scaled.empty() ? 0.0 : *std::max_element(scaled.begin(), scaled.end());
  rep.gates.push_back(gate("parseval", worst <= tol, "max scaled deviation " + fmt(worst) + " (tol " + fmt(tol) + ")"));
}

CoeffFn abs_coeffs(const CoeffFn& f) {
  std::vector<cplx> a(f.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f.at_linear(i));
  return CoeffFn(f.degree(), std::move(a));
}

void pairing_check(const ExperimentConfig& e, std::uint64_t seed, int workers, ExperimentReport& rep) {
  const json& p = e.params;
  const int dim = p.at("dim");
  const auto count = p.at("count").get<std::size_t>();
  const Degree deg(static_cast<std::size_t>(dim), p.at("degree").get<std::size_t>());
  const std::vector<double> r(static_cast<std::size_t>(dim), p.at("radius").get<double>());
  const std::vector<double> alphas = p.at("alphas");
  std::vector<PairingVariant> variants;
  for (const auto& v : p.at("variants")) variants.push_back(parse_pairing_variant(v));
  const double lhs_tol = p.at("lhs_tol"), rhs_tol = p.at("rhs_tol");
  const auto k_max = p.at("k_max").get<std::size_t>();

  std::vector<CoeffFn> fs, gs;
  for (std::size_t i = 0; i < count; ++i) {
    fs.push_back(random_poly(sub_seed(seed, 2 * i), dim, deg));
    gs.push_back(random_poly(sub_seed(seed, 2 * i + 1), dim, deg));
  }
  // LHS against the coefficient sum
  std::vector<Row> lhs_rows(count);
  std::vector<double> lhs_dev(count);
  parallel_for(count, workers, [&](std::size_t i) {
    const cplx v = lp_pairing_lhs(fs[i], gs[i], r, e.grid);
    cplx ref = 0.0;
    double scale = 0.0;
    for (std::size_t l = 0; l < fs[i].size(); ++l) {
      const MultiIndex k = fs[i].index_of(l);
      double rp = 1.0;
      for (int j = 0; j < dim; ++j) rp *= std::pow(r[static_cast<std::size_t>(j)], 2.0 * static_cast<double>(k[j]));
      ref += fs[i].at_linear(l) * gs[i][k] * rp;
      scale += std::abs(fs[i].at_linear(l) * gs[i][k]) * rp;
    }
    lhs_dev[i] = std::abs(v - ref) / std::max(scale, 1e-300);
    lhs_rows[i] = {"lhs", "pair[" + std::to_string(i) + "]", std::monostate{}, std::monostate{}, std::monostate{},
                   v.real(), v.imag(), ref.real(), ref.imag(), lhs_dev[i], std::monostate{}, std::monostate{}};
  });
  for (auto& row : lhs_rows) rep.rows.push_back(std::move(row));
  const double lhs_worst = *std::max_element(lhs_dev.begin(), lhs_dev.end());
  rep.gates.push_back(gate("lhs-coefficient-sum", lhs_worst <= lhs_tol,
                           "max relative deviation " + fmt(lhs_worst) + " (tol " + fmt(lhs_tol) + ")"));

  json unit = json::object();
  for (auto v : variants) {
    std::vector<double> worst_by_alpha;
    for (double alpha : alphas) {
      const PairingDiagonal diag = pairing_diagonal(alpha, v, k_max);
      unit[to_string(v) + "@alpha=" + fmt(alpha)] = diag.unit;
      const auto [ke, order] = pairing_shape(alpha, v);
      for (std::size_t k = 0; k <= k_max; ++k) {
        const double closed = alpha * frac_factor(k, order) *
                              std::exp(detail::log_beta(static_cast<double>(k) / 2.0 + 1.0, ke + 1.0));
        rep.rows.push_back({"lambda", std::monostate{}, to_string(v), alpha, static_cast<long long>(k),
                            diag.lambda[k], 0.0, closed, 0.0, std::abs(diag.lambda[k] - closed),
                            diag.r_power, diag.unit});
      }
      std::vector<Row> rows(count);
      std::vector<double> dev(count);
      parallel_for(count, workers, [&](std::size_t i) {
        const cplx quad = lp_pairing_rhs(fs[i], gs[i], r, alpha, v, e.grid);
        const cplx ref = lp_pairing_rhs_diagonal(fs[i], gs[i], r, alpha, v);
        const double scale = std::abs(lp_pairing_rhs_diagonal(abs_coeffs(fs[i]), abs_coeffs(gs[i]), r, alpha, v));
        dev[i] = std::abs(quad - ref) / std::max(scale, 1e-300);
        rows[i] = {"rhs", "pair[" + std::to_string(i) + "]", to_string(v), alpha, std::monostate{},
                   quad.real(), quad.imag(), ref.real(), ref.imag(), dev[i], diag.r_power, diag.unit};
      });
      for (auto& row : rows) rep.rows.push_back(std::move(row));
      worst_by_alpha.push_back(*std::max_element(dev.begin(), dev.end()));
    }
    const double worst = *std::max_element(worst_by_alpha.begin(), worst_by_alpha.end());
    rep.gates.push_back(gate("rhs-quadrature-vs-diagonal[" + to_string(v) + "]", worst <= rhs_tol,
                             "max relative deviation " + fmt(worst) + " (tol " + fmt(rhs_tol) + ")"));
  }
  rep.extra["unit_diagonal"] = unit;
}

void embedding_sweep(const ExperimentConfig& e, std::uint64_t seed, int workers, ExperimentReport& rep) {
  const json& p = e.params;
  const int dim = p.at("dim");
  const auto count = p.at("count").get<std::size_t>();
  const auto degree = p.at("degree").get<std::size_t>();
  const CoeffLaw law = parse_coeff_law(p.at("law"));
  const double stability = p.at("stability");
  const SpaceSpec::Family source = parse_family(p.at("source").get<std::string>());
  const std::vector<double> radii = p.at("radii");

  struct Check {
    std::string kind, id;
    std::function<Ratio(const CoeffFn&)> ratio;
  };
  std::vector<Check> checks;
  for (const auto& c : p.at("cases")) {
    const double pp = num(c.at("p")), q = num(c.at("q")), s = num(c.at("s")), a = num(c.at("alpha"));
    checks.push_back({"embedding", "p=" + fmt(pp) + ",q=" + fmt(q) + ",s=" + fmt(s) + ",alpha=" + fmt(a),
                      [=, &e](const CoeffFn& f) { return embedding_ratio(f, pp, q, s, a, source, e.grid); }});
  }
  for (const auto& c : p.at("mean_growth")) {
    const double t = num(c.at("t")), b = num(c.at("beta"));
    checks.push_back({"mean-growth", "t=" + fmt(t) + ",beta=" + fmt(b), [=, &e](const CoeffFn& f) {
                        Ratio best = Ratio::of(0.0, 1.0);
                        for (double r : radii) {
                          const Ratio x = mean_growth_ratio(f, t, b, std::vector<double>(static_cast<std::size_t>(dim), r), e.grid);
                          if (!x.degenerate_zero && (best.degenerate_zero || x.value > best.value)) best = x;
                        }
                        return best;
                      }});
  }
  bool all_finite = true, all_stable = true;
  std::string worst_stab;
  for (const auto& ck : checks) {
    double max_at[2] = {0.0, 0.0};
    for (int dbl = 0; dbl < 2; ++dbl) {
      const std::size_t d = degree << dbl;
      std::vector<Ratio> ratios(count);
      parallel_for(count, workers, [&](std::size_t i) {
        const CoeffFn f = random_poly(seed + i, dim, Degree(static_cast<std::size_t>(dim), d), law);
        ratios[i] = ck.ratio(f);
      });
      RatioReport rr;
      std::size_t degenerate = 0;
      bool finite = true;
      for (std::size_t i = 0; i < count; ++i) {
        rr.add("random[" + std::to_string(i) + "]", ratios[i]);
        degenerate += ratios[i].degenerate_zero ? 1 : 0;
        finite = finite && ratios[i].finite();
      }
      all_finite = all_finite && finite;
      max_at[dbl] = rr.max_ratio;
      rep.rows.push_back({ck.kind, ck.id, static_cast<long long>(d), rr.max_ratio, rr.arg_max,
                          static_cast<long long>(degenerate), finite});
    }
    const double change = max_at[0] > 0.0 ? std::abs(max_at[1] / max_at[0] - 1.0) : 0.0;
    if (change > stability) {
      all_stable = false;
      worst_stab += ck.kind + "(" + ck.id + ") changed by " + fmt(change) + "; ";
    }
  }
  rep.gates.push_back(gate("ratios-finite", all_finite, all_finite ? "all ratios finite" : "non-finite ratio"));
  rep.gates.push_back(gate("degree-doubling-stability", all_stable,
                           all_stable ? "max ratio within " + fmt(stability) + " under degree doubling" : worst_stab));
}

void ds_sweep(const ExperimentConfig& e, std::uint64_t seed, int workers, ExperimentReport& rep) {
  const json& p = e.params;
  const int dim = p.at("dim");
  const auto count = p.at("count").get<std::size_t>();
  const Degree deg(static_cast<std::size_t>(dim), p.at("degree").get<std::size_t>());
  const double shift = p.at("shift"), tol = p.at("tol");
  std::vector<NamedFn> fns;
  for (std::size_t i = 0; i < count; ++i) fns.push_back({"random[" + std::to_string(i) + "]", random_poly(seed + i, dim, deg)});
  for (const auto& k : p.at("kernels")) {
    std::vector<cplx> w;
    std::string wid;
    for (const auto& x : k.at("w")) {
      w.emplace_back(x.get<double>(), 0.0);
      wid += (wid.empty() ? "" : ";") + fmt(x.get<double>());
    }
    const double b = k.at("beta");
    fns.push_back({"kernel(w=" + wid + ",beta=" + fmt(b) + ")", bergman_kernel(w, b)});
  }
  struct Case {
    double v, q, t;
    std::size_t fn;
  };
  std::vector<Case> cases;
  for (const auto& v : p.at("v"))
    for (const auto& q : p.at("q"))
      for (const auto& t : p.at("t"))
        for (std::size_t i = 0; i < fns.size(); ++i) cases.push_back({v, q, t, i});
  const std::vector<double> sh(static_cast<std::size_t>(dim), shift);
  std::vector<Ratio> plain(cases.size()), shifted(cases.size());
  parallel_for(cases.size(), workers, [&](std::size_t c) {
    const auto& cs = cases[c];
    plain[c] = ds_ratio(fns[cs.fn].f, cs.v, cs.q, cs.t, std::nullopt, e.grid);
    shifted[c] = ds_ratio(fns[cs.fn].f, cs.v, cs.q, cs.t, sh, e.grid);
  });
  bool finite = true;
  double worst_unit = 0.0, worst_shift = 0.0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const auto& cs = cases[c];
    finite = finite && plain[c].finite() && shifted[c].finite();
    double sdev = 0.0;
    if (!plain[c].degenerate_zero && !shifted[c].degenerate_zero)
      sdev = std::abs(shifted[c].value - plain[c].value) / std::max(plain[c].value, 1e-300);
    if (cs.v == 1.0 && !plain[c].degenerate_zero) worst_unit = std::max(worst_unit, std::abs(plain[c].value - 1.0));
    worst_shift = std::max(worst_shift, sdev);
    rep.rows.push_back({cs.v, cs.q, cs.t, fns[cs.fn].id, plain[c].value, plain[c].tag(), shifted[c].value, sdev});
  }
  rep.gates.push_back(gate("ratios-finite", finite, finite ? "all ratios finite" : "non-finite ratio"));
  rep.gates.push_back(gate("v1-identity", worst_unit <= tol, "max |ratio - 1| at v = 1: " + fmt(worst_unit)));
  if (shift == 1.0)
    rep.gates.push_back(gate("shift-reduction", worst_shift <= tol,
                             "max relative gap shifted(r=1) vs unshifted: " + fmt(worst_shift)));
}

void beta_integral_fit(const ExperimentConfig& e, std::uint64_t, int, ExperimentReport& rep) {
  const json& p = e.params;
  const std::vector<double> w = p.at("window");
  const int per = p.at("per_octave");
  const double tol = p.at("tol");
  for (const auto& c : p.at("cases")) {
    const double a = c.at("alpha"), l = c.at("lambda");
    const double predicted = l - a - 1.0;
    const FitResult fit = beta_integral_exponent(a, l, w[0], w[1], per);
    const double dev = std::abs(fit.slope - predicted);
    const double at0 = beta_integral(0.0, a, l);
    const bool ok = dev <= tol && std::abs(at0 - 1.0 / (a + 1.0)) <= 1e-12 * (1.0 / (a + 1.0));
    rep.rows.push_back({a, l, predicted, fit.slope, fit.residual, dev, at0, ok});
    rep.gates.push_back(gate("slope[alpha=" + fmt(a) + ",lambda=" + fmt(l) + "]", ok,
                             "slope " + fmt(fit.slope) + " vs " + fmt(predicted)));
  }
}

void lemma3_fit(const ExperimentConfig& e, std::uint64_t, int workers, ExperimentReport& rep) {
  const json& p = e.params;
  const int dim = p.at("dim");
  const std::vector<double> w = p.at("window");
  const double lower = p.at("lower"), upper = p.at("upper");
  const json& cases = p.at("cases");
  std::vector<KernelFit> fits(cases.size());
  std::vector<SpaceSpec> specs;
  std::vector<double> betas;
  for (const auto& c : cases) {
    specs.push_back(space_from(c));
    betas.push_back(c.at("beta").get<double>());
  }
  parallel_for(cases.size(), workers, [&](std::size_t i) {
    fits[i] = kernel_norm_fit(specs[i], betas[i], dim, static_cast<int>(w[0]), static_cast<int>(w[1]), e.grid);
  });
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const double predicted = dim * *kernel_growth_exponent(specs[i], betas[i]);
    const double slope = fits[i].fit.slope;
    const bool ok = fits[i].converged && slope >= predicted - lower && slope <= predicted + upper;
    rep.rows.push_back({"case[" + std::to_string(i) + "]", specs[i].str(), betas[i], predicted, slope,
                        fits[i].fit.residual, fits[i].converged, ok});
    rep.gates.push_back(gate("slope[" + specs[i].str() + ",beta=" + fmt(betas[i]) + "]", ok,
                             "slope " + fmt(slope) + " in [" + fmt(predicted - lower) + ", " + fmt(predicted + upper) + "]"));
  }
}

double rel_dev(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

double row_deviation(const ScenarioRow& a, const ScenarioRow& b) {
  double d = rel_dev(a.K, b.K);
  for (std::size_t i = 0; i < a.probe_ratios.size() && i < b.probe_ratios.size(); ++i)
    d = std::max(d, rel_dev(a.probe_ratios[i], b.probe_ratios[i]));
  return d;
}

void theorem_scenario_run(const ExperimentConfig& e, std::uint64_t seed, int workers, ExperimentReport& rep) {
  const json& p = e.params;
  const json& h = p.at("hypothesis");
  TheoremHypothesis hyp;
  hyp.dim = p.at("dim");
  hyp.p = num(h.at("p"));
  hyp.q = num(h.at("q"));
  hyp.alpha = num(h.at("alpha"));
  hyp.t = num(h.at("t"));
  hyp.s = num(h.at("s"));
  hyp.beta = num(h.at("beta"));
  hyp.m = h.at("m");
  hyp.source = parse_family(h.at("source").get<std::string>());
  hyp.target = parse_family(h.at("target").get<std::string>());
  const json& sw = p.at("sweep");
  const double step = sw.at("step");
  std::vector<GSpec> family = kernel_sweep(hyp.threshold_gamma(), step, sw.at("j_lo"), sw.at("j_hi"));
  const std::size_t n_kernel = family.size();
  for (const auto& x : p.at("extra")) {
    GSpec g;
    g.kind = x == "zero" ? GSpec::Kind::zero : GSpec::Kind::constant;
    g.id = x.get<std::string>();
    family.push_back(g);
  }
  ScenarioOptions so;
  so.window = {static_cast<int>(p.at("window")[0].get<double>()), static_cast<int>(p.at("window")[1].get<double>())};
  so.w_g_level = sw.at("w_level");
  so.corpus_count = p.at("corpus").at("count");
  so.corpus_degree = p.at("corpus").at("degree");
  so.seed = seed;
  so.rule = {p.at("rule").at("flat_slope"), p.at("rule").at("growth_factor")};
  const double min_frac = p.at("min_excess_fraction");
  const json& refine = p.at("refinement");
  const bool do_refine = refine.at("enabled");

  std::vector<ScenarioRow> rows(family.size()), fine(do_refine ? family.size() : 0);
  const GridOptions fine_grid = e.grid.refined(refine.at("factor"));
  parallel_for(family.size() * (do_refine ? 2 : 1), workers, [&](std::size_t i) {
    if (i < family.size()) rows[i] = scenario_row(hyp, family[i], so, e.grid);
    else fine[i - family.size()] = scenario_row(hyp, family[i - family.size()], so, fine_grid);
  });

  double worst_refine = 0.0;
  bool verdicts_same = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    Cell rv = std::monostate{}, rd = std::monostate{};
    if (do_refine) {
      const double d = row_deviation(r, fine[i]);
      worst_refine = std::max(worst_refine, d);
      verdicts_same = verdicts_same && fine[i].verdict == r.verdict;
      rv = to_string(fine[i].verdict);
      rd = d;
    }
    rep.rows.push_back({r.g_id, opt_cell(r.gamma), r.K, r.K_slope, r.max_ratio, r.necessity_slope,
                        to_string(r.verdict), opt_cell(r.excess), r.growth_factor, r.flags, rv, rd});
  }

  // Gates over the kernel sweep, ordered by gamma.
  int flips = 0;
  bool flip_located = true, bounded_ok = true, unbounded_ok = true, none_inconclusive = true;
  std::string detail_b, detail_u;
  for (std::size_t i = 0; i < n_kernel; ++i) {
    const auto& r = rows[i];
    const double eps = *r.excess;
    none_inconclusive = none_inconclusive && r.verdict != Verdict::inconclusive;
    if (i > 0 && r.verdict != rows[i - 1].verdict) {
      ++flips;
      // the condition changes finiteness between excess <= 0 and excess > 0
      const double prev = *rows[i - 1].excess;
      if (!(prev <= 1e-12 + step && eps > -step + 1e-12)) flip_located = false;
    }
    if (eps <= 1e-12) {
      if (!(r.necessity_slope <= so.rule.flat_slope)) {
        bounded_ok = false;
        detail_b += r.g_id + " slope " + fmt(r.necessity_slope) + "; ";
      }
    } else if (!(r.necessity_slope >= min_frac * eps)) {
      unbounded_ok = false;
      detail_u += r.g_id + " slope " + fmt(r.necessity_slope) + " < " + fmt(min_frac * eps) + "; ";
    }
  }
  rep.gates.push_back(gate("single-verdict-flip", flips == 1 && flip_located && none_inconclusive,
                           std::to_string(flips) + " flip(s)" + (none_inconclusive ? "" : ", inconclusive rows present")));
  rep.gates.push_back(gate("bounded-side-slopes", bounded_ok, bounded_ok ? "necessity slopes <= " + fmt(so.rule.flat_slope) : detail_b));
  rep.gates.push_back(gate("unbounded-side-slopes", unbounded_ok,
                           unbounded_ok ? "necessity slopes >= " + fmt(min_frac) + " x excess" : detail_u));
  bool extras_ok = true;
  for (std::size_t i = n_kernel; i < rows.size(); ++i) {
    extras_ok = extras_ok && rows[i].verdict == Verdict::consistent_bounded;
    if (family[i].kind == GSpec::Kind::zero) extras_ok = extras_ok && rows[i].K == 0.0;
  }
  if (rows.size() > n_kernel) rep.gates.push_back(gate("extras-bounded", extras_ok, "constant and zero multipliers"));
  if (do_refine) {
    const double tol = refine.at("tol");
    rep.gates.push_back(gate("grid-refinement", verdicts_same && worst_refine <= tol,
                             "max relative change " + fmt(worst_refine) + (verdicts_same ? ", verdicts identical" : ", verdicts differ")));
  }
  rep.extra["threshold_gamma"] = hyp.threshold_gamma();
  rep.extra["tau"] = hyp.tau();
}

void proposition_run(const ExperimentConfig& e, std::uint64_t, int workers, ExperimentReport& rep) {
  const json& p = e.params;
  PropositionParams prm;
  prm.dim = p.at("dim");
  prm.v = num(p.at("v"));
  prm.p = num(p.at("p"));
  prm.s = num(p.at("s"));
  prm.m = p.at("m");
  const ProfileWindow window{static_cast<int>(p.at("window")[0].get<double>()),
                             static_cast<int>(p.at("window")[1].get<double>())};
  const double w_g = 1.0 - std::exp2(-p.at("w_level").get<double>());
  const double flat = p.at("rule").at("flat_slope"), factor = p.at("rule").at("growth_factor");
  const double min_frac = p.at("min_excess_fraction");
  const json& refine = p.at("refinement");
  const bool do_refine = refine.at("enabled");

  struct Item {
    std::string id;
    MultiplierSeq c;
    std::optional<double> gamma;
  };
  std::vector<Item> items;
  for (const auto& m : p.at("multipliers")) {
    const std::string type = m.at("type");
    if (type == "constant") {
      const double v = m.at("value");
      items.push_back({"constant(" + fmt(v) + ")", MultiplierSeq::explicit_table(CoeffFn::constant(prm.dim, v)), std::nullopt});
    } else if (type == "kernel") {
      const double g = m.at("gamma");
      items.push_back({"kernel(gamma=" + fmt(g) + ")",
                       MultiplierSeq::kernel(std::vector<cplx>(static_cast<std::size_t>(prm.dim), w_g), g), g});
    } else if (type == "ones") {
      items.push_back({"ones", MultiplierSeq::ones(prm.dim), std::nullopt});
    } else {
      items.push_back({"zero", MultiplierSeq::zero(prm.dim), std::nullopt});
    }
  }
  std::vector<PropositionResult> res(items.size()), fine(do_refine ? items.size() : 0);
  const GridOptions fine_grid = e.grid.refined(refine.at("factor"));
  parallel_for(items.size() * (do_refine ? 2 : 1), workers, [&](std::size_t i) {
    if (i < items.size()) res[i] = proposition_probe(items[i].c, prm, window, e.grid);
    else fine[i - items.size()] = proposition_probe(items[i - items.size()].c, prm, window, fine_grid);
  });
  bool refine_ok = true;
  double worst_refine = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& r = res[i];
    const bool has_excess = items[i].gamma.has_value();
    const double ex = has_excess ? items[i].gamma.value_or(0.0) - prm.threshold_gamma() : 0.0;
    const bool bounded = r.probe.converged && r.condition.slope <= flat && r.probe.fit.slope <= flat &&
                         r.probe.growth_factor < factor;
    Cell rd = std::monostate{};
    if (do_refine) {
      double d = rel_dev(r.condition.sup, fine[i].condition.sup);
      for (std::size_t k = 0; k < r.probe.ratios.size(); ++k)
        d = std::max(d, rel_dev(r.probe.ratios[k].value, fine[i].probe.ratios[k].value));
      const bool fb = fine[i].probe.converged && fine[i].condition.slope <= flat &&
                      fine[i].probe.fit.slope <= flat && fine[i].probe.growth_factor < factor;
      refine_ok = refine_ok && fb == bounded;
      worst_refine = std::max(worst_refine, d);
      rd = d;
    }
    rep.rows.push_back({items[i].id, opt_cell(items[i].gamma), has_excess ? Cell(ex) : Cell(), r.condition.sup, r.condition.slope,
                        r.probe.fit.slope, r.probe.growth_factor, bounded, rd});
    if (ex <= 1e-12) {
      rep.gates.push_back(gate("bounded[" + items[i].id + "]", bounded,
                               "ratio slope " + fmt(r.probe.fit.slope) + ", growth " + fmt(r.probe.growth_factor)));
    } else {
      const bool ok = r.probe.converged && r.probe.fit.slope >= min_frac * ex;
      rep.gates.push_back(gate("growth[" + items[i].id + "]", ok,
                               "ratio slope " + fmt(r.probe.fit.slope) + " vs " + fmt(min_frac) + " x excess " + fmt(ex)));
    }
  }
  if (do_refine) {
    const double tol = refine.at("tol");
    rep.gates.push_back(gate("grid-refinement", refine_ok && worst_refine <= tol,
                             "max relative change " + fmt(worst_refine)));
  }
  rep.extra["tau"] = prm.tau();
  rep.extra["threshold_gamma"] = prm.threshold_gamma();
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& e, std::uint64_t seed, int workers) {
  ExperimentReport rep;
  rep.name = e.name;
  rep.kind = e.kind;
  rep.columns = columns_of(e.kind);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (e.kind) {
      case ExperimentKind::norm_table: norm_table(e, seed, workers, rep); break;
      case ExperimentKind::parseval_suite: parseval_suite(e, seed, workers, rep); break;
      case ExperimentKind::pairing_check: pairing_check(e, seed, workers, rep); break;
      case ExperimentKind::embedding_sweep: embedding_sweep(e, seed, workers, rep); break;
      case ExperimentKind::ds_sweep: ds_sweep(e, seed, workers, rep); break;
      case ExperimentKind::beta_integral_fit: beta_integral_fit(e, seed, workers, rep); break;
      case ExperimentKind::lemma3_fit: lemma3_fit(e, seed, workers, rep); break;
      case ExperimentKind::theorem_scenario: theorem_scenario_run(e, seed, workers, rep); break;
      case ExperimentKind::proposition_probe: proposition_run(e, seed, workers, rep); break;
    }
  } catch (const std::exception& ex) {
    rep.gates.push_back(gate("execution", false, ex.what()));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

Report run(const RunConfig& cfg, const RunOptions& opts) {
  Report rep;
  rep.config = cfg.echo;
  const int workers = opts.workers > 0 ? opts.workers : worker_count_from_env();
  if (opts.only && !cfg.find(*opts.only))
    fail(ErrorCode::invalid_argument, "no experiment named '" + *opts.only + "'");
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& e : cfg.experiments) {
    if (opts.only && e.name != *opts.only) continue;
    rep.experiments.push_back(run_experiment(e, cfg.seed, workers));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace polydisc
