#include "polydisc/polydisc.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "config.hpp"
#include "polydisc/coeff_fn.hpp"
#include "polydisc/norms.hpp"
#include "report.hpp"
#include "runner.hpp"

struct pd_coeff_fn {
  polydisc::CoeffFn f;
};

struct pd_config {
  polydisc::RunConfig cfg;
  std::vector<std::string> kinds;
};

struct pd_report {
  polydisc::Report report;
  std::vector<std::string> names;
  std::vector<const polydisc::Gate*> gates;
};

namespace {

thread_local std::string last_error;

pd_status status_of(polydisc::ErrorCode c) {
  return static_cast<pd_status>(static_cast<int>(c));
}

template <class F>
pd_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return PD_OK;
  } catch (const polydisc::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PD_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PD_INTERNAL;
  }
}

pd_status null_arg(const char* what) {
  last_error = std::string(what) + " must not be null";
  return PD_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pd_status make_fn(polydisc::CoeffFn f, pd_coeff_fn** out) {
  *out = new pd_coeff_fn{std::move(f)};
  return PD_OK;
}

pd_status wrap_config(polydisc::RunConfig cfg, pd_config** out) {
  auto* c = new pd_config{std::move(cfg), {}};
  for (const auto& e : c->cfg.experiments) c->kinds.push_back(polydisc::to_string(e.kind));
  *out = c;
  return PD_OK;
}

std::string all_problems(const polydisc::ConfigError& e) {
  std::string s;
  for (const auto& p : e.problems()) s += (s.empty() ? "" : "\n") + p;
  return s;
}

template <class Load>
pd_status config_call(Load&& load, pd_config** out) {
  try {
    last_error.clear();
    return wrap_config(load(), out);
  } catch (const polydisc::ConfigError& e) {
    last_error = all_problems(e);
    return PD_PARSE;
  } catch (const polydisc::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return PD_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* pd_version(void) {
  static const std::string v = polydisc::version_string();
  return v.c_str();
}

const char* pd_last_error(void) { return last_error.c_str(); }

pd_status pd_coeff_from_file(const char* path, pd_coeff_fn** out) {
  if (!path || !out) return null_arg("path and out");
  return guarded([&] { make_fn(polydisc::read_coeff_file(path), out); });
}

pd_status pd_coeff_from_text(const char* text, pd_coeff_fn** out) {
  if (!text || !out) return null_arg("text and out");
  return guarded([&] { make_fn(polydisc::parse_coeff_text(text), out); });
}

pd_status pd_coeff_from_dense(int dim, const size_t* degree, const double* re, const double* im, pd_coeff_fn** out) {
  if (!degree || !re || !out) return null_arg("degree, re and out");
  return guarded([&] {
    polydisc::check_dim(dim);
    polydisc::Degree d(degree, degree + dim);
    std::size_t n = 1;
    for (auto x : d) n *= x + 1;
    std::vector<polydisc::cplx> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = {re[i], im ? im[i] : 0.0};
    make_fn(polydisc::CoeffFn(std::move(d), std::move(a)), out);
  });
}

pd_status pd_coeff_kernel(int dim, const double* w, double beta, pd_coeff_fn** out) {
  if (!w || !out) return null_arg("w and out");
  return guarded([&] {
    polydisc::check_dim(dim);
    std::vector<polydisc::cplx> ws(w, w + dim);
    make_fn(polydisc::bergman_kernel(ws, beta), out);
  });
}

pd_status pd_coeff_random(uint64_t seed, int dim, size_t degree, const char* law, pd_coeff_fn** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    polydisc::check_dim(dim);
    const auto l = polydisc::parse_coeff_law(law ? law : "unit-disk");
    make_fn(polydisc::random_poly(seed, dim, polydisc::Degree(static_cast<std::size_t>(dim), degree), l), out);
  });
}

int pd_coeff_dim(const pd_coeff_fn* f) { return f ? f->f.dim() : 0; }
size_t pd_coeff_size(const pd_coeff_fn* f) { return f ? f->f.size() : 0; }

pd_status pd_coeff_evaluate(const pd_coeff_fn* f, const double* z_re, const double* z_im, double* out_re,
                            double* out_im) {
  if (!f || !z_re || !z_im || !out_re || !out_im) return null_arg("arguments");
  return guarded([&] {
    std::vector<polydisc::cplx> z(static_cast<std::size_t>(f->f.dim()));
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = {z_re[j], z_im[j]};
    const auto v = f->f.evaluate(z);
    *out_re = v.real();
    *out_im = v.imag();
  });
}

pd_status pd_coeff_frac_derivative(const pd_coeff_fn* f, double beta, pd_coeff_fn** out) {
  if (!f || !out) return null_arg("f and out");
  return guarded([&] { make_fn(polydisc::frac_derivative(f->f, beta), out); });
}

pd_status pd_coeff_format(const pd_coeff_fn* f, char** out) {
  if (!f || !out) return null_arg("f and out");
  return guarded([&] { *out = dup(polydisc::format_coeff_text(f->f)); });
}

void pd_coeff_free(pd_coeff_fn* f) { delete f; }

pd_status pd_space_norm(const pd_coeff_fn* f, const pd_space* space, double* value, int* converged) {
  if (!f || !space || !value) return null_arg("f, space and value");
  return guarded([&] {
    polydisc::SpaceSpec s;
    s.family = static_cast<polydisc::SpaceSpec::Family>(space->family);
    s.p = space->p;
    s.q = space->q;
    s.alpha = space->alpha;
    s.s = space->s;
    s.beta = space->beta;
    const auto r = polydisc::space_norm(f->f, s);
    *value = r.value;
    if (converged) *converged = r.converged ? 1 : 0;
  });
}

pd_status pd_integral_mean(const pd_coeff_fn* f, const double* r, double p, double* value) {
  if (!f || !r || !value) return null_arg("f, r and value");
  return guarded([&] {
    *value = polydisc::m_p_norm(f->f, std::span<const double>(r, static_cast<std::size_t>(f->f.dim())), p);
  });
}

pd_status pd_config_parse(const char* text, pd_config** out) {
  if (!text || !out) return null_arg("text and out");
  return config_call([&] { return polydisc::parse_config(text); }, out);
}

pd_status pd_config_load(const char* path, pd_config** out) {
  if (!path || !out) return null_arg("path and out");
  return config_call([&] { return polydisc::load_config(path); }, out);
}

size_t pd_config_experiment_count(const pd_config* cfg) { return cfg ? cfg->cfg.experiments.size() : 0; }

const char* pd_config_experiment_name(const pd_config* cfg, size_t i) {
  if (!cfg || i >= cfg->cfg.experiments.size()) return nullptr;
  return cfg->cfg.experiments[i].name.c_str();
}

const char* pd_config_experiment_kind(const pd_config* cfg, size_t i) {
  if (!cfg || i >= cfg->kinds.size()) return nullptr;
  return cfg->kinds[i].c_str();
}

const char* pd_config_out_dir(const pd_config* cfg) { return cfg ? cfg->cfg.out_dir.c_str() : nullptr; }

pd_format pd_config_format(const pd_config* cfg) {
  return cfg ? static_cast<pd_format>(static_cast<int>(cfg->cfg.format)) : PD_FORMAT_BOTH;
}

void pd_config_set_seed(pd_config* cfg, uint64_t seed) {
  if (cfg) polydisc::override_seed(cfg->cfg, seed);
}

void pd_config_free(pd_config* cfg) { delete cfg; }

pd_status pd_run(const pd_config* cfg, const char* only, int workers, pd_report** out) {
  if (!cfg || !out) return null_arg("cfg and out");
  return guarded([&] {
    polydisc::RunOptions opts;
    if (only) opts.only = only;
    opts.workers = workers;
    auto* r = new pd_report{polydisc::run(cfg->cfg, opts), {}, {}};
    for (const auto& e : r->report.experiments)
      for (const auto& g : e.gates) {
        r->names.push_back(e.name + "/" + g.name);
        r->gates.push_back(&g);
      }
    *out = r;
  });
}

pd_status pd_report_emit(const pd_report* r, const char* dir, pd_format format) {
  if (!r || !dir) return null_arg("report and dir");
  return guarded([&] { polydisc::emit(r->report, dir, static_cast<polydisc::OutputFormat>(static_cast<int>(format))); });
}

size_t pd_report_gate_count(const pd_report* r) { return r ? r->gates.size() : 0; }
size_t pd_report_failed_count(const pd_report* r) { return r ? r->report.failed_gates() : 0; }

const char* pd_report_gate_name(const pd_report* r, size_t i) {
  return r && i < r->names.size() ? r->names[i].c_str() : nullptr;
}

int pd_report_gate_passed(const pd_report* r, size_t i) {
  return r && i < r->gates.size() && r->gates[i]->passed ? 1 : 0;
}

const char* pd_report_gate_detail(const pd_report* r, size_t i) {
  return r && i < r->gates.size() ? r->gates[i]->detail.c_str() : nullptr;
}

pd_status pd_report_json(const pd_report* r, int include_timing, char** out) {
  if (!r || !out) return null_arg("report and out");
  return guarded([&] { *out = dup(polydisc::to_json(r->report, include_timing != 0).dump(2)); });
}

void pd_report_free(pd_report* r) { delete r; }

void pd_string_free(char* s) { delete[] s; }

}  // extern "C"
