#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "polydisc/analysis.hpp"
#include "polydisc/multiplier_lab.hpp"
#include "polydisc/norms.hpp"

namespace polydisc {

using json = nlohmann::ordered_json;

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::norm_table, "norm-table"},
    {ExperimentKind::parseval_suite, "parseval-suite"},
    {ExperimentKind::pairing_check, "pairing-check"},
    {ExperimentKind::embedding_sweep, "embedding-sweep"},
    {ExperimentKind::ds_sweep, "ds-sweep"},
    {ExperimentKind::beta_integral_fit, "beta-integral-fit"},
    {ExperimentKind::lemma3_fit, "lemma3-fit"},
    {ExperimentKind::theorem_scenario, "theorem-scenario"},
    {ExperimentKind::proposition_probe, "proposition-probe"},
};

std::string join_problems(const std::vector<std::string>& v) {
  std::string out = "invalid configuration:";
  for (const auto& p : v) out += "\n  " + p;
  return out;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& e : kKinds)
    if (e.kind == k) return e.name;
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& e : kKinds)
    if (name == e.name) return e.kind;
  fail(ErrorCode::parse, "unknown experiment kind '" + name + "'");
}

const std::vector<ExperimentKind>& all_experiment_kinds() {
  static const std::vector<ExperimentKind> v = [] {
    std::vector<ExperimentKind> out;
    for (const auto& e : kKinds) out.push_back(e.kind);
    return out;
  }();
  return v;
}

OutputFormat parse_output_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "both") return OutputFormat::both;
  fail(ErrorCode::parse, "unknown output format '" + name + "' (csv, json, both)");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::both: return "both";
  }
  return "?";
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(ErrorCode::parse, join_problems(problems)), problems_(std::move(problems)) {}

const ExperimentConfig* RunConfig::find(const std::string& name) const {
  for (const auto& e : experiments)
    if (e.name == name) return &e;
  return nullptr;
}

json default_params(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::norm_table:
      return json::parse(R"({
        "dim": 1, "degree": 16,
        "functions": [{"type": "random", "count": 4, "law": "unit-disk"}],
        "spaces": [{"family": "hardy", "p": 2}]})");
    case ExperimentKind::parseval_suite:
      return json::parse(R"({
        "dims": [1, 2], "count": 50, "degree": 32,
        "radii": [0.1, 0.5, 0.9, 0.99, 0.999], "law": "unit-disk", "tol": 1e-9})");
    case ExperimentKind::pairing_check:
      return json::parse(R"({
        "dim": 2, "count": 20, "degree": 8, "radius": 0.8, "alphas": [0.5, 1.0, 2.5],
        "variants": ["as-stated", "proof-form"], "k_max": 16,
        "lhs_tol": 1e-10, "rhs_tol": 1e-8})");
    case ExperimentKind::embedding_sweep:
      return json::parse(R"({
        "dim": 1, "source": "triebel-f",
        "cases": [{"p": 2, "q": 2, "s": 2, "alpha": 1}, {"p": 1, "q": 1, "s": 2, "alpha": 0.5}],
        "mean_growth": [{"t": 1, "beta": 0.5}], "radii": [0.5, 0.9, 0.99],
        "count": 100, "degree": 8, "law": "decaying", "stability": 0.1})");
    case ExperimentKind::ds_sweep:
      return json::parse(R"({
        "dim": 1, "v": [0.6, 0.8, 1.0], "q": [0, 1], "t": [1, 2],
        "count": 50, "degree": 16,
        "kernels": [{"w": 0.5, "beta": 0}, {"w": 0.9, "beta": 0}, {"w": 0.9, "beta": 1},
                    {"w": 0.97, "beta": 0.5}, {"w": 0.99, "beta": 0}],
        "shift": 1.0, "tol": 1e-9})");
    case ExperimentKind::beta_integral_fit:
      return json::parse(R"({
        "cases": [{"alpha": 0, "lambda": 2}, {"alpha": 1, "lambda": 3}, {"alpha": 0.5, "lambda": 2}],
        "window": [12, 20], "per_octave": 1, "tol": 0.02})");
    case ExperimentKind::lemma3_fit:
      return json::parse(R"({
        "dim": 1, "window": [4, 10], "lower": 0.1, "upper": 0.05,
        "cases": [{"family": "hardy", "p": 1, "beta": 1},
                  {"family": "hardy", "p": 2, "beta": 1},
                  {"family": "hardy", "p": 2, "beta": 2},
                  {"family": "mixed-a", "p": 1, "q": 1, "alpha": 0.5, "beta": 1},
                  {"family": "mixed-a", "p": 2, "q": 2, "alpha": 1, "beta": 2},
                  {"family": "triebel-f", "p": 1, "q": 1, "alpha": 0.5, "beta": 1},
                  {"family": "triebel-f", "p": 2, "q": 2, "alpha": 1, "beta": 2}]})");
    case ExperimentKind::theorem_scenario:
      return json::parse(R"({
        "dim": 1,
        "hypothesis": {"p": 1, "q": 1, "alpha": 0.5, "t": 1, "s": 1, "beta": 0.25, "m": 2,
                       "source": "triebel-f", "target": "mixed-a"},
        "sweep": {"step": 0.1, "j_lo": -5, "j_hi": 6, "w_level": 16},
        "extra": ["constant", "zero"],
        "window": [4, 10],
        "corpus": {"count": 4, "degree": 16},
        "rule": {"flat_slope": 0.05, "growth_factor": 3},
        "min_excess_fraction": 0.8,
        "refinement": {"enabled": false, "factor": 2, "tol": 1e-4}})");
    case ExperimentKind::proposition_probe:
      return json::parse(R"({
        "dim": 1, "v": 2, "p": 2, "s": 0.5, "m": 1,
        "multipliers": [{"type": "constant", "value": 1}, {"type": "kernel", "gamma": 1.0}],
        "w_level": 16, "window": [4, 10], "min_excess_fraction": 0.5,
        "rule": {"flat_slope": 0.05, "growth_factor": 3},
        "refinement": {"enabled": false, "factor": 2, "tol": 1e-4}})");
  }
  return json::object();
}

namespace {

// Walks one JSON object against defaults, recording every problem and
// filling in absent keys.
class Reader {
 public:
  Reader(const json& in, std::string path, std::vector<std::string>& problems)
      : in_(in), path_(std::move(path)), problems_(problems) {
    if (!in_.is_object()) problem("", "must be an object");
  }

  const json& out() const { return out_; }
  std::string where(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "config" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }
  void problem(const std::string& key, const std::string& msg) {
    problems_.push_back(where(key) + ": " + msg);
  }

  bool has(const std::string& key) const { return in_.is_object() && in_.contains(key); }

  const json* take(const std::string& key) {
    seen_.insert(key);
    if (!in_.is_object() || !in_.contains(key)) return nullptr;
    return &in_.at(key);
  }

  double number(const std::string& key, const json& def, const std::function<bool(double)>& ok,
                const std::string& predicate) {
    const json* v = take(key);
    double x = 0.0;
    if (!v) {
      if (def.is_null()) {
        problem(key, "required");
        return 0.0;
      }
      x = def.get<double>();
    } else if (v->is_number()) {
      x = v->get<double>();
    } else if (v->is_string() && (v->get<std::string>() == "inf" || v->get<std::string>() == "infinity")) {
      x = kInfinity;
    } else {
      problem(key, "must be a number");
      return 0.0;
    }
    if (ok && !ok(x)) problem(key, predicate + " required (got " + fmt(x) + ")");
    if (std::isinf(x))
      out_[key] = "inf";
    else
      out_[key] = x;
    return x;
  }

  long long integer(const std::string& key, const json& def, long long lo, long long hi) {
    const json* v = take(key);
    long long x = 0;
    if (!v) {
      if (def.is_null()) {
        problem(key, "required");
        return lo;
      }
      x = def.get<long long>();
    } else if (v->is_number_integer() || v->is_number_unsigned()) {
      x = v->get<long long>();
    } else if (v->is_number_float() && std::floor(v->get<double>()) == v->get<double>()) {
      x = static_cast<long long>(v->get<double>());
    } else {
      problem(key, "must be an integer");
      return lo;
    }
    if (x < lo || x > hi)
      problem(key, std::to_string(lo) + " ≤ " + key + " ≤ " + std::to_string(hi) + " required (got " +
                       std::to_string(x) + ")");
    out_[key] = x;
    return x;
  }

  std::uint64_t unsigned64(const std::string& key, std::uint64_t def) {
    const json* v = take(key);
    std::uint64_t x = def;
    if (v) {
      if (v->is_number_unsigned() || (v->is_number_integer() && v->get<long long>() >= 0))
        x = v->get<std::uint64_t>();
      else
        problem(key, "must be a nonnegative integer");
    }
    out_[key] = x;
    return x;
  }

  bool boolean(const std::string& key, bool def) {
    const json* v = take(key);
    bool x = def;
    if (v) {
      if (v->is_boolean())
        x = v->get<bool>();
      else
        problem(key, "must be true or false");
    }
    out_[key] = x;
    return x;
  }

  std::string choice(const std::string& key, const json& def, const std::vector<std::string>& options) {
    const json* v = take(key);
    std::string x;
    if (!v) {
      if (def.is_null()) {
        problem(key, "required");
        return {};
      }
      x = def.get<std::string>();
    } else if (v->is_string()) {
      x = v->get<std::string>();
    } else {
      problem(key, "must be a string");
      return {};
    }
    if (!options.empty() && std::find(options.begin(), options.end(), x) == options.end()) {
      std::string opts;
      for (std::size_t i = 0; i < options.size(); ++i) opts += (i ? ", " : "") + options[i];
      problem(key, "unknown value '" + x + "' (expected one of " + opts + ")");
    }
    out_[key] = x;
    return x;
  }

  std::vector<double> numbers(const std::string& key, const json& def, const std::function<bool(double)>& ok,
                              const std::string& predicate, std::size_t min_len = 1) {
    const json* v = take(key);
    const json& src = v ? *v : def;
    std::vector<double> xs;
    if (!src.is_array()) {
      problem(key, "must be an array of numbers");
      return xs;
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (!src[i].is_number()) {
        problem(key + "[" + std::to_string(i) + "]", "must be a number");
        continue;
      }
      const double x = src[i].get<double>();
      if (ok && !ok(x))
        problem(key + "[" + std::to_string(i) + "]", predicate + " required (got " + fmt(x) + ")");
      xs.push_back(x);
    }
    if (xs.size() < min_len) problem(key, "needs at least " + std::to_string(min_len) + " entries");
    out_[key] = xs;
    return xs;
  }

  /// Array of objects, each validated by `each` with its own Reader.
  void objects(const std::string& key, const json& def,
               const std::function<void(Reader&)>& each, std::size_t min_len = 1) {
    const json* v = take(key);
    const json& src = v ? *v : def;
    json arr = json::array();
    if (!src.is_array()) {
      problem(key, "must be an array");
      return;
    }
    for (std::size_t i = 0; i < src.size(); ++i) {
      Reader r(src[i], where(key) + "[" + std::to_string(i) + "]", problems_);
      if (src[i].is_object()) {
        each(r);
        r.finish();
      }
      arr.push_back(r.out());
    }
    if (src.size() < min_len) problem(key, "needs at least " + std::to_string(min_len) + " entries");
    out_[key] = arr;
  }

  void object(const std::string& key, const json& def, const std::function<void(Reader&)>& each) {
    const json* v = take(key);
    const json empty = json::object();
    const json& src = v ? *v : empty;
    Reader r(src, where(key), problems_);
    if (src.is_object()) {
      r.defaults_ = def.is_object() ? def : json::object();
      each(r);
      r.finish();
    }
    out_[key] = r.out();
  }

  void set(const std::string& key, json value) { out_[key] = std::move(value); }

  json def(const std::string& key) const {
    return defaults_.is_object() && defaults_.contains(key) ? defaults_.at(key) : json();
  }

  void finish() {
    if (!in_.is_object()) return;
    for (auto it = in_.begin(); it != in_.end(); ++it)
      if (!seen_.count(it.key())) problem(it.key(), "unknown key");
  }

 private:
  static std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  const json& in_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
  json out_ = json::object();
  json defaults_ = json::object();
};

const auto positive = [](double x) { return x > 0.0; };
const auto finite_positive = [](double x) { return x > 0.0 && std::isfinite(x); };
const auto unit_radius = [](double x) { return x >= 0.0 && x < 1.0; };
const auto any_number = [](double x) { return std::isfinite(x); };

GridOptions read_grid(Reader& r, const GridOptions& base) {
  GridOptions g = base;
  g.torus_oversample = static_cast<int>(r.integer("torus_oversample", base.torus_oversample, 1, 64));
  g.torus_min = static_cast<int>(r.integer("torus_min", base.torus_min, 1, 1 << 20));
  g.radial_points = static_cast<int>(r.integer("radial_points", base.radial_points, 1, 256));
  g.radial_panels = static_cast<int>(r.integer("radial_panels", base.radial_panels, -1, 60));
  g.ladder_per_octave = static_cast<int>(r.integer("ladder_per_octave", base.ladder_per_octave, 1, 64));
  g.ladder_min_depth = static_cast<int>(r.integer("ladder_min_depth", base.ladder_min_depth, 1, 60));
  g.ladder_max_depth = static_cast<int>(r.integer("ladder_max_depth", base.ladder_max_depth, 1, 60));
  g.sup_tol = r.number("sup_tol", base.sup_tol, finite_positive, "sup_tol > 0");
  g.inf_tol = r.number("inf_tol", base.inf_tol, finite_positive, "inf_tol > 0");
  g.torus_tol = r.number("torus_tol", base.torus_tol, finite_positive, "torus_tol > 0");
  g.torus_max_doublings = static_cast<int>(r.integer("torus_max_doublings", base.torus_max_doublings, 0, 12));
  if (g.ladder_max_depth < g.ladder_min_depth) r.problem("ladder_max_depth", "ladder_max_depth ≥ ladder_min_depth required");
  return g;
}

const std::vector<std::string> kFamilies = {"hardy", "mixed-a", "triebel-f", "sup-d", "limit-f", "limit-a"};
const std::vector<std::string> kLaws = {"unit-disk", "gaussian", "decaying"};

// Space specs appear in several kinds; parameters not used by the family are rejected.
SpaceSpec read_space(Reader& r, bool allow_kernel_beta = false) {
  const std::string fam = r.choice("family", json(), kFamilies);
  SpaceSpec spec;
  if (std::find(kFamilies.begin(), kFamilies.end(), fam) == kFamilies.end()) return spec;
  spec.family = parse_family(fam);
  using F = SpaceSpec::Family;
  auto num = [&](const char* key) { return r.number(key, json(), nullptr, ""); };
  switch (spec.family) {
    case F::hardy: spec.p = num("p"); break;
    case F::mixed_a:
    case F::triebel_f:
      spec.p = num("p");
      spec.q = num("q");
      spec.alpha = num("alpha");
      break;
    case F::sup_d:
      spec.alpha = num("alpha");
      if (!allow_kernel_beta) spec.beta = num("beta");
      else spec.beta = r.number("weight", json(), nullptr, "");
      break;
    case F::limit_f:
    case F::limit_a:
      spec.p = num("p");
      spec.s = num("s");
      break;
  }
  for (const auto& v : spec.violations()) r.problem("", spec.str() + ": " + v);
  return spec;
}

void read_function_spec(Reader& r, int dim) {
  const std::string type = r.choice("type", json(), {"random", "kernel", "lacunary", "constant", "file"});
  if (type == "random") {
    r.integer("count", 1, 1, 100000);
    r.choice("law", "unit-disk", kLaws);
    if (r.has("degree")) r.integer("degree", 0, 0, 1 << 20);
  } else if (type == "kernel") {
    const json* w = r.take("w");
    json wout = json::array();
    if (!w) {
      r.problem("w", "required");
    } else {
      std::vector<double> ws;
      if (w->is_number()) ws.assign(static_cast<std::size_t>(dim), w->get<double>());
      else if (w->is_array()) {
        for (const auto& x : *w) ws.push_back(x.is_number() ? x.get<double>() : 2.0);
      }
      if (static_cast<int>(ws.size()) != dim) r.problem("w", "needs one entry per dimension");
      for (double x : ws) {
        if (!(std::abs(x) < 1.0)) r.problem("w", "|w_j| < 1 required");
        wout.push_back(x);
      }
    }
    // stored as the expanded vector; the reader already recorded "w" as seen
    r.number("beta", json(), [](double b) { return b > -1.0; }, "beta > -1");
    r.set("w", wout);
  } else if (type == "lacunary") {
    r.integer("levels", json(), 1, 20);
  } else if (type == "constant") {
    r.number("value", 1.0, any_number, "finite value");
  } else if (type == "file") {
    r.choice("path", json(), {});
  }
}

void read_window(Reader& r, const json& def, int lo_min) {
  const auto w = r.numbers("window", def, [](double x) { return std::floor(x) == x && x >= 0 && x <= 50; },
                           "integer level in 0..50", 2);
  if (w.size() == 2 && !(w[1] - w[0] >= 3)) r.problem("window", "window must span at least 4 levels");
  if (w.size() != 2) r.problem("window", "must be [level_lo, level_hi]");
  if (!w.empty() && w[0] < lo_min) r.problem("window", "level_lo ≥ " + std::to_string(lo_min) + " required");
}

void read_rule(Reader& r, const json& def) {
  r.object("rule", def, [](Reader& q) {
    q.number("flat_slope", q.def("flat_slope"), any_number, "finite flat_slope");
    q.number("growth_factor", q.def("growth_factor"), [](double x) { return x > 1.0; }, "growth_factor > 1");
  });
}

void read_refinement(Reader& r, const json& def) {
  r.object("refinement", def, [](Reader& q) {
    q.boolean("enabled", q.def("enabled").get<bool>());
    q.integer("factor", q.def("factor"), 2, 8);
    q.number("tol", q.def("tol"), finite_positive, "tol > 0");
  });
}

void read_params(Reader& r, ExperimentKind kind) {
  const json d = default_params(kind);
  auto dim_of = [&]() { return static_cast<int>(r.integer("dim", d.at("dim"), 1, kMaxDim)); };
  switch (kind) {
    case ExperimentKind::norm_table: {
      const int dim = dim_of();
      r.integer("degree", d.at("degree"), 0, 1 << 20);
      r.objects("functions", d.at("functions"), [&](Reader& q) { read_function_spec(q, dim); });
      r.objects("spaces", d.at("spaces"), [](Reader& q) { read_space(q); });
      break;
    }
    case ExperimentKind::parseval_suite:
      r.numbers("dims", d.at("dims"), [](double x) { return std::floor(x) == x && x >= 1 && x <= kMaxDim; },
                "1 ≤ dim ≤ " + std::to_string(kMaxDim));
      r.integer("count", d.at("count"), 1, 100000);
      r.integer("degree", d.at("degree"), 0, 4096);
      r.numbers("radii", d.at("radii"), unit_radius, "0 ≤ r < 1");
      r.choice("law", d.at("law"), kLaws);
      r.number("tol", d.at("tol"), finite_positive, "tol > 0");
      break;
    case ExperimentKind::pairing_check: {
      dim_of();
      r.integer("count", d.at("count"), 1, 100000);
      r.integer("degree", d.at("degree"), 0, 4096);
      r.number("radius", d.at("radius"), unit_radius, "0 ≤ radius < 1");
      r.numbers("alphas", d.at("alphas"), finite_positive, "alpha > 0");
      const json* v = r.take("variants");
      const json& src = v ? *v : d.at("variants");
      json out = json::array();
      if (!src.is_array() || src.empty()) r.problem("variants", "must be a non-empty array");
      else
        for (const auto& x : src) {
          if (!x.is_string() || (x != "as-stated" && x != "proof-form"))
            r.problem("variants", "entries must be \"as-stated\" or \"proof-form\"");
          out.push_back(x);
        }
      r.set("variants", out);
      r.integer("k_max", d.at("k_max"), 0, 4096);
      r.number("lhs_tol", d.at("lhs_tol"), finite_positive, "lhs_tol > 0");
      r.number("rhs_tol", d.at("rhs_tol"), finite_positive, "rhs_tol > 0");
      break;
    }
    case ExperimentKind::embedding_sweep: {
      dim_of();
      const std::string src = r.choice("source", d.at("source"), {"triebel-f", "mixed-a"});
      r.objects("cases", d.at("cases"), [&](Reader& q) {
        const double p = q.number("p", json(), positive, "p > 0");
        const double qq = q.number("q", json(), positive, "q > 0");
        const double s = q.number("s", json(), finite_positive, "0 < s < inf");
        q.number("alpha", json(), positive, "alpha > 0");
        if (!(std::max(p, qq) <= s)) q.problem("", "0 < max(p,q) ≤ s required");
        if (src == "triebel-f" && !(p < kInfinity)) q.problem("p", "p < inf required for triebel-f");
      });
      r.objects("mean_growth", d.at("mean_growth"), [](Reader& q) {
        q.number("t", json(), finite_positive, "0 < t < inf");
        q.number("beta", json(), positive, "beta > 0");
      }, 0);
      r.numbers("radii", d.at("radii"), unit_radius, "0 ≤ r < 1");
      r.integer("count", d.at("count"), 1, 100000);
      r.integer("degree", d.at("degree"), 0, 4096);
      r.choice("law", d.at("law"), kLaws);
      r.number("stability", d.at("stability"), finite_positive, "stability > 0");
      break;
    }
    case ExperimentKind::ds_sweep: {
      const int dim = dim_of();
      const auto vs = r.numbers("v", d.at("v"), [](double x) { return x > 0.0 && x <= 1.0; }, "0 < v ≤ 1");
      const auto qs = r.numbers("q", d.at("q"), any_number, "finite q");
      r.numbers("t", d.at("t"), finite_positive, "0 < t < inf");
      for (double v : vs)
        for (double q : qs)
          for (const auto& msg : ds_violations(v, q, 1.0, false, false))
            r.problem("q", "(v=" + std::to_string(v) + ", q=" + std::to_string(q) + ") " + msg);
      r.integer("count", d.at("count"), 0, 100000);
      r.integer("degree", d.at("degree"), 0, 4096);
      r.objects("kernels", d.at("kernels"), [&](Reader& q) {
        const json* w = q.take("w");
        json wout = json::array();
        std::vector<double> ws;
        if (!w) q.problem("w", "required");
        else if (w->is_number()) ws.assign(static_cast<std::size_t>(dim), w->get<double>());
        else if (w->is_array())
          for (const auto& x : *w) ws.push_back(x.is_number() ? x.get<double>() : 2.0);
        if (w && static_cast<int>(ws.size()) != dim) q.problem("w", "needs one entry per dimension");
        for (double x : ws) {
          if (!(std::abs(x) < 1.0)) q.problem("w", "|w_j| < 1 required");
          wout.push_back(x);
        }
        q.number("beta", json(), [](double b) { return b > -1.0; }, "beta > -1");
        q.set("w", wout);
      }, 0);
      r.number("shift", d.at("shift"), [](double x) { return x >= 0.0 && x <= 1.0; }, "0 ≤ shift ≤ 1");
      for (double v : vs)
        if (!(v > 0.5)) r.problem("v", "shifted comparison needs 1/2 < v ≤ 1 (got " + std::to_string(v) + ")");
      r.number("tol", d.at("tol"), finite_positive, "tol > 0");
      break;
    }
    case ExperimentKind::beta_integral_fit:
      r.objects("cases", d.at("cases"), [](Reader& q) {
        const double a = q.number("alpha", json(), [](double x) { return x > -1.0; }, "alpha > -1");
        const double l = q.number("lambda", json(), any_number, "finite lambda");
        if (!(l > a + 1.0)) q.problem("lambda", "lambda > alpha + 1 required for a power-law fit");
      });
      read_window(r, d.at("window"), 0);
      r.integer("per_octave", d.at("per_octave"), 1, 64);
      r.number("tol", d.at("tol"), finite_positive, "tol > 0");
      break;
    case ExperimentKind::lemma3_fit:
      dim_of();
      read_window(r, d.at("window"), 1);
      r.number("lower", d.at("lower"), [](double x) { return x >= 0.0; }, "lower ≥ 0");
      r.number("upper", d.at("upper"), [](double x) { return x >= 0.0; }, "upper ≥ 0");
      r.objects("cases", d.at("cases"), [](Reader& q) {
        const SpaceSpec spec = read_space(q, true);
        const double beta = q.number("beta", json(), [](double b) { return b > -1.0; }, "beta > -1");
        if (!q.out().contains("family")) return;
        if (!kernel_growth_exponent(spec, beta))
          q.problem("beta", "kernel norm does not grow for these parameters (no power law to fit)");
      });
      break;
    case ExperimentKind::theorem_scenario: {
      const int dim = dim_of();
      TheoremHypothesis hyp;
      hyp.dim = dim;
      r.object("hypothesis", d.at("hypothesis"), [&](Reader& q) {
        hyp.p = q.number("p", q.def("p"), nullptr, "");
        hyp.q = q.number("q", q.def("q"), nullptr, "");
        hyp.alpha = q.number("alpha", q.def("alpha"), nullptr, "");
        hyp.t = q.number("t", q.def("t"), nullptr, "");
        hyp.s = q.number("s", q.def("s"), nullptr, "");
        hyp.beta = q.number("beta", q.def("beta"), nullptr, "");
        hyp.m = static_cast<int>(q.integer("m", q.def("m"), -1000, 1000));
        auto family = [&](const char* key) {
          const std::string f = q.choice(key, q.def(key), {"triebel-f", "mixed-a"});
          return f == "mixed-a" ? SpaceSpec::Family::mixed_a : SpaceSpec::Family::triebel_f;
        };
        hyp.source = family("source");
        hyp.target = family("target");
        for (const auto& v : hyp.violations()) q.problem("", v);
      });
      r.object("sweep", d.at("sweep"), [&](Reader& q) {
        q.number("step", q.def("step"), finite_positive, "step > 0");
        const auto lo = q.integer("j_lo", q.def("j_lo"), -1000, 1000);
        const auto hi = q.integer("j_hi", q.def("j_hi"), -1000, 1000);
        if (hi < lo) q.problem("j_hi", "j_hi ≥ j_lo required");
        q.number("w_level", q.def("w_level"), [](double x) { return x >= 1.0 && x <= 40.0; }, "1 ≤ w_level ≤ 40");
      });
      {
        const json* e = r.take("extra");
        const json& src = e ? *e : d.at("extra");
        json out = json::array();
        if (!src.is_array()) r.problem("extra", "must be an array");
        else
          for (const auto& x : src) {
            if (!x.is_string() || (x != "constant" && x != "zero"))
              r.problem("extra", "entries must be \"constant\" or \"zero\"");
            out.push_back(x);
          }
        r.set("extra", out);
      }
      read_window(r, d.at("window"), 1);
      r.object("corpus", d.at("corpus"), [](Reader& q) {
        q.integer("count", q.def("count"), 0, 10000);
        q.integer("degree", q.def("degree"), 0, 4096);
      });
      read_rule(r, d.at("rule"));
      r.number("min_excess_fraction", d.at("min_excess_fraction"), positive, "min_excess_fraction > 0");
      read_refinement(r, d.at("refinement"));
      break;
    }
    case ExperimentKind::proposition_probe: {
      const int dim = dim_of();
      PropositionParams prm;
      prm.dim = dim;
      prm.v = r.number("v", d.at("v"), nullptr, "");
      prm.p = r.number("p", d.at("p"), nullptr, "");
      prm.s = r.number("s", d.at("s"), nullptr, "");
      prm.m = static_cast<int>(r.integer("m", d.at("m"), -1000, 1000));
      for (const auto& v : prm.violations()) r.problem("", v);
      r.objects("multipliers", d.at("multipliers"), [](Reader& q) {
        const std::string type = q.choice("type", json(), {"constant", "kernel", "ones", "zero"});
        if (type == "constant") q.number("value", 1.0, any_number, "finite value");
        if (type == "kernel") q.number("gamma", json(), [](double g) { return g > -1.0; }, "gamma > -1");
      });
      r.number("w_level", d.at("w_level"), [](double x) { return x >= 1.0 && x <= 40.0; }, "1 ≤ w_level ≤ 40");
      read_window(r, d.at("window"), 1);
      r.number("min_excess_fraction", d.at("min_excess_fraction"), positive, "min_excess_fraction > 0");
      read_rule(r, d.at("rule"));
      read_refinement(r, d.at("refinement"));
      break;
    }
  }
}

json grid_echo(const GridOptions& g) {
  json j = json::object();
  j["torus_oversample"] = g.torus_oversample;
  j["torus_min"] = g.torus_min;
  j["radial_points"] = g.radial_points;
  j["radial_panels"] = g.radial_panels;
  j["ladder_per_octave"] = g.ladder_per_octave;
  j["ladder_min_depth"] = g.ladder_min_depth;
  j["ladder_max_depth"] = g.ladder_max_depth;
  j["sup_tol"] = g.sup_tol;
  j["inf_tol"] = g.inf_tol;
  j["torus_tol"] = g.torus_tol;
  j["torus_max_doublings"] = g.torus_max_doublings;
  return j;
}

bool valid_name(const std::string& s) {
  if (s.empty() || s.size() > 64) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) return false;
  return s.front() != '.';
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }
  std::vector<std::string> problems;
  RunConfig cfg;
  Reader top(doc, "", problems);
  if (!doc.is_object()) throw ConfigError(problems);

  cfg.seed = top.unsigned64("seed", 1);
  {
    const json* g = top.take("grid");
    const json empty = json::object();
    Reader gr(g ? *g : empty, "grid", problems);
    if (!g || g->is_object()) {
      cfg.grid = read_grid(gr, GridOptions{});
      gr.finish();
    }
  }
  {
    const json* o = top.take("output");
    const json empty = json::object();
    Reader orr(o ? *o : empty, "output", problems);
    if (!o || o->is_object()) {
      cfg.out_dir = orr.choice("dir", cfg.out_dir, {});
      const std::string f = orr.choice("format", "both", {"csv", "json", "both"});
      if (f == "csv" || f == "json" || f == "both") cfg.format = parse_output_format(f);
      orr.finish();
    }
  }

  json echo_exps = json::array();
  const json* exps = top.take("experiments");
  if (!exps) {
    problems.emplace_back("experiments: required");
  } else if (!exps->is_array() || exps->empty()) {
    problems.emplace_back("experiments: must be a non-empty array");
  } else {
    std::set<std::string> names;
    for (std::size_t i = 0; i < exps->size(); ++i) {
      const json& e = (*exps)[i];
      const std::string path = "experiments[" + std::to_string(i) + "]";
      Reader er(e, path, problems);
      if (!e.is_object()) continue;
      ExperimentConfig ec;
      ec.name = er.choice("name", json(), {});
      if (!ec.name.empty()) {
        if (!valid_name(ec.name)) er.problem("name", "use letters, digits, '-', '_' or '.'");
        if (!names.insert(ec.name).second) er.problem("name", "duplicate experiment name '" + ec.name + "'");
      }
      std::vector<std::string> kinds;
      for (auto k : all_experiment_kinds()) kinds.push_back(to_string(k));
      const std::string kind = er.choice("kind", json(), kinds);
      const bool kind_ok = std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
      {
        const json* g = er.take("grid");
        const json empty = json::object();
        Reader gr(g ? *g : empty, path + ".grid", problems);
        ec.grid = cfg.grid;
        if (!g || g->is_object()) {
          ec.grid = read_grid(gr, cfg.grid);
          gr.finish();
        } else {
          gr.problem("", "must be an object");
        }
      }
      if (kind_ok) {
        ec.kind = parse_experiment_kind(kind);
        read_params(er, ec.kind);
      }
      er.finish();
      json params = er.out();
      params.erase("name");
      params.erase("kind");
      ec.params = params;
      json echo = json::object();
      echo["name"] = ec.name;
      echo["kind"] = kind;
      echo["grid"] = grid_echo(ec.grid);
      for (auto it = params.begin(); it != params.end(); ++it) echo[it.key()] = it.value();
      echo_exps.push_back(echo);
      cfg.experiments.push_back(std::move(ec));
    }
  }
  top.finish();
  if (!problems.empty()) throw ConfigError(problems);

  cfg.echo = json::object();
  cfg.echo["seed"] = cfg.seed;
  cfg.echo["grid"] = grid_echo(cfg.grid);
  cfg.echo["output"] = {{"dir", cfg.out_dir}, {"format", to_string(cfg.format)}};
  cfg.echo["experiments"] = echo_exps;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace polydisc
