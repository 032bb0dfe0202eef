#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace polydisc {

using json = nlohmann::ordered_json;

#ifndef POLYDISC_VERSION_STRING
#define POLYDISC_VERSION_STRING "0.0.0"
#endif

std::string version_string() { return POLYDISC_VERSION_STRING; }

bool ExperimentReport::passed() const {
  for (const auto& g : gates)
    if (!g.passed) return false;
  return true;
}

bool Report::passed() const { return failed_gates() == 0; }

std::size_t Report::failed_gates() const {
  std::size_t n = 0;
  for (const auto& e : experiments)
    for (const auto& g : e.gates) n += g.passed ? 0 : 1;
  return n;
}

const std::vector<std::string>& columns_of(ExperimentKind kind) {
  static const std::vector<std::string> norm = {"function", "space", "value", "converged", "ladder-depth"};
  static const std::vector<std::string> parseval = {"dim", "function", "r", "m2-squared",
                                                    "coefficient-sum", "deviation", "scaled-deviation"};
  static const std::vector<std::string> pairing = {"section", "case", "variant", "alpha", "k",
                                                   "value-re", "value-im", "reference-re",
                                                   "reference-im", "deviation", "r-power", "unit"};
  static const std::vector<std::string> embedding = {"check", "case", "degree", "max-ratio", "arg-max",
                                                     "degenerate", "finite"};
  static const std::vector<std::string> ds = {"v", "q", "t", "function", "ratio", "tag", "shifted-ratio",
                                              "shift-deviation"};
  static const std::vector<std::string> beta = {"alpha", "lambda", "predicted", "slope", "residual",
                                                "deviation", "at-zero", "passed"};
  static const std::vector<std::string> lemma3 = {"case", "space", "beta", "predicted", "slope",
                                                  "residual", "converged", "passed"};
  static const std::vector<std::string> theorem = {"g-id", "gamma", "K", "K-slope", "max-ratio",
                                                   "necessity-slope", "verdict", "excess",
                                                   "growth-factor", "flags", "refined-verdict",
                                                   "refined-deviation"};
  static const std::vector<std::string> prop = {"multiplier", "gamma", "excess", "K", "K-slope",
                                                "ratio-slope", "growth-factor", "bounded",
                                                "refined-deviation"};
  switch (kind) {
    case ExperimentKind::norm_table: return norm;
    case ExperimentKind::parseval_suite: return parseval;
    case ExperimentKind::pairing_check: return pairing;
    case ExperimentKind::embedding_sweep: return embedding;
    case ExperimentKind::ds_sweep: return ds;
    case ExperimentKind::beta_integral_fit: return beta;
    case ExperimentKind::lemma3_fit: return lemma3;
    case ExperimentKind::theorem_scenario: return theorem;
    case ExperimentKind::proposition_probe: return prop;
  }
  return norm;
}

namespace {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return csv_escape(v);
      },
      c);
}

// Non-finite doubles become strings so the JSON never carries NaN.
json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, double>) {
          if (std::isfinite(v)) return v;
          return format_double(v);
        } else return v;
      },
      c);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write '" + p.string() + "'");
  out << text;
  if (!out) fail(ErrorCode::io, "write failed for '" + p.string() + "'");
}

}  // namespace

std::string to_csv(const ExperimentReport& e) {
  std::string out;
  for (std::size_t i = 0; i < e.columns.size(); ++i) out += (i ? "," : "") + e.columns[i];
  out += '\n';
  for (const auto& row : e.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += '\n';
  }
  return out;
}

std::string summary_csv(const Report& r) {
  std::string out = "experiment,gate,passed,detail\n";
  for (const auto& e : r.experiments)
    for (const auto& g : e.gates)
      out += csv_escape(e.name) + "," + csv_escape(g.name) + "," + (g.passed ? "true" : "false") + "," +
             csv_escape(g.detail) + "\n";
  return out;
}

json to_json(const Report& r, bool include_timing) {
  json j = json::object();
  j["version"] = version_string();
  j["config"] = r.config;
  json exps = json::array();
  for (const auto& e : r.experiments) {
    json ej = json::object();
    ej["name"] = e.name;
    ej["kind"] = to_string(e.kind);
    ej["columns"] = e.columns;
    json rows = json::array();
    for (const auto& row : e.rows) {
      json rj = json::object();
      for (std::size_t i = 0; i < row.size() && i < e.columns.size(); ++i) rj[e.columns[i]] = cell_json(row[i]);
      rows.push_back(rj);
    }
    ej["rows"] = rows;
    json gates = json::array();
    for (const auto& g : e.gates) gates.push_back({{"gate", g.name}, {"passed", g.passed}, {"detail", g.detail}});
    ej["gates"] = gates;
    if (!e.extra.empty()) ej["extra"] = e.extra;
    exps.push_back(ej);
  }
  j["experiments"] = exps;
  json summary = json::array();
  for (const auto& e : r.experiments)
    for (const auto& g : e.gates) summary.push_back({{"experiment", e.name}, {"gate", g.name}, {"passed", g.passed}});
  j["summary"] = {{"passed", r.passed()}, {"failed_gates", r.failed_gates()}, {"gates", summary}};
  if (include_timing) {
    json t = json::object();
    t["total_seconds"] = r.seconds;
    for (const auto& e : r.experiments) t[e.name] = e.seconds;
    j["timing"] = t;
  }
  return j;
}

std::vector<std::string> emit(const Report& r, const std::string& dir, OutputFormat format) {
  std::filesystem::path base(dir);
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  if (ec) fail(ErrorCode::io, "cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> written;
  if (format == OutputFormat::csv || format == OutputFormat::both) {
    for (const auto& e : r.experiments) {
      const auto p = base / (e.name + ".csv");
      write_file(p, to_csv(e));
      written.push_back(p.string());
    }
    const auto p = base / "summary.csv";
    write_file(p, summary_csv(r));
    written.push_back(p.string());
  }
  if (format == OutputFormat::json || format == OutputFormat::both) {
    const auto p = base / "report.json";
    write_file(p, to_json(r).dump(2) + "\n");
    written.push_back(p.string());
  }
  return written;
}

}  // namespace polydisc
