#include <cstdio>
#include <fstream>
#include <sstream>

#include "polydisc/coeff_fn.hpp"

namespace polydisc {

namespace {

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

CoeffFn parse_coeff_text(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  int dim = 0;
  Degree degree;
  std::vector<std::pair<MultiIndex, cplx>> entries;
  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream ls(strip_comment(raw));
    std::string first;
    if (!(ls >> first)) continue;
    if (dim == 0) {
      if (first != "dim") parse_error(line_no, "expected header 'dim n degree N_1 ... N_n'");
      std::string kw;
      if (!(ls >> dim) || dim < 1 || dim > kMaxDim)
        parse_error(line_no, "dimension must be in 1.." + std::to_string(kMaxDim));
      if (!(ls >> kw) || kw != "degree") parse_error(line_no, "expected 'degree' after dimension");
      for (int j = 0; j < dim; ++j) {
        long long n = -1;
        if (!(ls >> n) || n < 0) parse_error(line_no, "missing or negative degree bound");
        degree.push_back(static_cast<std::size_t>(n));
      }
      std::string extra;
      if (ls >> extra) parse_error(line_no, "trailing tokens in header");
      continue;
    }
    std::istringstream es(strip_comment(raw));
    std::vector<std::size_t> k;
    for (int j = 0; j < dim; ++j) {
      long long v = -1;
      if (!(es >> v) || v < 0) parse_error(line_no, "expected " + std::to_string(dim) + " nonnegative indices");
      k.push_back(static_cast<std::size_t>(v));
    }
    double re = 0.0, im = 0.0;
    if (!(es >> re >> im)) parse_error(line_no, "expected real and imaginary parts");
    std::string extra;
    if (es >> extra) parse_error(line_no, "trailing tokens");
    entries.emplace_back(MultiIndex(std::move(k)), cplx{re, im});
  }
  if (dim == 0) fail(ErrorCode::parse, "missing header line");
  return CoeffFn::from_sparse(entries, dim, degree);
}

std::string format_coeff_text(const CoeffFn& f) {
  std::ostringstream os;
  os << "dim " << f.dim() << " degree";
  for (auto n : f.degree()) os << ' ' << n;
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < f.size(); ++i) {
    const cplx c = f.at_linear(i);
    if (c == cplx{0.0, 0.0}) continue;
    const MultiIndex k = f.index_of(i);
    for (auto e : k.entries()) os << e << ' ';
    std::snprintf(buf, sizeof buf, "%.17g %.17g", c.real(), c.imag());
    os << buf << '\n';
  }
  return os.str();
}

CoeffFn read_coeff_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open coefficient file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_coeff_text(ss.str());
}

void write_coeff_file(const CoeffFn& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write coefficient file " + path);
  out << format_coeff_text(f);
}

}  // namespace polydisc
