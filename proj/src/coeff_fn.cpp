#include "polydisc/coeff_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "math_util.hpp"

namespace polydisc {

MultiIndex::MultiIndex(std::vector<std::size_t> entries) : k_(std::move(entries)) {}

std::size_t MultiIndex::total() const noexcept {
  std::size_t s = 0;
  for (auto k : k_) s += k;
  return s;
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < k_.size(); ++j) os << (j ? "," : "") << k_[j];
  os << ')';
  return os.str();
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    fail(ErrorCode::invalid_argument, "dimension " + std::to_string(dim) +
                                          " outside 1.." + std::to_string(kMaxDim));
}

namespace {

std::size_t tensor_size(const Degree& degree) {
  std::size_t s = 1;
  for (auto n : degree) s *= n + 1;
  return s;
}

}  // namespace

CoeffFn::CoeffFn(Degree degree) : degree_(std::move(degree)) {
  check_dim(dim());
  coeffs_.assign(tensor_size(degree_), cplx{0.0, 0.0});
}

CoeffFn::CoeffFn(Degree degree, std::vector<cplx> coeffs)
    : degree_(std::move(degree)), coeffs_(std::move(coeffs)) {
  check_dim(dim());
  if (coeffs_.size() != tensor_size(degree_))
    fail(ErrorCode::invalid_argument, "coefficient table size does not match degree bounds");
  for (const auto& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      fail(ErrorCode::invalid_argument, "non-finite coefficient");
}

CoeffFn CoeffFn::from_sparse(std::span<const std::pair<MultiIndex, cplx>> entries,
                             int dim, Degree degree) {
  check_dim(dim);
  if (static_cast<int>(degree.size()) != dim)
    fail(ErrorCode::invalid_argument, "degree has " + std::to_string(degree.size()) +
                                          " bounds for dimension " + std::to_string(dim));
  CoeffFn f(std::move(degree));
  for (const auto& [k, v] : entries) {
    if (k.dim() != dim)
      fail(ErrorCode::invalid_argument,
           "index " + k.str() + " has dimension " + std::to_string(k.dim()) +
               ", expected " + std::to_string(dim));
    for (int j = 0; j < dim; ++j)
      if (k[j] > f.degree_[static_cast<std::size_t>(j)])
        fail(ErrorCode::invalid_argument, "index " + k.str() + " exceeds degree bounds");
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(ErrorCode::invalid_argument, "non-finite coefficient at " + k.str());
    f.coeffs_[f.linear_of(k)] = v;
  }
  return f;
}

CoeffFn CoeffFn::constant(int dim, cplx value) {
  CoeffFn f(Degree(static_cast<std::size_t>(dim), 0));
  f.coeffs_[0] = value;
  return f;
}

std::size_t CoeffFn::max_degree() const noexcept {
  return *std::max_element(degree_.begin(), degree_.end());
}

std::size_t CoeffFn::linear_of(const MultiIndex& k) const {
  std::size_t idx = 0;
  for (int j = 0; j < dim(); ++j) idx = idx * extent(j) + k[j];
  return idx;
}

MultiIndex CoeffFn::index_of(std::size_t linear) const {
  std::vector<std::size_t> k(degree_.size());
  for (int j = dim() - 1; j >= 0; --j) {
    k[static_cast<std::size_t>(j)] = linear % extent(j);
    linear /= extent(j);
  }
  return MultiIndex(std::move(k));
}

cplx CoeffFn::operator[](const MultiIndex& k) const {
  if (k.dim() != dim()) fail(ErrorCode::invalid_argument, "index dimension mismatch");
  for (int j = 0; j < dim(); ++j)
    if (k[j] > degree_[static_cast<std::size_t>(j)]) return {0.0, 0.0};
  return coeffs_[linear_of(k)];
}

cplx CoeffFn::evaluate(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != dim())
    fail(ErrorCode::invalid_argument, "point dimension mismatch");
  for (std::size_t j = 0; j < z.size(); ++j)
    if (!(std::abs(z[j]) < 1.0))
      fail(ErrorCode::domain, "coordinate " + std::to_string(j + 1) +
                                  " of the evaluation point is not inside the unit disc");
  std::vector<cplx> work(coeffs_);
  std::size_t outer = work.size();
  for (int j = dim() - 1; j >= 0; --j) {
    const std::size_t ext = extent(j);
    outer /= ext;
    const cplx zj = z[static_cast<std::size_t>(j)];
    for (std::size_t p = 0; p < outer; ++p) {
      const cplx* row = work.data() + p * ext;
      cplx acc = row[ext - 1];
      for (std::size_t k = ext - 1; k-- > 0;) acc = acc * zj + row[k];
      work[p] = acc;
    }
  }
  return work[0];
}

double CoeffFn::abs_sum() const noexcept {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::abs(c);
  return s;
}

double CoeffFn::weighted_energy(std::span<const double> r) const {
  if (static_cast<int>(r.size()) != dim())
    fail(ErrorCode::invalid_argument, "radius dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto k = index_of(i);
    double w = std::norm(coeffs_[i]);
    for (int j = 0; j < dim(); ++j) w *= std::pow(r[static_cast<std::size_t>(j)], 2.0 * double(k[j]));
    s += w;
  }
  return s;
}

bool CoeffFn::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const cplx& c) { return c == cplx{0.0, 0.0}; });
}

CoeffFn CoeffFn::scaled(cplx lambda) const {
  CoeffFn g(*this);
  for (auto& c : g.coeffs_) c *= lambda;
  return g;
}

double log_frac_factor(std::size_t k, double beta) {
  const double kk = static_cast<double>(k);
  return detail::log_gamma(kk + beta + 1.0) - detail::log_gamma(beta + 1.0) -
         detail::log_gamma(kk + 1.0);
}

double frac_factor(std::size_t k, double beta) {
  if (k == 0) return 1.0;
  return std::exp(log_frac_factor(k, beta));
}

CoeffFn frac_derivative(const CoeffFn& f, double beta) {
  if (!(beta > -1.0))
    fail(ErrorCode::domain, "fractional derivative order must satisfy beta > -1");
  if (beta == 0.0) return f;
  std::vector<std::vector<double>> factors(static_cast<std::size_t>(f.dim()));
  for (int j = 0; j < f.dim(); ++j) {
    auto& fj = factors[static_cast<std::size_t>(j)];
    fj.resize(f.extent(j));
    for (std::size_t k = 0; k < fj.size(); ++k) fj[k] = frac_factor(k, beta);
  }
  std::vector<cplx> out(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto k = f.index_of(i);
    double s = 1.0;
    for (int j = 0; j < f.dim(); ++j) s *= factors[static_cast<std::size_t>(j)][k[j]];
    out[i] *= s;
  }
  return CoeffFn(f.degree(), std::move(out));
}

double kernel_tail_bound(double x, double beta, std::size_t degree) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(degree);
  // ratio t_{k+1}/t_k = x (k+beta+1)/(k+1) is bounded by rho for all k > degree
  const double rho = std::max(x, x * (n + beta + 2.0) / (n + 2.0));
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  const double log_t = log_frac_factor(degree + 1, beta) + (n + 1.0) * std::log(x);
  return std::exp(log_t - std::log1p(-rho) + (beta + 1.0) * std::log1p(-x));
}

std::size_t kernel_degree(double w_abs, double beta, double r_max, double tol,
                          std::size_t max_degree) {
  if (!(w_abs >= 0.0 && w_abs < 1.0))
    fail(ErrorCode::domain, "kernel point must satisfy |w_j| < 1");
  const double x = w_abs * r_max;
  if (x == 0.0) return 0;
  std::size_t hi = 1;
  while (kernel_tail_bound(x, beta, hi) > tol) {
    if (hi >= max_degree)
      fail(ErrorCode::invalid_argument,
           "kernel truncation exceeds the degree cap " + std::to_string(max_degree));
    hi = std::min(max_degree, hi * 2);
  }
  std::size_t lo = hi / 2;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (kernel_tail_bound(x, beta, mid) > tol)
      lo = mid;
    else
      hi = mid;
  }
  return kernel_tail_bound(x, beta, lo) <= tol ? lo : hi;
}

namespace {

CoeffFn kernel_with_degree(std::span<const cplx> w, double beta, const Degree& degree) {
  const int n = static_cast<int>(w.size());
  std::vector<std::vector<cplx>> axis(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const cplx wj = w[static_cast<std::size_t>(j)];
    auto& a = axis[static_cast<std::size_t>(j)];
    a.resize(degree[static_cast<std::size_t>(j)] + 1);
    const double lw = std::log(std::abs(wj));
    const double arg = std::arg(wj);
    a[0] = 1.0;
    for (std::size_t k = 1; k < a.size(); ++k) {
      const double kk = static_cast<double>(k);
      a[k] = wj == cplx{0.0, 0.0} ? cplx{0.0, 0.0}
                                  : std::polar(std::exp(log_frac_factor(k, beta) + kk * lw), kk * arg);
    }
  }
  CoeffFn shape(degree);
  std::vector<cplx> out(shape.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto k = shape.index_of(i);
    cplx v = 1.0;
    for (int j = 0; j < n; ++j) v *= axis[static_cast<std::size_t>(j)][k[j]];
    out[i] = v;
  }
  return CoeffFn(degree, std::move(out));
}

void check_kernel_args(std::span<const cplx> w, double beta) {
  check_dim(static_cast<int>(w.size()));
  if (!(beta > -1.0)) fail(ErrorCode::domain, "kernel exponent must satisfy beta > -1");
  for (const auto& wj : w)
    if (!(std::abs(wj) < 1.0)) fail(ErrorCode::domain, "kernel point must satisfy |w_j| < 1");
}

}  // namespace

CoeffFn bergman_kernel(std::span<const cplx> w, double beta, double r_max, double tol) {
  check_kernel_args(w, beta);
  const double per_axis = tol / static_cast<double>(w.size());
  Degree degree;
  for (const auto& wj : w) degree.push_back(kernel_degree(std::abs(wj), beta, r_max, per_axis));
  return kernel_with_degree(w, beta, degree);
}

CoeffFn bergman_kernel(std::span<const cplx> w, double beta, const Degree& degree,
                       double r_max, double tol) {
  check_kernel_args(w, beta);
  if (degree.size() != w.size())
    fail(ErrorCode::invalid_argument, "degree bounds do not match kernel dimension");
  const double per_axis = tol / static_cast<double>(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double x = std::abs(w[j]) * r_max;
    if (kernel_tail_bound(x, beta, degree[j]) > per_axis) {
      const auto need = kernel_degree(std::abs(w[j]), beta, r_max, per_axis);
      fail(ErrorCode::invalid_argument,
           "kernel tail tolerance unreachable at degree " + std::to_string(degree[j]) +
               " in variable " + std::to_string(j + 1) + "; required degree is about " +
               std::to_string(need));
    }
  }
  return kernel_with_degree(w, beta, degree);
}

CoeffLaw parse_coeff_law(const std::string& name) {
  if (name == "unit-disk") return CoeffLaw::unit_disk;
  if (name == "gaussian") return CoeffLaw::gaussian;
  if (name == "decaying") return CoeffLaw::decaying;
  fail(ErrorCode::invalid_argument, "unknown coefficient law '" + name + "'");
}

std::string to_string(CoeffLaw law) {
  switch (law) {
    case CoeffLaw::unit_disk: return "unit-disk";
    case CoeffLaw::gaussian: return "gaussian";
    case CoeffLaw::decaying: return "decaying";
  }
  return "?";
}

double hashed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = detail::splitmix64(seed);
  h = detail::splitmix64(h ^ (stream * 0x9E3779B97F4A7C15ULL));
  h = detail::splitmix64(h ^ index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

namespace {

std::uint64_t index_key(const MultiIndex& k) {
  std::uint64_t key = 0x243F6A8885A308D3ULL;
  for (auto e : k.entries()) key = detail::splitmix64(key ^ (e + 1));
  return key;
}

cplx draw(std::uint64_t seed, const MultiIndex& k, CoeffLaw law) {
  const auto key = index_key(k);
  const double u1 = hashed_uniform(seed, 1, key);
  const double u2 = hashed_uniform(seed, 2, key);
  const double phase = 2.0 * std::numbers::pi * u2;
  switch (law) {
    case CoeffLaw::unit_disk: return std::polar(std::sqrt(u1), phase);
    case CoeffLaw::gaussian: return std::polar(std::sqrt(-std::log1p(-u1)), phase);
    case CoeffLaw::decaying: {
      const double damp = std::pow(1.0 + static_cast<double>(k.total()), -2.0);
      return std::polar(std::sqrt(u1) * damp, phase);
    }
  }
  return {};
}

}  // namespace

CoeffFn random_poly(std::uint64_t seed, int dim, const Degree& degree, CoeffLaw law) {
  check_dim(dim);
  if (static_cast<int>(degree.size()) != dim)
    fail(ErrorCode::invalid_argument, "degree bounds do not match dimension");
  CoeffFn shape(degree);
  std::vector<cplx> out(shape.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = draw(seed, shape.index_of(i), law);
  return CoeffFn(degree, std::move(out));
}

CoeffFn lacunary_series(std::uint64_t seed, int dim, int levels) {
  if (levels < 1 || levels > 24) fail(ErrorCode::invalid_argument, "lacunary level count must be in 1..24");
  return lacunary_series(seed, dim, levels,
                         Degree(static_cast<std::size_t>(dim), std::size_t{1} << (levels - 1)));
}

CoeffFn lacunary_series(std::uint64_t seed, int dim, int levels, const Degree& degree) {
  check_dim(dim);
  if (levels < 1 || levels > 24) fail(ErrorCode::invalid_argument, "lacunary level count must be in 1..24");
  if (static_cast<int>(degree.size()) != dim)
    fail(ErrorCode::invalid_argument, "degree bounds do not match dimension");
  const std::size_t top = std::size_t{1} << (levels - 1);
  for (auto n : degree)
    if (n < top)
      fail(ErrorCode::invalid_argument,
           "degree bound too small for " + std::to_string(levels) + " lacunary levels");
  CoeffFn shape(degree);
  std::vector<cplx> out(shape.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto k = shape.index_of(i);
    if (!std::all_of(k.entries().begin(), k.entries().end(),
                     [top](std::size_t e) { return e != 0 && e <= top && (e & (e - 1)) == 0; }))
      continue;
    const auto key = index_key(k);
    out[i] = std::polar(0.5 + 0.5 * hashed_uniform(seed, 3, key),
                        2.0 * std::numbers::pi * hashed_uniform(seed, 4, key));
  }
  return CoeffFn(degree, std::move(out));
}

}  // namespace polydisc
