#include "polydisc/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace polydisc {

MultiplierSeq::MultiplierSeq(int dim, Rule rule) : dim_(dim), rule_(std::move(rule)) {
  check_dim(dim);
}

MultiplierSeq MultiplierSeq::explicit_table(CoeffFn table) {
  const int n = table.dim();
  return MultiplierSeq(n, Explicit{std::move(table)});
}

MultiplierSeq MultiplierSeq::kernel(std::vector<cplx> w, double beta) {
  const int n = static_cast<int>(w.size());
  for (const auto& wj : w)
    if (!(std::abs(wj) < 1.0)) fail(ErrorCode::domain, "kernel multiplier requires |w_j| < 1");
  if (!(beta > -1.0)) fail(ErrorCode::domain, "kernel multiplier exponent must satisfy beta > -1");
  return MultiplierSeq(n, Kernel{std::move(w), beta});
}

MultiplierSeq MultiplierSeq::lacunary(int dim, std::uint64_t seed, int levels) {
  if (levels < 1 || levels > 24) fail(ErrorCode::invalid_argument, "lacunary level count must be in 1..24");
  return MultiplierSeq(dim, Lacunary{seed, levels});
}

MultiplierSeq MultiplierSeq::ones(int dim) { return MultiplierSeq(dim, Ones{}); }
MultiplierSeq MultiplierSeq::zero(int dim) { return MultiplierSeq(dim, Zero{}); }

MultiplierSeq MultiplierSeq::scaled(cplx lambda) const {
  MultiplierSeq c(*this);
  c.scale_ *= lambda;
  return c;
}

std::string MultiplierSeq::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Explicit>)
          os << "explicit(" << r.table.size() << " entries)";
        else if constexpr (std::is_same_v<T, Kernel>) {
          os << "kernel(beta=" << r.beta << ",w=";
          for (std::size_t j = 0; j < r.w.size(); ++j) os << (j ? ";" : "") << r.w[j].real();
          os << ")";
        } else if constexpr (std::is_same_v<T, Lacunary>)
          os << "lacunary(seed=" << r.seed << ",levels=" << r.levels << ")";
        else if constexpr (std::is_same_v<T, Ones>)
          os << "ones";
        else
          os << "zero";
      },
      rule_);
  if (scale_ != cplx{1.0, 0.0}) os << "*" << scale_.real();
  return os.str();
}

cplx MultiplierSeq::coefficient(const MultiIndex& k) const {
  if (k.dim() != dim_) fail(ErrorCode::invalid_argument, "multiplier index dimension mismatch");
  const cplx base = std::visit(
      [&](const auto& r) -> cplx {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Explicit>) {
          return r.table[k];
        } else if constexpr (std::is_same_v<T, Kernel>) {
          cplx v = 1.0;
          for (int j = 0; j < dim_; ++j) {
            const auto kj = k[j];
            if (kj == 0) continue;
            const cplx wj = r.w[static_cast<std::size_t>(j)];
            if (wj == cplx{0.0, 0.0}) return 0.0;
            const double kk = static_cast<double>(kj);
            v *= std::polar(std::exp(log_frac_factor(kj, r.beta) + kk * std::log(std::abs(wj))),
                            kk * std::arg(wj));
          }
          return v;
        } else if constexpr (std::is_same_v<T, Lacunary>) {
          const std::size_t top = std::size_t{1} << (r.levels - 1);
          for (auto e : k.entries())
            if (e == 0 || e > top || (e & (e - 1)) != 0) return 0.0;
          std::uint64_t key = 0x13198A2E03707344ULL;
          for (auto e : k.entries()) key = key * 1000003ULL + e;
          return std::polar(1.0, 2.0 * std::numbers::pi * hashed_uniform(r.seed, 5, key));
        } else if constexpr (std::is_same_v<T, Ones>) {
          return 1.0;
        } else {
          return 0.0;
        }
      },
      rule_);
  return scale_ * base;
}

CoeffFn MultiplierSeq::materialize(const Degree& degree) const {
  if (static_cast<int>(degree.size()) != dim_)
    fail(ErrorCode::invalid_argument, "multiplier dimension does not match degree bounds");
  CoeffFn shape(degree);
  std::vector<cplx> out(shape.size());
  if (const auto* kr = std::get_if<Kernel>(&rule_)) {
    // per-axis tables, then tensor product
    std::vector<std::vector<cplx>> axis(static_cast<std::size_t>(dim_));
    for (int j = 0; j < dim_; ++j) {
      auto& a = axis[static_cast<std::size_t>(j)];
      a.resize(degree[static_cast<std::size_t>(j)] + 1);
      const cplx wj = kr->w[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double kk = static_cast<double>(k);
        a[k] = k == 0 ? cplx{1.0, 0.0}
               : wj == cplx{0.0, 0.0}
                   ? cplx{0.0, 0.0}
                   : std::polar(std::exp(log_frac_factor(k, kr->beta) + kk * std::log(std::abs(wj))),
                                kk * std::arg(wj));
      }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto k = shape.index_of(i);
      cplx v = scale_;
      for (int j = 0; j < dim_; ++j) v *= axis[static_cast<std::size_t>(j)][k[j]];
      out[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = coefficient(shape.index_of(i));
  }
  return CoeffFn(degree, std::move(out));
}

CoeffFn MultiplierSeq::generating_function(double r_max, double tol) const {
  if (!(r_max >= 0.0 && r_max <= 1.0)) fail(ErrorCode::domain, "r_max must lie in [0,1]");
  const double per_axis = tol / static_cast<double>(dim_);
  Degree degree(static_cast<std::size_t>(dim_), 0);
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Explicit>) {
          degree = r.table.degree();
        } else if constexpr (std::is_same_v<T, Kernel>) {
          for (int j = 0; j < dim_; ++j)
            degree[static_cast<std::size_t>(j)] =
                kernel_degree(std::abs(r.w[static_cast<std::size_t>(j)]), r.beta, r_max, per_axis);
        } else if constexpr (std::is_same_v<T, Lacunary>) {
          std::fill(degree.begin(), degree.end(), std::size_t{1} << (r.levels - 1));
        } else if constexpr (std::is_same_v<T, Ones>) {
          if (r_max >= 1.0)
            fail(ErrorCode::domain, "the generating function of the unit sequence needs r_max < 1");
          std::fill(degree.begin(), degree.end(), kernel_degree(r_max, 0.0, 1.0, per_axis));
        }
      },
      rule_);
  return materialize(degree);
}

CoeffFn hadamard(const MultiplierSeq& c, const CoeffFn& f) {
  if (c.dim() != f.dim()) fail(ErrorCode::invalid_argument, "multiplier and function dimensions differ");
  const CoeffFn table = c.materialize(f.degree());
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = table.at_linear(i) * f.at_linear(i);
  return CoeffFn(f.degree(), std::move(out));
}

}  // namespace polydisc
