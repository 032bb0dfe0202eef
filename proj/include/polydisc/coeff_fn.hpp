#pragma once

// Holomorphic functions on the unit polydisc D^n, stored as a dense tensor of
// Taylor coefficients a_k, k in Z_+^n, truncated at k_j <= N_j.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polydisc/error.hpp"

namespace polydisc {

#ifndef POLYDISC_MAX_DIM
#define POLYDISC_MAX_DIM 3
#endif

inline constexpr int kMaxDim = POLYDISC_MAX_DIM;

using cplx = std::complex<double>;

/// Multi-index k = (k_1, ..., k_n), every entry >= 0.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::size_t> entries);
  MultiIndex(std::initializer_list<std::size_t> entries)
      : MultiIndex(std::vector<std::size_t>(entries)) {}

  int dim() const noexcept { return static_cast<int>(k_.size()); }
  std::size_t operator[](int j) const { return k_[static_cast<std::size_t>(j)]; }
  std::span<const std::size_t> entries() const noexcept { return k_; }
  std::size_t total() const noexcept;
  std::string str() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<std::size_t> k_;
};

/// Per-variable truncation bounds N_j.
using Degree = std::vector<std::size_t>;

void check_dim(int dim);

class CoeffFn {
 public:
  /// Zero function with the given degree bounds.
  explicit CoeffFn(Degree degree);
  CoeffFn(Degree degree, std::vector<cplx> coeffs);

  static CoeffFn from_sparse(std::span<const std::pair<MultiIndex, cplx>> entries,
                             int dim, Degree degree);
  static CoeffFn constant(int dim, cplx value);

  int dim() const noexcept { return static_cast<int>(degree_.size()); }
  const Degree& degree() const noexcept { return degree_; }
  std::size_t max_degree() const noexcept;
  /// Extent of axis j, N_j + 1.
  std::size_t extent(int j) const { return degree_[static_cast<std::size_t>(j)] + 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  cplx operator[](const MultiIndex& k) const;
  cplx at_linear(std::size_t i) const { return coeffs_[i]; }
  MultiIndex index_of(std::size_t linear) const;
  std::size_t linear_of(const MultiIndex& k) const;

  /// f(z) for |z_j| < 1, per-variable Horner with the last variable innermost.
  cplx evaluate(std::span<const cplx> z) const;

  /// Sum of |a_k|, an upper bound for |f| on the closed polydisc.
  double abs_sum() const noexcept;
  /// Sum of |a_k|^2 r^{2k}.
  double weighted_energy(std::span<const double> r) const;
  bool is_zero() const noexcept;

  CoeffFn scaled(cplx lambda) const;

 private:
  Degree degree_;
  std::vector<cplx> coeffs_;
};

/// Gamma(k+beta+1) / (Gamma(beta+1) Gamma(k+1)), via log-gamma differences.
double frac_factor(std::size_t k, double beta);
double log_frac_factor(std::size_t k, double beta);

/// Fractional derivative D^beta, beta > -1, as a diagonal coefficient operator.
CoeffFn frac_derivative(const CoeffFn& f, double beta);

/// Relative tail of sum_k frac_factor(k,beta) x^k dropped beyond degree N.
double kernel_tail_bound(double x, double beta, std::size_t degree);
/// Smallest degree whose relative tail at |w| * r_max is below tol.
std::size_t kernel_degree(double w_abs, double beta, double r_max = 1.0,
                          double tol = 1e-10, std::size_t max_degree = 1u << 22);

/// Truncated expansion of prod_j (1 - w_j z_j)^{-(beta+1)}. Degree is chosen
/// from the tail bound at radius r_max.
CoeffFn bergman_kernel(std::span<const cplx> w, double beta, double r_max = 1.0,
                       double tol = 1e-10);
/// Same with a caller-fixed degree; rejects if the tail bound exceeds tol.
CoeffFn bergman_kernel(std::span<const cplx> w, double beta, const Degree& degree,
                       double r_max = 1.0, double tol = 1e-10);

enum class CoeffLaw { unit_disk, gaussian, decaying };
CoeffLaw parse_coeff_law(const std::string& name);
std::string to_string(CoeffLaw law);

/// Coefficients come from a counter-based generator keyed on (seed, k), so a
/// higher-degree draw extends a lower-degree one with the same seed.
CoeffFn random_poly(std::uint64_t seed, int dim, const Degree& degree,
                    CoeffLaw law = CoeffLaw::unit_disk);

/// Mass only at multi-indices whose entries are powers of two 2^j, j < levels.
CoeffFn lacunary_series(std::uint64_t seed, int dim, int levels);
CoeffFn lacunary_series(std::uint64_t seed, int dim, int levels, const Degree& degree);

/// Deterministic uniform in [0,1) for (seed, stream, index).
double hashed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Coefficient text format: header "dim n degree N_1 ... N_n", then lines
// "k_1 ... k_n re im"; '#' starts a comment.
CoeffFn parse_coeff_text(const std::string& text);
std::string format_coeff_text(const CoeffFn& f);
CoeffFn read_coeff_file(const std::string& path);
void write_coeff_file(const CoeffFn& f, const std::string& path);

}  // namespace polydisc
