#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "polydisc/coeff_fn.hpp"
#include "polydisc/quadrature.hpp"

namespace polydisc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// One of the six (quasi) norm families on D^n with its real parameters.
struct SpaceSpec {
  enum class Family { hardy, mixed_a, triebel_f, sup_d, limit_f, limit_a };

  Family family = Family::hardy;
  double p = 2.0;
  double q = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double s = 0.0;

  static SpaceSpec hardy(double p);
  static SpaceSpec mixed_a(double p, double q, double alpha);
  static SpaceSpec triebel_f(double p, double q, double alpha);
  static SpaceSpec sup_d(double alpha, double beta);
  static SpaceSpec limit_f(double p, double s);
  static SpaceSpec limit_a(double p, double s);

  /// Human-readable list of violated parameter constraints (empty if valid).
  std::vector<std::string> violations() const;
  void validate() const;
  std::string str() const;
};

std::string to_string(SpaceSpec::Family f);
SpaceSpec::Family parse_family(const std::string& name);

struct NormResult {
  double value = 0.0;
  bool converged = true;
  int ladder_depth = 0;  // octaves used by sup-type families
};

/// |v|^p with the p = 1, 2 fast paths.
double abs_pow(cplx v, double p);

/// Normalized L^p mean of grid values; p = infinity gives the grid maximum.
double grid_mean(std::span<const cplx> values, double p);

/// Integral mean M_p(f, r) over the distinguished boundary, p in (0, inf].
double m_p_norm(const CoeffFn& f, std::span<const double> r, double p,
                const GridOptions& opts = {});

NormResult space_norm(const CoeffFn& f, const SpaceSpec& spec, const GridOptions& opts = {});

struct ProfilePoint {
  std::vector<double> r;
  double level = 0.0;  // ladder level of the largest coordinate
  bool diagonal = true;
  double value = 0.0;
};

struct SupProfile {
  std::vector<ProfilePoint> points;
  double sup = 0.0;
  std::vector<double> sup_at;
};

/// r -> M_t(D^m f, r) (1-r)^tau on the ladder up to `depth` octaves. For n >= 2
/// the diagonal is augmented by `off_diagonal` seeded tensor-ladder points per
/// octave.
SupProfile weighted_sup_profile(const CoeffFn& f, int m, double t, double tau, int depth,
                                const GridOptions& opts = {}, std::uint64_t seed = 0,
                                int off_diagonal = 4);

/// Refines the grid maximum of |f(r xi)| by coordinate-wise golden-section search.
double refine_max(const CoeffFn& f, std::span<const double> r, const TorusSize& grid,
                  std::span<const cplx> values, double tol);

}  // namespace polydisc
