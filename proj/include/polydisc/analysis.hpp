#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "polydisc/coeff_fn.hpp"
#include "polydisc/fit.hpp"
#include "polydisc/norms.hpp"

namespace polydisc {

/// numerator / denominator; 0/0 is tagged instead of producing NaN.
struct Ratio {
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  bool degenerate_zero = false;

  static Ratio of(double numerator, double denominator);
  bool finite() const { return degenerate_zero || std::isfinite(value); }
  std::string tag() const;
};

struct RatioCase {
  std::string id;
  Ratio ratio;
};

struct RatioReport {
  std::vector<RatioCase> cases;
  double max_ratio = 0.0;
  std::string arg_max;

  void add(std::string id, Ratio r);
};

// Littlewood-Paley pairing ------------------------------------------------

/// Torus mean of f(r conj(t)) g(r t).
cplx lp_pairing_lhs(const CoeffFn& f, const CoeffFn& g, std::span<const double> r,
                    const GridOptions& opts = {});

enum class PairingVariant { as_stated, proof_form };
std::string to_string(PairingVariant v);
PairingVariant parse_pairing_variant(const std::string& name);

/// Kernel exponent e in (r^2 - R^2)^e and derivative order of g.
struct PairingShape {
  double kernel_exponent;
  double derivative_order;
};
PairingShape pairing_shape(double alpha, PairingVariant v);

/// Solid-integral side evaluated by nested radial x torus quadrature.
cplx lp_pairing_rhs(const CoeffFn& f, const CoeffFn& g, std::span<const double> r, double alpha,
                    PairingVariant v, const GridOptions& opts = {});

/// Per-frequency factor of the solid side: it equals
/// lambda[k] * r^{r_power} times a_k b_k r^{2k} in one variable.
struct PairingDiagonal {
  std::vector<double> lambda;
  double r_power = 0.0;
  /// lambda_k == 1 for every k and no leftover power of r.
  bool unit = false;
  double max_unit_deviation = 0.0;
};
PairingDiagonal pairing_diagonal(double alpha, PairingVariant v, std::size_t k_max);

/// The solid side summed coefficient-wise with the diagonal factors.
cplx lp_pairing_rhs_diagonal(const CoeffFn& f, const CoeffFn& g, std::span<const double> r,
                             double alpha, PairingVariant v);

// Volume integrals and inequality ratios ----------------------------------

/// Weight prod_j (1-|w_j|)^gamma (1-|w_j| r_j)^kappa on D^n. An empty shift
/// means no shifted factor.
struct VolumeWeight {
  double gamma = 0.0;
  double kappa = 0.0;
  std::vector<double> shift;
};

/// int_{D^n} |f(w)|^s weight(w) dV(w) with dV Lebesgue measure.
double volume_integral(const CoeffFn& f, double s, const VolumeWeight& weight,
                       const GridOptions& opts = {});

/// Embedding of F^{p,q}_alpha or A^{p,q}_alpha into the weighted volume space.
Ratio embedding_ratio(const CoeffFn& f, double p, double q, double s, double alpha,
                      SpaceSpec::Family source, const GridOptions& opts = {});

/// M_t(f,r)(1-r)^beta against the (t, t beta - 1) volume norm.
Ratio mean_growth_ratio(const CoeffFn& f, double t, double beta, std::span<const double> r,
                        const GridOptions& opts = {});

/// int |f|^t (1-|w|)^q dV over (int |f|^{vt} (1-|w|)^{2v-2+qv} dV)^{1/v}; with
/// a shift r the weights become (1-|w|r)^q and (1-|w|r)^{qv} (1-|w|)^{2v-2}.
Ratio ds_ratio(const CoeffFn& f, double v, double q_w, double t,
               const std::optional<std::vector<double>>& shift = std::nullopt,
               const GridOptions& opts = {});
std::vector<std::string> ds_violations(double v, double q_w, double t, bool shifted,
                                       bool shift_touches_boundary);

// Beta integral ----------------------------------------------------------

/// int_0^1 (1-R)^alpha (1-Rr)^{-lambda} dR, adaptive quadrature.
double beta_integral(double r, double alpha, double lambda);
double beta_integral_c(double one_minus_r, double alpha, double lambda);

/// Fit of the beta integral over ladder levels [level_lo, level_hi].
FitResult beta_integral_exponent(double alpha, double lambda, double level_lo, double level_hi,
                                 int per_octave = 1);

// Kernel growth -----------------------------------------------------------

/// Growth exponent e with ||f_R|| ~ (1-R)^{-e} per variable for the kernel
/// (1-Rz)^{-(beta+1)}, or nullopt where no power law is expected.
std::optional<double> kernel_growth_exponent(const SpaceSpec& spec, double beta);

struct KernelFit {
  FitResult fit;
  std::vector<double> complements;
  std::vector<double> norms;
  bool converged = true;
};

/// space_norm of the diagonal kernel f_R, R = 1 - 2^-l, l in [level_lo, level_hi].
KernelFit kernel_norm_fit(const SpaceSpec& spec, double beta, int dim, int level_lo,
                          int level_hi, const GridOptions& opts = {});

}  // namespace polydisc
