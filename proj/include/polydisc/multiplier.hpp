#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "polydisc/coeff_fn.hpp"

namespace polydisc {

/// A coefficient multiplier c = {c_k}. Rules are evaluated per index, so a
/// kernel-type sequence never needs to be materialized beyond what a given
/// function uses.
class MultiplierSeq {
 public:
  struct Explicit {
    CoeffFn table;  // entries beyond the table's degree are zero
  };
  struct Kernel {
    std::vector<cplx> w;
    double beta;
  };
  struct Lacunary {
    std::uint64_t seed;
    int levels;
  };
  struct Ones {};
  struct Zero {};
  using Rule = std::variant<Explicit, Kernel, Lacunary, Ones, Zero>;

  static MultiplierSeq explicit_table(CoeffFn table);
  static MultiplierSeq kernel(std::vector<cplx> w, double beta);
  static MultiplierSeq lacunary(int dim, std::uint64_t seed, int levels);
  static MultiplierSeq ones(int dim);
  static MultiplierSeq zero(int dim);

  int dim() const noexcept { return dim_; }
  const Rule& rule() const noexcept { return rule_; }
  cplx scale() const noexcept { return scale_; }
  std::string describe() const;

  /// lambda * c
  MultiplierSeq scaled(cplx lambda) const;

  cplx coefficient(const MultiIndex& k) const;

  /// Table of c_k for k within the given degree bounds.
  CoeffFn materialize(const Degree& degree) const;

  /// Generating function g(z) = sum c_k z^k, truncated so that the dropped
  /// tail is below tol at radius r_max. Sequences without decay (Ones,
  /// Kernel near the boundary) need r_max < 1.
  CoeffFn generating_function(double r_max, double tol = 1e-10) const;

 private:
  MultiplierSeq(int dim, Rule rule);
  int dim_;
  Rule rule_;
  cplx scale_{1.0, 0.0};
};

/// Coefficient-wise product h = M_c f, within f's degree bounds.
CoeffFn hadamard(const MultiplierSeq& c, const CoeffFn& f);

}  // namespace polydisc
