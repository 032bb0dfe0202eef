#pragma once

#include <memory>
#include <span>
#include <vector>

#include "polydisc/coeff_fn.hpp"

namespace polydisc {

/// Grid sizes M_j for the tensor grid of M_j-th roots of unity.
using TorusSize = std::vector<std::size_t>;

/// Smallest 7-smooth integer >= n (fast FFT lengths).
std::size_t fft_friendly_size(std::size_t n);

/// Throws ErrorCode::grid_guard unless M_j >= 2 N_j + 1 in every variable.
void check_aliasing_guard(const Degree& degree, const TorusSize& grid);

/// Row-major indices of the grid points whose every index is even.
std::vector<std::size_t> coarse_subgrid(const TorusSize& grid);

/// Evaluates one function on a fixed torus grid at many radius vectors.
/// Values come out row-major over the grid, xi_l = exp(2 pi i l_j / M_j).
/// Not thread-safe; make one per thread.
class TorusEvaluator {
 public:
  TorusEvaluator(const CoeffFn& f, TorusSize grid);
  ~TorusEvaluator();
  TorusEvaluator(const TorusEvaluator&) = delete;
  TorusEvaluator& operator=(const TorusEvaluator&) = delete;

  std::span<const cplx> at(std::span<const double> r);

  const TorusSize& grid() const noexcept { return grid_; }
  std::size_t points() const noexcept { return points_; }
  const CoeffFn& function() const noexcept { return *f_; }

 private:
  const CoeffFn* f_;
  TorusSize grid_;
  std::size_t points_ = 0;
  struct Plan;
  std::unique_ptr<Plan> plan_;
  std::vector<std::size_t> offsets_;  // buffer offset of each coefficient
  std::vector<std::vector<double>> powers_;
};

std::vector<cplx> evaluate_torus_grid(const CoeffFn& f, std::span<const double> r,
                                      const TorusSize& grid);

/// Linear grid index of the point conj(xi_l) given the index of xi_l.
std::size_t conjugate_grid_index(std::size_t linear, const TorusSize& grid);

}  // namespace polydisc
