#include "polydisc/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

namespace polydisc {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_smooth(std::size_t n) {
  for (std::size_t p : {2u, 3u, 5u, 7u})
    while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace

std::size_t fft_friendly_size(std::size_t n) {
  if (n <= 1) return 1;
  while (!is_smooth(n)) ++n;
  return n;
}

std::vector<std::size_t> coarse_subgrid(const TorusSize& grid) {
  std::vector<std::size_t> out{0};
  for (auto m : grid) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * (m + 1) / 2);
    for (auto base : out)
      for (std::size_t i = 0; i < m; i += 2) next.push_back(base * m + i);
    out = std::move(next);
  }
  return out;
}

void check_aliasing_guard(const Degree& degree, const TorusSize& grid) {
  if (grid.size() != degree.size())
    fail(ErrorCode::invalid_argument, "torus grid dimension does not match the function");
  for (std::size_t j = 0; j < grid.size(); ++j)
    if (grid[j] < 2 * degree[j] + 1)
      fail(ErrorCode::grid_guard,
           "torus grid size " + std::to_string(grid[j]) + " in variable " + std::to_string(j + 1) +
               " violates the aliasing guard M >= 2N+1 = " + std::to_string(2 * degree[j] + 1));
}

struct TorusEvaluator::Plan {
  fftw_complex* buffer = nullptr;
  fftw_plan plan = nullptr;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
    if (buffer) fftw_free(buffer);
  }
};

TorusEvaluator::TorusEvaluator(const CoeffFn& f, TorusSize grid)
    : f_(&f), grid_(std::move(grid)), plan_(std::make_unique<Plan>()) {
  check_aliasing_guard(f.degree(), grid_);
  points_ = 1;
  for (auto m : grid_) points_ *= m;
  std::vector<int> dims(grid_.begin(), grid_.end());
  {
    std::lock_guard lock(planner_mutex());
    plan_->buffer = fftw_alloc_complex(points_);
    plan_->plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), plan_->buffer,
                                plan_->buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!plan_->buffer || !plan_->plan) fail(ErrorCode::invalid_argument, "FFT planning failed");

  offsets_.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto k = f.index_of(i);
    std::size_t off = 0;
    for (int j = 0; j < f.dim(); ++j) off = off * grid_[static_cast<std::size_t>(j)] + k[j];
    offsets_[i] = off;
  }
  powers_.resize(static_cast<std::size_t>(f.dim()));
}

TorusEvaluator::~TorusEvaluator() = default;

std::span<const cplx> TorusEvaluator::at(std::span<const double> r) {
  const int n = f_->dim();
  if (static_cast<int>(r.size()) != n) fail(ErrorCode::invalid_argument, "radius dimension mismatch");
  for (int j = 0; j < n; ++j) {
    const double rj = r[static_cast<std::size_t>(j)];
    if (!(rj >= 0.0 && rj < 1.0)) fail(ErrorCode::domain, "radius outside [0,1)");
    auto& pw = powers_[static_cast<std::size_t>(j)];
    pw.resize(f_->extent(j));
    const double lr = std::log(rj);
    for (std::size_t k = 0; k < pw.size(); ++k)
      pw[k] = k == 0 ? 1.0 : (rj == 0.0 ? 0.0 : std::exp(static_cast<double>(k) * lr));
  }
  auto* buf = reinterpret_cast<cplx*>(plan_->buffer);
  std::fill(buf, buf + points_, cplx{0.0, 0.0});
  const auto coeffs = f_->coeffs();
  if (n == 1) {
    const auto& pw = powers_[0];
    for (std::size_t k = 0; k < coeffs.size(); ++k) buf[k] = coeffs[k] * pw[k];
  } else {
    std::vector<std::size_t> k(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      double s = 1.0;
      for (int j = 0; j < n; ++j) s *= powers_[static_cast<std::size_t>(j)][k[static_cast<std::size_t>(j)]];
      buf[offsets_[i]] = coeffs[i] * s;
      for (int j = n - 1; j >= 0; --j) {
        auto& kj = k[static_cast<std::size_t>(j)];
        if (++kj < f_->extent(j)) break;
        kj = 0;
      }
    }
  }
  fftw_execute(plan_->plan);
  return {buf, points_};
}

std::vector<cplx> evaluate_torus_grid(const CoeffFn& f, std::span<const double> r,
                                      const TorusSize& grid) {
  TorusEvaluator ev(f, grid);
  const auto v = ev.at(r);
  return {v.begin(), v.end()};
}

std::size_t conjugate_grid_index(std::size_t linear, const TorusSize& grid) {
  std::size_t out = 0;
  std::size_t stride = 1;
  for (std::size_t j = grid.size(); j-- > 0;) {
    const std::size_t m = grid[j];
    const std::size_t l = linear % m;
    linear /= m;
    out += ((m - l) % m) * stride;
    stride *= m;
  }
  return out;
}

}  // namespace polydisc
