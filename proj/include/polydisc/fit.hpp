#pragma once

#include <span>
#include <utility>

namespace polydisc {

/// Least-squares line log(value) = intercept + slope * (-log(1-r)).
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |deviation| in log-log coordinates
  std::pair<double, double> window{0.0, 0.0};  // radii of the first and last sample
  int points = 0;
};

/// Samples must be >= 4, positive, radii strictly increasing in [0,1).
FitResult fit_exponent(std::span<const double> radii, std::span<const double> values);

/// Same fit taking complements 1 - r directly (exact near r = 1); the
/// complements must be strictly decreasing in (0,1].
FitResult fit_power_law(std::span<const double> complements, std::span<const double> values);

}  // namespace polydisc
