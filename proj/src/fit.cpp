#include "polydisc/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "polydisc/error.hpp"

namespace polydisc {

FitResult fit_power_law(std::span<const double> complements, std::span<const double> values) {
  if (complements.size() != values.size())
    fail(ErrorCode::invalid_argument, "fit: radii and values differ in length");
  const std::size_t n = values.size();
  if (n < 4) fail(ErrorCode::invalid_argument, "fit: at least 4 samples required, got " + std::to_string(n));
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      fail(ErrorCode::domain, "fit: sample " + std::to_string(i) + " is not positive and finite");
    if (!(complements[i] > 0.0 && complements[i] <= 1.0))
      fail(ErrorCode::domain, "fit: radius " + std::to_string(i) + " outside [0,1)");
    if (i > 0 && !(complements[i] < complements[i - 1]))
      fail(ErrorCode::domain, "fit: radii must be strictly increasing");
    x[i] = -std::log(complements[i]);
    y[i] = std::log(values[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  FitResult res;
  res.slope = sxy / sxx;
  res.intercept = my - res.slope * mx;
  for (std::size_t i = 0; i < n; ++i)
    res.residual = std::max(res.residual, std::abs(y[i] - res.intercept - res.slope * x[i]));
  res.window = {1.0 - complements.front(), 1.0 - complements.back()};
  res.points = static_cast<int>(n);
  return res;
}

FitResult fit_exponent(std::span<const double> radii, std::span<const double> values) {
  std::vector<double> c(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) c[i] = 1.0 - radii[i];
  return fit_power_law(c, values);
}

}  // namespace polydisc
