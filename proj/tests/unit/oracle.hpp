#pragma once
// Closed forms used as independent references by the unit tests.
#include <cmath>
#include <numbers>

namespace oracle {

inline double beta_fn(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// int_D (1-|w|)^g dV = 2 pi B(2, g+1)
inline double disk_weight_mass(double g) { return 2.0 * std::numbers::pi * beta_fn(2.0, g + 1.0); }

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
