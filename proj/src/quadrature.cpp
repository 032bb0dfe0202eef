#include "polydisc/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "math_util.hpp"

namespace polydisc {

QuadRule gauss_jacobi(int points, double a, double b) {
  if (points < 1) fail(ErrorCode::invalid_argument, "quadrature needs at least one node");
  if (!(a > -1.0 && b > -1.0)) fail(ErrorCode::domain, "Jacobi exponents must exceed -1");
  const int n = points;
  const double ab = a + b;
  // monic three-term recurrence (Golub-Welsch)
  Eigen::VectorXd diag(n), sub(std::max(n - 1, 1));
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + detail::log_gamma(a + 1.0) +
                              detail::log_gamma(b + 1.0) - detail::log_gamma(ab + 2.0));
  for (int k = 0; k < n; ++k) {
    const double kk = k;
    const double s = 2.0 * kk + ab;
    diag(k) = k == 0 ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double kk = k;
    const double s = 2.0 * kk + ab;
    const double beta_k = k == 1 ? 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
                                 : 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) /
                                       (s * s * (s + 1.0) * (s - 1.0));
    sub(k - 1) = std::sqrt(beta_k);
  }
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) fail(ErrorCode::unconverged, "Golub-Welsch eigensolver failed");
  for (int i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

QuadRule gauss_legendre(int points) { return gauss_jacobi(points, 0.0, 0.0); }

QuadRule radial_rule(double gamma, int points_per_panel, int panels) {
  if (!(gamma > -1.0)) fail(ErrorCode::domain, "radial weight exponent must exceed -1");
  if (panels < 0 || panels > 60) fail(ErrorCode::invalid_argument, "radial panel count must be in 0..60");
  QuadRule out;
  const QuadRule leg = gauss_legendre(points_per_panel);
  for (int j = 0; j < panels; ++j) {
    const double ca = std::ldexp(1.0, -j);        // 1 - left end
    const double cb = std::ldexp(1.0, -(j + 1));  // 1 - right end
    const double half = 0.5 * (ca - cb);
    for (std::size_t i = 0; i < leg.size(); ++i) {
      const double c = cb + half * (1.0 - leg.nodes[i]);  // complement of the node
      out.nodes.push_back(1.0 - c);
      out.complements.push_back(c);
      out.weights.push_back(leg.weights[i] * half * std::pow(c, gamma));
    }
  }
  const QuadRule jac = gauss_jacobi(points_per_panel, gamma, 0.0);
  const double ct = std::ldexp(1.0, -panels);
  const double scale = std::pow(0.5 * ct, gamma + 1.0);
  for (std::size_t i = 0; i < jac.size(); ++i) {
    const double c = 0.5 * ct * (1.0 - jac.nodes[i]);
    out.nodes.push_back(1.0 - c);
    out.complements.push_back(c);
    out.weights.push_back(jac.weights[i] * scale);
  }
  return out;
}

double BoundaryLadder::complement(int i) const {
  return std::exp2(-static_cast<double>(i) / per_octave);
}

double BoundaryLadder::radius(int i) const { return i == 0 ? 0.0 : 1.0 - complement(i); }

int BoundaryLadder::rung_of_level(double level) const {
  return static_cast<int>(std::lround(level * per_octave));
}

GridOptions GridOptions::refined(int factor) const {
  GridOptions o = *this;
  o.torus_oversample *= factor;
  o.torus_min *= factor;
  o.radial_points *= factor;
  return o;
}

TorusSize torus_size(const Degree& degree, const GridOptions& opts) {
  TorusSize m;
  for (auto n : degree) {
    const std::size_t want = std::max<std::size_t>(
        {static_cast<std::size_t>(opts.torus_min),
         static_cast<std::size_t>(opts.torus_oversample) * (n + 1), 2 * n + 1});
    m.push_back(2 * fft_friendly_size((want + 1) / 2));
  }
  return m;
}

int auto_radial_panels(std::size_t max_degree) {
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(max_degree) + 1.0))) + 2;
}

QuadGrid QuadGrid::build(const Degree& degree, double weight_exponent, const GridOptions& opts) {
  QuadGrid g;
  g.torus = torus_size(degree, opts);
  const std::size_t nmax = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
  const int panels = opts.radial_panels >= 0 ? opts.radial_panels : auto_radial_panels(nmax);
  g.radial = radial_rule(weight_exponent, opts.radial_points, panels);
  g.weight_exponent = weight_exponent;
  g.ladder.per_octave = opts.ladder_per_octave;
  return g;
}

}  // namespace polydisc
