#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "polydisc/analysis.hpp"
#include "polydisc/fit.hpp"

using namespace polydisc;

namespace {

CoeffFn z_power(std::size_t k) {
  std::pair<MultiIndex, cplx> e{MultiIndex{k}, 1.0};
  return CoeffFn::from_sparse(std::span(&e, 1), 1, {k});
}

}  // namespace

TEST_CASE("pairing torus side") {
  auto one = CoeffFn::constant(1, 1.0);
  std::vector<double> r{0.6};
  CHECK(std::abs(lp_pairing_lhs(one, one, r) - cplx(1.0)) < 1e-15);
  auto z = z_power(1);
  CHECK(std::abs(lp_pairing_lhs(z, z, r) - cplx(0.36)) < 1e-15);

  auto f = random_poly(3, 2, {6, 5});
  auto g = random_poly(4, 2, {4, 7});
  std::vector<double> r2{0.8, 0.5};
  cplx ref = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto k = f.index_of(i);
    if (k[0] > 4 || k[1] > 7) continue;
    ref += f.at_linear(i) * g[k] * std::pow(0.64, double(k[0])) * std::pow(0.25, double(k[1]));
  }
  CHECK(std::abs(lp_pairing_lhs(f, g, r2) - ref) < 1e-13);
}

TEST_CASE("pairing solid side for constants") {
  auto one = CoeffFn::constant(1, 1.0);
  std::vector<double> r{0.7};
  for (double a : {0.5, 1.0, 2.5}) {
    cplx stated = lp_pairing_rhs(one, one, r, a, PairingVariant::as_stated);
    CHECK(std::abs(stated - cplx(a / (a + 1) * 0.49)) < 1e-12);
    cplx proof = lp_pairing_rhs(one, one, r, a, PairingVariant::proof_form);
    CHECK(std::abs(proof - cplx(1.0)) < 1e-12);
  }
}

TEST_CASE("pairing diagonal factors") {
  auto d = pairing_diagonal(1.0, PairingVariant::as_stated, 8);
  CHECK(d.lambda[0] == doctest::Approx(0.5));
  CHECK(d.r_power == doctest::Approx(2.0));
  CHECK_FALSE(d.unit);
  for (std::size_t k = 0; k <= 8; ++k) {
    double ref = 1.0 * frac_factor(k, 2.0) * oracle::beta_fn(k / 2.0 + 1.0, 2.0);
    CHECK(oracle::rel(d.lambda[k], ref) < 1e-12);
  }
  auto p = pairing_diagonal(0.5, PairingVariant::proof_form, 8);
  CHECK(p.lambda[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.r_power == doctest::Approx(0.0));
  CHECK_FALSE(p.unit);
  for (double l : p.lambda) CHECK(l > 0.0);
}

TEST_CASE("pairing solid side quadrature matches the diagonal sum") {
  auto f = random_poly(12, 1, {10});
  auto g = random_poly(13, 1, {10});
  std::vector<double> r{0.8};
  for (auto v : {PairingVariant::as_stated, PairingVariant::proof_form}) {
    cplx q = lp_pairing_rhs(f, g, r, 1.5, v);
    cplx d = lp_pairing_rhs_diagonal(f, g, r, 1.5, v);
    CHECK(std::abs(q - d) < 1e-9 * (1 + std::abs(d)));
  }
}

TEST_CASE("ratio tagging") {
  auto z = Ratio::of(0.0, 0.0);
  CHECK(z.degenerate_zero);
  CHECK(z.finite());
  auto inf = Ratio::of(1.0, 0.0);
  CHECK_FALSE(inf.finite());
  CHECK(Ratio::of(3.0, 2.0).value == 1.5);
}

TEST_CASE("embedding, mean growth and DS ratios of f = 1") {
  auto one = CoeffFn::constant(1, 1.0);
  auto e = embedding_ratio(one, 2.0, 2.0, 2.0, 1.0, SpaceSpec::Family::triebel_f);
  CHECK(oracle::rel(e.value, std::sqrt(oracle::disk_weight_mass(1.0)) * std::sqrt(2.0)) < 1e-10);

  std::vector<double> r{0.5};
  auto m = mean_growth_ratio(one, 2.0, 1.0, r);
  CHECK(oracle::rel(m.value, 0.5 / std::sqrt(oracle::disk_weight_mass(1.0))) < 1e-10);

  auto d = ds_ratio(one, 0.5, 1.0, 2.0);
  double ref = oracle::disk_weight_mass(1.0) / std::pow(oracle::disk_weight_mass(-0.5), 2.0);
  CHECK(oracle::rel(d.value, ref) < 1e-8);

  CHECK(embedding_ratio(CoeffFn({4}), 1.0, 1.0, 2.0, 1.0, SpaceSpec::Family::mixed_a).degenerate_zero);
  CHECK_THROWS_AS(embedding_ratio(one, 3.0, 1.0, 2.0, 1.0, SpaceSpec::Family::mixed_a), Error);
}

TEST_CASE("DS ratio identities") {
  auto f = random_poly(17, 1, {10});
  CHECK(std::abs(ds_ratio(f, 1.0, 0.5, 1.5).value - 1.0) < 1e-12);

  auto plain = ds_ratio(f, 0.7, 1.0, 1.0).value;
  auto at_one = ds_ratio(f, 0.7, 1.0, 1.0, std::vector<double>{1.0}).value;
  CHECK(oracle::rel(at_one, plain) < 1e-12);
  auto q0 = ds_ratio(f, 0.7, 0.0, 1.0).value;
  auto q0_shift0 = ds_ratio(f, 0.7, 0.0, 1.0, std::vector<double>{0.0}).value;
  CHECK(oracle::rel(q0_shift0, q0) < 1e-12);

  auto a = ds_ratio(f, 0.8, 0.5, 2.0).value;
  auto b = ds_ratio(f.scaled(cplx(0.0, 3.0)), 0.8, 0.5, 2.0).value;
  CHECK(oracle::rel(a, b) < 1e-9);

  CHECK_THROWS_AS(ds_ratio(f, 0.5, -0.5, 1.0), Error);
  CHECK_THROWS_AS(ds_ratio(f, 0.4, 1.0, 1.0, std::vector<double>{0.5}), Error);
}

TEST_CASE("beta integral") {
  for (double a : {0.0, 0.5, 2.0}) CHECK(oracle::rel(beta_integral(0.0, a, 3.0), 1.0 / (a + 1.0)) < 1e-12);
  for (double r : {0.5, 0.9, 0.999}) CHECK(oracle::rel(beta_integral(r, 0.0, 2.0), 1.0 / (1.0 - r)) < 1e-10);
  double prev = 0.0;
  for (double r : {0.1, 0.5, 0.9, 0.99}) {
    double v = beta_integral(r, 1.0, 3.0);
    CHECK(v > prev);
    prev = v;
  }
  auto fit = beta_integral_exponent(0.0, 2.0, 6, 16);
  CHECK(std::abs(fit.slope - 1.0) < 0.02);
  CHECK_THROWS_AS(beta_integral_exponent(1.0, 2.0, 6, 16), Error);
}

TEST_CASE("power-law fits") {
  std::vector<double> r, v, c;
  for (int l = 1; l <= 8; ++l) {
    double x = std::ldexp(1.0, -l);
    r.push_back(1.0 - x);
    c.push_back(x);
    v.push_back(3.0 * std::pow(x, -2.0));
  }
  auto f = fit_exponent(r, v);
  CHECK(std::abs(f.slope - 2.0) < 1e-12);
  CHECK(f.residual < 1e-12);
  CHECK(std::abs(fit_power_law(c, v).slope - 2.0) < 1e-12);
  std::vector<double> flat(v.size(), 4.0);
  CHECK(std::abs(fit_power_law(c, flat).slope) < 1e-12);
  v[2] = 0.0;
  CHECK_THROWS_AS(fit_exponent(r, v), Error);
  std::vector<double> few{0.1, 0.2, 0.3}, vals{1, 2, 3};
  CHECK_THROWS_AS(fit_exponent(few, vals), Error);
}

TEST_CASE("kernel growth in the Hardy norm") {
  auto pred = kernel_growth_exponent(SpaceSpec::hardy(2.0), 1.0);
  REQUIRE(pred.has_value());
  CHECK(*pred == doctest::Approx(1.5));
  auto kf = kernel_norm_fit(SpaceSpec::hardy(2.0), 1.0, 1, 4, 10);
  CHECK(std::abs(kf.fit.slope - 1.5) < 0.05);
}
