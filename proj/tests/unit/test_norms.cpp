#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "polydisc/norms.hpp"
#include "polydisc/quadrature.hpp"

using namespace polydisc;

namespace {

CoeffFn monomial(int dim, std::size_t k) {
  std::vector<std::size_t> e(static_cast<std::size_t>(dim), k);
  std::pair<MultiIndex, cplx> entry{MultiIndex(e), 1.0};
  return CoeffFn::from_sparse(std::span(&entry, 1), dim, Degree(static_cast<std::size_t>(dim), k));
}

}  // namespace

TEST_CASE("Jacobi and composite radial rules integrate beta moments") {
  auto gj = gauss_jacobi(10, 0.5, -0.3);
  // int_{-1}^1 (1-x)^a (1+x)^b = 2^{a+b+1} B(a+1, b+1)
  double mass = gj.integrate([](double) { return 1.0; });
  CHECK(oracle::rel(mass, std::pow(2.0, 1.2) * oracle::beta_fn(1.5, 0.7)) < 1e-13);

  for (double g : {-0.5, 0.0, 1.5, 3.0})
    for (int panels : {0, 4, 12}) {
      auto rule = radial_rule(g, 12, panels);
      for (int j : {0, 3, 9}) {
        double v = rule.integrate([j](double R) { return std::pow(R, j); });
        CHECK(oracle::rel(v, oracle::beta_fn(j + 1.0, g + 1.0)) < 1e-12);
      }
    }
}

TEST_CASE("torus sizes are even and clear the aliasing bound") {
  GridOptions o;
  for (std::size_t n : {0u, 3u, 16u, 33u, 100u}) {
    auto t = torus_size({n, n / 2}, o);
    for (std::size_t j = 0; j < 2; ++j) CHECK(t[j] % 2 == 0);
    CHECK(t[0] >= 2 * n + 1);
  }
}

TEST_CASE("integral means of monomials") {
  for (int dim : {1, 2}) {
    auto f = monomial(dim, 3);
    std::vector<double> r(static_cast<std::size_t>(dim), 0.7);
    double expect = std::pow(0.7, 3.0 * dim);
    for (double p : {0.5, 1.0, 3.0, kInfinity}) CHECK(oracle::rel(m_p_norm(f, r, p), expect) < 1e-10);
  }
}

TEST_CASE("M_2 matches the coefficient sum") {
  auto f = random_poly(4, 2, {10, 7});
  std::vector<double> r{0.9, 0.6};
  CHECK(oracle::rel(m_p_norm(f, r, 2.0), std::sqrt(f.weighted_energy(r))) < 1e-12);
}

TEST_CASE("sup of the kernel is attained at the positive real point") {
  std::vector<cplx> w{0.8};
  auto k = bergman_kernel(w, 1.0);
  std::vector<double> r{0.7};
  CHECK(oracle::rel(m_p_norm(k, r, kInfinity), std::pow(1 - 0.56, -2.0)) < 1e-8);
}

TEST_CASE("means increase with r and with p") {
  auto f = random_poly(8, 1, {12});
  double prev = 0.0;
  for (double r0 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    std::vector<double> r{r0};
    double m = m_p_norm(f, r, 1.5);
    CHECK(m >= prev);
    prev = m;
    double last = 0.0;
    for (double p : {0.5, 1.0, 2.0, 4.0, kInfinity}) {
      double v = m_p_norm(f, r, p);
      CHECK(v >= last * (1 - 1e-12));
      last = v;
    }
  }
}

TEST_CASE("f = 1 in the mixed and Triebel-Lizorkin families") {
  auto one = CoeffFn::constant(1, 1.0);
  for (double q : {0.5, 1.0, 2.0})
    for (double a : {0.5, 1.0, 2.0}) {
      double expect = std::pow(a * q, -1.0 / q);
      CHECK(oracle::rel(space_norm(one, SpaceSpec::mixed_a(1.5, q, a)).value, expect) < 1e-10);
      CHECK(oracle::rel(space_norm(one, SpaceSpec::triebel_f(1.5, q, a)).value, expect) < 1e-10);
    }
}

TEST_CASE("mixed norm of z^k is a beta function") {
  auto f = monomial(1, 5);
  for (double q : {1.0, 2.0})
    for (double a : {0.5, 1.5}) {
      double expect = std::pow(oracle::beta_fn(5.0 * q + 1.0, a * q), 1.0 / q);
      CHECK(oracle::rel(space_norm(f, SpaceSpec::mixed_a(3.0, q, a)).value, expect) < 1e-10);
    }
  auto g = monomial(2, 2);
  double e1 = oracle::beta_fn(3.0, 1.0);
  CHECK(oracle::rel(space_norm(g, SpaceSpec::mixed_a(2.0, 1.0, 1.0)).value, e1 * e1) < 1e-10);
}

TEST_CASE("H^2 norm is the coefficient l2 norm") {
  GridOptions tight;
  tight.sup_tol = 1e-12;
  for (int dim : {1, 2}) {
    auto f = random_poly(31 + dim, dim, Degree(static_cast<std::size_t>(dim), 12));
    auto n = space_norm(f, SpaceSpec::hardy(2.0), tight);
    CHECK(n.converged);
    CHECK(oracle::rel(n.value, std::sqrt(f.weighted_energy(std::vector<double>(dim, 1.0)))) < 1e-8);
  }
}

TEST_CASE("norms are absolutely homogeneous") {
  auto f = random_poly(2, 1, {10});
  cplx lam(-1.5, 2.0);
  for (auto spec : {SpaceSpec::hardy(1.0), SpaceSpec::mixed_a(2.0, 1.0, 0.5),
                    SpaceSpec::triebel_f(1.0, 2.0, 1.0), SpaceSpec::sup_d(1.0, 0.5),
                    SpaceSpec::limit_f(2.0, 0.5), SpaceSpec::limit_a(2.0, 0.5)}) {
    double a = space_norm(f, spec).value;
    double b = space_norm(f.scaled(lam), spec).value;
    CHECK_MESSAGE(oracle::rel(b, std::abs(lam) * a) < 1e-9, spec.str());
  }
}

TEST_CASE("the limiting A-norm is dominated by the limiting F-norm") {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    auto f = random_poly(s, 1, {12});
    for (double p : {1.0, 2.0, 3.0}) {
      double a = space_norm(f, SpaceSpec::limit_a(p, 0.5)).value;
      double fv = space_norm(f, SpaceSpec::limit_f(p, 0.5)).value;
      CHECK(a <= fv * (1 + 1e-9));
    }
  }
}

TEST_CASE("zero function and sup profile edge cases") {
  CoeffFn z({6});
  CHECK(space_norm(z, SpaceSpec::hardy(2.0)).value == 0.0);
  auto prof = weighted_sup_profile(z, 1, 2.0, 1.0, 6);
  CHECK(prof.sup == 0.0);
  for (auto& pt : prof.points) CHECK(pt.value == 0.0);

  auto c = CoeffFn::constant(1, cplx(0.0, -2.5));
  auto pc = weighted_sup_profile(c, 0, 2.0, 1.0, 6);
  CHECK(oracle::rel(pc.sup, 2.5) < 1e-12);
  CHECK(pc.sup_at[0] == 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_FALSE(SpaceSpec::hardy(0.0).violations().empty());
  CHECK_FALSE(SpaceSpec::mixed_a(1.0, 1.0, 0.0).violations().empty());
  CHECK_FALSE(SpaceSpec::sup_d(-1.0, 0.5).violations().empty());
  CHECK_FALSE(SpaceSpec::triebel_f(1.0, kInfinity, 1.0).violations().empty());
  CHECK(SpaceSpec::triebel_f(1.0, 2.0, 1.0).violations().empty());
  CHECK_THROWS_AS(space_norm(CoeffFn::constant(1, 1.0), SpaceSpec::limit_f(1.0, -1.0)), Error);
}
