#include <cmath>
#include <string>

#include "doctest.h"
#include "oracle.hpp"
#include "polydisc/multiplier_lab.hpp"

using namespace polydisc;

TEST_CASE("hypothesis validation names the violated constraint") {
  TheoremHypothesis h;
  CHECK(h.violations().empty());
  CHECK(h.threshold_gamma() == doctest::Approx(-0.25));
  h.t = 1.5;
  h.s = 1.5;
  try {
    h.validate();
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
    CHECK(std::string(e.what()).find("t ≤ 1 required") != std::string::npos);
  }
  TheoremHypothesis bad;
  bad.source = SpaceSpec::Family::hardy;
  bad.m = 0;
  CHECK(bad.violations().size() >= 2);
}

TEST_CASE("proposition thresholds") {
  PropositionParams p;
  CHECK(p.violations().empty());
  CHECK(p.tau() == doctest::Approx(2.0));
  CHECK(p.threshold_gamma() == doctest::Approx(0.5));
  p.v = 3.0;
  CHECK_FALSE(p.violations().empty());
}

TEST_CASE("multiplier coefficients and scaling") {
  auto k = MultiplierSeq::kernel({0.5}, 1.0);
  CHECK(std::abs(k.coefficient(MultiIndex{3}) - cplx(4.0 * 0.125)) < 1e-14);
  auto s = k.scaled(cplx(0.0, 2.0));
  CHECK(std::abs(s.coefficient(MultiIndex{3}) - cplx(0.0, 1.0)) < 1e-14);
  CHECK(MultiplierSeq::zero(2).coefficient(MultiIndex{1, 1}) == cplx(0.0));
  CHECK(MultiplierSeq::ones(2).coefficient(MultiIndex{4, 9}) == cplx(1.0));
  auto lac = MultiplierSeq::lacunary(1, 5, 4);
  CHECK(lac.coefficient(MultiIndex{3}) == cplx(0.0));
  CHECK(lac.coefficient(MultiIndex{4}) != cplx(0.0));
}

TEST_CASE("condition value for trivial multipliers") {
  TheoremHypothesis h;
  auto z = condition_value(MultiplierSeq::zero(1), h);
  CHECK(z.sup == 0.0);
  CHECK(z.flat);
}

TEST_CASE("operator ratios") {
  auto f = random_poly(6, 1, {12});
  auto src = SpaceSpec::triebel_f(1.0, 1.0, 0.5);
  auto one = operator_ratio(MultiplierSeq::ones(1), f, src, src);
  CHECK(std::abs(one.ratio.value - 1.0) < 1e-8);
  auto zero = operator_ratio(MultiplierSeq::zero(1), f, src, SpaceSpec::mixed_a(1.0, 1.0, 0.25));
  CHECK(zero.ratio.value == 0.0);

  auto c = MultiplierSeq::kernel({0.7}, 0.5);
  auto tgt = SpaceSpec::mixed_a(1.0, 1.0, 0.25);
  double a = operator_ratio(c, f, src, tgt).ratio.value;
  double b = operator_ratio(c.scaled(-2.0), f, src, tgt).ratio.value;
  double d = operator_ratio(c, f.scaled(cplx(0.0, 5.0)), src, tgt).ratio.value;
  CHECK(oracle::rel(b, 2.0 * a) < 1e-9);
  CHECK(oracle::rel(d, a) < 1e-9);
}

TEST_CASE("identity multiplier has no necessity growth") {
  auto src = SpaceSpec::triebel_f(1.0, 1.0, 0.5);
  auto r = kernel_ratio_probe(MultiplierSeq::ones(1), src, src, 1, 2.0, ProfileWindow{4, 8});
  CHECK(std::abs(r.fit.slope) < 0.02);
  for (auto& x : r.ratios) CHECK(std::abs(x.value - 1.0) < 1e-6);
}

TEST_CASE("verdict rule") {
  VerdictRule rule;
  CHECK(decide(0.0, 0.0, 1.0, false, rule) == Verdict::consistent_bounded);
  CHECK(decide(0.5, 0.5, 10.0, false, rule) == Verdict::consistent_unbounded);
  CHECK(decide(0.0, 0.0, 1.0, true, rule) == Verdict::inconclusive);
}

TEST_CASE("kernel sweep straddles the threshold") {
  auto fam = kernel_sweep(-0.25, 0.1, -2, 2);
  REQUIRE(fam.size() == 5);
  CHECK(fam[0].gamma == doctest::Approx(-0.45));
  CHECK(fam[4].gamma == doctest::Approx(-0.05));
}

TEST_CASE("constant and zero members are bounded") {
  TheoremHypothesis h;
  ScenarioOptions so;
  so.corpus_count = 2;
  so.window = {4, 8};
  GSpec c;
  c.kind = GSpec::Kind::constant;
  c.value = 2.0;
  c.id = "const";
  auto row = scenario_row(h, c, so);
  CHECK(row.verdict == Verdict::consistent_bounded);
  GSpec z;
  z.kind = GSpec::Kind::zero;
  z.id = "zero";
  auto zr = scenario_row(h, z, so);
  CHECK(zr.K == 0.0);
  CHECK(zr.verdict == Verdict::consistent_bounded);
}

TEST_CASE("proposition probe on the zero multiplier") {
  PropositionParams p;
  auto r = proposition_probe(MultiplierSeq::zero(1), p, ProfileWindow{4, 8});
  CHECK(r.condition.sup == 0.0);
}
