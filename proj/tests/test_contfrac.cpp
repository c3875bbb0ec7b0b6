#include <doctest.h>

#include <cmath>

#include "teichflow/contfrac.hpp"
#include "teichflow/errors.hpp"

using namespace teichflow;

namespace {
const char* const kGolden3 = "a0=3,const:3";
const char* const kSpiked = "a0=3,spiked:base=3,positions=2k,values=4^k";
}  // namespace

TEST_SUITE("contfrac") {

TEST_CASE("k-expressions") {
  CHECK(KExpression::parse("2k+1").evaluate(3) == 7);
  CHECK(KExpression::parse("4^k").evaluate(3) == 64);
  CHECK(KExpression::parse("-(k-1)*2").evaluate(4) == -6);
  CHECK(KExpression::parse("2^(k+1) - 3k").evaluate(5) == 49);
  CHECK(KExpression::parse("7").evaluate(100) == 7);
  CHECK_FALSE(KExpression::parse("7").depends_on_k());
  CHECK(KExpression::parse("k^2").depends_on_k());
  CHECK_THROWS_AS(KExpression::parse("2k+"), ConfigError);
  CHECK_THROWS_AS(KExpression::parse("(k"), ConfigError);
  CHECK_THROWS_AS(KExpression::parse("x"), ConfigError);
  CHECK_THROWS(KExpression::parse("2^k").evaluate(1000000));
}

TEST_CASE("pattern parsing and canonical form") {
  ContinuedFraction c = ContinuedFraction::parse(kGolden3);
  CHECK(c.to_string() == kGolden3);
  CHECK(ContinuedFraction::parse(c.to_string()) == c);
  ContinuedFraction p = ContinuedFraction::parse("a0=1,periodic:1,2");
  std::vector<mpz_class> want{1, 1, 2, 1, 2, 1};
  CHECK(p.elements(5) == want);
  CHECK(ContinuedFraction::parse(p.to_string()) == p);
  CHECK(ContinuedFraction::parse("const:5").a0() == 0);
  CHECK_THROWS_AS(ContinuedFraction::parse("const:0"), ConfigError);
  CHECK_THROWS_AS(ContinuedFraction::parse("wobbly:3"), ConfigError);
  CHECK_THROWS_AS(ContinuedFraction::parse("a0=3,spiked:base=3,values=4^k"), ConfigError);
}

TEST_CASE("default spiked slope") {
  ContinuedFraction s = ContinuedFraction::parse(kSpiked);
  std::vector<mpz_class> want{3, 3, 4, 3, 16, 3, 64};
  CHECK(s.elements(6) == want);
  CHECK(*s.spike_position(1) == 2);
  CHECK(s.spike_value(3) == 64);
  CHECK_FALSE(s.bounded());
  ContinuedFraction flat = s.flattened_spikes();
  CHECK(flat.element(4) == 3);
  CHECK(*flat.spike_position(2) == 4);
}

TEST_CASE("single spike") {
  ContinuedFraction s = ContinuedFraction::spiked(3, 3, "6", "50");
  CHECK(s.element(6) == 50);
  CHECK(s.element(7) == 3);
  CHECK_FALSE(s.spike_position(2).has_value());
}

TEST_CASE("convergents of [3;3,3,...]") {
  auto cs = convergents(ContinuedFraction::parse(kGolden3), 3);
  REQUIRE(cs.size() == 4);
  CHECK(cs[0].p == 3);
  CHECK(cs[0].q == 1);
  CHECK(cs[1].p == 10);
  CHECK(cs[2].p == 33);
  CHECK(cs[3].p == 109);
  CHECK(cs[3].q == 33);
  Slope slope(ContinuedFraction::parse(kGolden3), 5);
  CHECK(slope.convergent(-1).p == 1);
  CHECK(slope.convergent(-1).q == 0);
  CHECK_THROWS_AS(slope.convergent(40), InsufficientPrecision);
}

TEST_CASE("theta enclosure") {
  Interval th = theta_enclosure(ContinuedFraction::parse(kGolden3), 1e-40);
  CHECK(th.width_up() <= 1e-40);
  CHECK(std::abs(th.mid() - (3.0 + std::sqrt(13.0)) / 2.0) < 1e-15);
  Interval th2 = theta_enclosure(ContinuedFraction::parse(kSpiked), 1e-40);
  CHECK(std::abs(th2.mid() - 3.309489743741) < 1e-12);
}

TEST_CASE("approximation gap at n = 1") {
  Slope slope(ContinuedFraction::parse(kGolden3), 5);
  Interval g = slope.gap(1);
  CHECK(std::abs(g.mid() - 0.0916730868040161) < 1e-15);
  CHECK(Interval::rational(1, 13, 256).certainly_less(g));
  CHECK(g.certainly_less(Interval::rational(1, 10, 256)));
  CHECK(approximation_gap(slope.fraction(), 1, slope.theta()).overlaps(g));
}

TEST_CASE("recurrence, unimodularity and brackets up to n = 30") {
  for (const char* pattern : {kGolden3, kSpiked}) {
    CAPTURE(pattern);
    ContinuedFraction cf = ContinuedFraction::parse(pattern);
    Slope slope(cf, 31);
    auto cs = convergents(cf, 31);
    for (std::size_t n = 2; n <= 31; ++n) {
      CHECK(cs[n].p == cf.element(n) * cs[n - 1].p + cs[n - 2].p);
      CHECK(cs[n].q == cf.element(n) * cs[n - 1].q + cs[n - 2].q);
    }
    for (long n = 0; n <= 30; ++n) {
      const auto& a = cs[static_cast<std::size_t>(n)];
      const auto& b = cs[static_cast<std::size_t>(n + 1)];
      mpz_class det = b.p * a.q - b.q * a.p;
      CHECK(abs(det) == 1);
      Interval gap = slope.gap(n);
      CHECK(Interval::rational(1, a.q + b.q, 256).certainly_less(gap));
      CHECK(gap.certainly_less(Interval::rational(1, b.q, 256)));
    }
  }
}

TEST_CASE("refining a slope narrows theta") {
  Slope slope(ContinuedFraction::parse(kSpiked), 10);
  Slope fine = slope.refined();
  CHECK(slope.theta().contains(fine.theta()));
  CHECK(fine.theta().width_up() < slope.theta().width_up());
  CHECK(fine.bits() == 2 * slope.bits());
}

}  // TEST_SUITE
