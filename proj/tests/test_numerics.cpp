#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "support.hpp"
#include "teichflow/errors.hpp"

using namespace teichflow;
using testing::iv;
using testing::uniform;

TEST_SUITE("numerics") {

TEST_CASE("rational enclosures contain their value") {
  Interval third = Interval::rational(1, 3, 256);
  CHECK(third.width_up() < 1e-70);
  Interval three = third * Interval::integer(3, 256);
  CHECK(three.contains(1.0));
}

TEST_CASE("pi at 256 bits contains pi at 512 bits") {
  Interval p256 = Interval::pi(256), p512 = Interval::pi(512);
  CHECK(p256.contains(p512));
  CHECK(p512.width_up() <= p256.width_up());
}

TEST_CASE("log of the T_1 argument") {
  Interval t = log(iv(393.0025, 393.0026));
  CHECK(std::abs(t.mid() - 5.97381) < 1e-5);
  CHECK(t.width_up() < 1e-6);
}

TEST_CASE("inclusion monotonicity of the elementary operations") {
  const ArithOp binary[] = {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::div};
  const ArithOp unary[] = {ArithOp::exp, ArithOp::log, ArithOp::sqrt, ArithOp::sinh, ArithOp::asinh};
  for (int trial = 0; trial < 200; ++trial) {
    double a = uniform(0.1, 10.0), b = a + uniform(0.0, 2.0);
    double c = uniform(0.1, 10.0), d = c + uniform(0.0, 2.0);
    Interval X = iv(a, b), Y = iv(c, d);
    Interval x = iv(uniform(a, b), b), y = iv(c, uniform(c, d));
    REQUIRE(X.contains(x));
    REQUIRE(Y.contains(y));
    for (ArithOp op : binary) CHECK(interval_arith(X, Y, op).contains(interval_arith(x, y, op)));
    for (ArithOp op : unary) CHECK(interval_arith(X, X, op).contains(interval_arith(x, x, op)));
  }
}

TEST_CASE("doubling the precision narrows and stays inside") {
  for (int trial = 0; trial < 50; ++trial) {
    const double v = uniform(0.5, 50.0);
    auto f = [&](int bits) {
      Interval x = Interval::exact(v, bits);
      return log(x * x + Interval::integer(1, bits)) / sqrt(x) + asinh(Interval::integer(1, bits) / sinh(x));
    };
    Interval lo = f(256), hi = f(512);
    CHECK(lo.contains(hi));
    CHECK(hi.width_up() <= lo.width_up());
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(log(iv(-1.0, 2.0)), DomainError);
  CHECK_THROWS_AS(sqrt(iv(-2.0, -1.0)), DomainError);
  CHECK_THROWS_AS(recip(iv(-1.0, 1.0)), DomainError);
}

TEST_CASE("bisection finds certified roots") {
  auto f = [](const Interval& x) { return x * exp(x / Interval::integer(2, x.bits())) - Interval::integer(2, x.bits()); };
  Interval r = bisect_root(f, 0.0, 3.0, 1e-20);
  CHECK(std::abs(r.mid() - 1.13428658081957) < 1e-13);
  CHECK(r.width_up() <= 1e-20);

  auto g = [](const Interval& l) { return l - Interval::exact(0.02, l.bits()) * exp(-l / Interval::integer(2, l.bits())); };
  Interval h = bisect_root(g, 0.0, 1.0, 1e-18);
  CHECK(std::abs(h.mid() - 0.01980294768719) < 1e-14);
  CHECK(h.width_up() <= 1e-18);
}

TEST_CASE("bisection endpoints keep the sign change") {
  for (int trial = 0; trial < 40; ++trial) {
    const double c = uniform(1.0, 100.0);
    auto f = [c](const Interval& x) { return x * x * x - Interval::exact(c, x.bits()); };
    Interval r = bisect_root(f, 0.0, 10.0, 1e-25);
    CHECK(std::abs(r.mid() - std::cbrt(c)) < 1e-12);
    Interval at_lo = f(Interval::point(r.lo())), at_hi = f(Interval::point(r.hi()));
    CHECK(!at_lo.positive());
    CHECK(!at_hi.negative());
  }
}

TEST_CASE("bisection without a sign change") {
  auto f = [](const Interval& x) { return x * x + Interval::integer(1, x.bits()); };
  CHECK_THROWS_AS(bisect_root(f, -1.0, 1.0, 1e-10), NoSignChange);
}

TEST_CASE("precision from the environment") {
  ::setenv("TEICHFLOW_BITS", "512", 1);
  CHECK(Precision::from_env().bits == 512);
  ::setenv("TEICHFLOW_BITS", "many", 1);
  CHECK_THROWS_AS(Precision::from_env(), ConfigError);
  ::setenv("TEICHFLOW_BITS", "32", 1);
  CHECK_THROWS_AS(Precision::from_env(), ConfigError);
  ::unsetenv("TEICHFLOW_BITS");
  CHECK(Precision::from_env().bits == 256);
}

}  // TEST_SUITE
