#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "teichflow/errors.hpp"
#include "teichflow/lengths.hpp"

using namespace teichflow;
using testing::uniform;

namespace {
Slope golden() { return Slope::covering(ContinuedFraction::parse("a0=3,const:3"), 45.0); }
const Rational kHalf = Rational::parse("1/2");
}  // namespace

TEST_SUITE("lengths") {

TEST_CASE("extremal length bounds at T_1") {
  Slope s = golden();
  FlowTime T1 = min_time(s, 1);
  LatticeVector v{3, 10};
  CHECK(std::abs(ext_lower(s.theta(), v, kHalf, T1).mid() - 0.552891846193969) < 1e-12);
  CHECK(std::abs(ext_upper(s.theta(), v, kHalf, T1).mid() - 0.562167297877585) < 1e-12);
}

TEST_CASE("hyperbolic length from extremal length") {
  Interval h = hyp_from_ext(Interval::exact(0.01, 256));
  CHECK(std::abs(h.lo_down() - 0.01980294768719) < 1e-13);
  CHECK(std::abs(h.hi_up() - 0.0314159265358979) < 1e-13);
}

TEST_CASE("collar width") {
  CHECK(std::abs(collar_width(Interval::exact(0.1, 256)).mid() - 3.68908775707066) < 1e-12);
  double prev = 1e300;
  for (double l = 0.01; l < 5.0; l *= 1.7) {
    double w = collar_width(Interval::exact(l, 256)).mid();
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("crossing-arc estimate") {
  Interval mod = Interval::exact(6.28430795895692, 256);
  CHECK(std::abs(crossing_arc_bound(mod).mid() - 4.77503052839379) < 1e-10);
}

TEST_CASE("ext bounds are ordered and converge to the flat length") {
  Slope s = golden();
  double rel5 = 0, rel15 = 0;
  for (long n = 5; n <= 15; ++n) {
    FlowTime t = min_time(s, n);
    LatticeVector v = LatticeVector::of(s.convergent(n));
    Interval f = flat_length_sq(s.theta(), v, t);
    Interval lo = ext_lower(s.theta(), v, kHalf, t), hi = ext_upper(s.theta(), v, kHalf, t);
    CHECK(lo.hi() <= hi.lo());
    double rel = ((hi - lo) / f).mid();
    if (n == 5) rel5 = rel;
    if (n == 15) rel15 = rel;
    if (n >= 10) {
      CHECK((lo / f).lo_down() >= 0.9);
      CHECK((hi / f).hi_up() <= 1.1);
    }
  }
  CHECK(rel15 < rel5);
}

TEST_CASE("ext bounds are ordered at random times and vectors") {
  Slope s = golden();
  for (int trial = 0; trial < 100; ++trial) {
    FlowTime t = FlowTime::generic(uniform(0.0, 25.0));
    LatticeVector v = LatticeVector::of(s.convergent(static_cast<long>(uniform(0, 10))));
    try {
      CHECK(ext_lower(s.theta(), v, kHalf, t).hi() <= ext_upper(s.theta(), v, kHalf, t).lo());
    } catch (const DomainError&) {
      // |u × v| >= 1: no slit-avoiding cylinder.
    }
  }
}

TEST_CASE("short-curve state and alpha bounds") {
  Slope s = golden();
  FlowTime t = FlowTime::generic(20.0);
  ShortCurveState st = short_curve_state(s, 1, kHalf, t);
  auto fam = second_shortest_candidates(s, st.first_convergent.n);
  CHECK(std::find(fam.begin(), fam.end(), st.second_vector) != fam.end());
  Interval lo = curve_length_lower(st, CurveId::alpha(1));
  Interval hi = curve_length_upper(st, CurveId::alpha(1));
  CHECK(lo.lo_down() > 0.0);
  CHECK(lo.lo_down() <= hi.hi_up());
  CHECK(collar_crossing_bound(st.first, CurveId::alpha(1)).hi_up() <= lo.hi_up());
}

TEST_CASE("Minsky bound") {
  Interval a = Interval::exact(4.0, 256), b = Interval::exact(9.0, 256);
  CHECK(minsky_intersection_bound(a, b).contains(6.0));
}

}  // TEST_SUITE
