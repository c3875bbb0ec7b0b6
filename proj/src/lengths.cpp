#include "teichflow/lengths.hpp"

#include <cmath>

#include "teichflow/errors.hpp"

namespace teichflow {

Interval ext_lower(const Interval& theta, const LatticeVector& v, const Rational& s, const FlowTime& t) {
  Interval flat = flat_length_sq(theta, v, t);
  const int bits = flat.bits();
  Interval stadium = (Interval::pi(bits) + Interval::integer(2, bits)) * sqr(s.to_interval(bits)) *
                     exp(-t.value().with_bits(bits));
  return flat / (Interval::integer(1, bits) + stadium);
}

Interval ext_upper(const Interval& theta, const LatticeVector& v, const Rational& s, const FlowTime& t) {
  CylinderEstimate cyl = short_curve_cylinder(theta, v, s, t);
  return sqr(cyl.length) / cyl.area;
}

Interval hyp_from_ext(const Interval& ext) {
  if (!ext.positive()) throw DomainError("extremal length must be positive, got " + ext.to_string(8));
  const int bits = ext.bits();
  Interval lo_ext = Interval::point(ext.lo());
  Interval two = Interval::integer(2, bits);
  Interval half = Interval::exact(0.5, bits);
  IntervalFunction f = [&](const Interval& l) { return l - two * lo_ext * exp(-(l * half)); };
  Real upper = (two * lo_ext).hi();
  const double tol = std::ldexp(ext.lo_down(), -(bits - 16));
  Interval root = bisect_root(f, Real(0.0, bits), upper, tol);
  Interval top = Interval::pi(bits) * Interval::point(ext.hi());
  return Interval(root.lo(), top.hi());
}

Interval collar_width(const Interval& hyp) {
  if (!hyp.positive()) throw DomainError("collar width needs a positive length, got " + hyp.to_string(8));
  return asinh(recip(sinh(hyp * Interval::exact(0.5, hyp.bits()))));
}

LengthInterval sheet_curve_lengths(const Interval& theta, int sheet, const LatticeVector& v, const Rational& s,
                                   const FlowTime& t) {
  Interval flat = flat_length_sq(theta, v, t);
  Interval lo = ext_lower(theta, v, s, t);
  Interval hi = ext_upper(theta, v, s, t);
  Interval ext(lo.lo(), hi.hi());
  return {CurveId::sheet_curve(sheet, v), flat, ext, hyp_from_ext(ext), "ext sandwich + Maskit"};
}

ShortCurveState short_curve_state(const Slope& slope, int sheet, const Rational& s, const FlowTime& t) {
  FlowTime tt = t.at(slope.precision());
  ShortestPrediction first = predicted_shortest(slope, tt);
  const long n = first.convergent.n;
  SecondPrediction second = predicted_second_shortest(slope, n, tt, 4, true);

  ShortCurveState state;
  state.sheet = sheet;
  state.t = tt;
  state.first_convergent = first.convergent;
  state.first = sheet_curve_lengths(slope.theta(), sheet, LatticeVector::of(first.convergent), s, tt);
  state.second_vector = second.vector;
  state.second_tied = second.tied;
  state.second_coefficient = second.a;
  state.second_is_convergent = second.a == 0 || mpz_class(second.a) == slope.element(static_cast<std::size_t>(n + 1));
  state.second = sheet_curve_lengths(slope.theta(), sheet, second.vector, s, tt);
  return state;
}

ShortCurveState with_second(const ShortCurveState& state, const Slope& slope, const LatticeVector& second,
                            const Rational& s) {
  ShortCurveState out = state;
  const long n = state.first_convergent.n;
  std::vector<LatticeVector> family = second_shortest_candidates(slope, n);
  out.second_vector = LatticeVector::canonical(second.q, second.p);
  out.second_coefficient = -1;
  for (std::size_t a = 0; a < family.size(); ++a) {
    if (family[a] == out.second_vector) out.second_coefficient = static_cast<long>(a);
  }
  out.second_is_convergent = out.second_coefficient == 0 ||
                             out.second_coefficient + 1 == static_cast<long>(family.size()) ||
                             out.second_vector == LatticeVector::of(slope.convergent(n + 1)) ||
                             out.second_vector == LatticeVector::of(slope.convergent(n - 1));
  out.second = sheet_curve_lengths(slope.theta(), state.sheet, out.second_vector, s, state.t);
  return out;
}

namespace {

void require_same_sheet(const ShortCurveState& state, const CurveId& target) {
  if (target.kind != CurveId::Kind::sheet_curve || target.sheet != state.sheet) {
    throw Unsupported("target " + target.to_string() + " is not a curve on sheet " + std::to_string(state.sheet));
  }
}

Interval as_interval(const mpz_class& n, int bits) { return Interval::integer(n, bits); }

}  // namespace

Interval curve_length_upper(const ShortCurveState& state, const CurveId& target) {
  require_same_sheet(state, target);
  const int bits = std::max(state.first.hyp.bits(), state.second.hyp.bits());
  Interval i_first = as_interval(intersection_number(state.first.curve, target), bits);
  Interval i_second = as_interval(intersection_number(state.second.curve, target), bits);
  return Interval::point(state.first.hyp.hi()) * i_second + Interval::point(state.second.hyp.hi()) * i_first;
}

Interval collar_crossing_bound(const LengthInterval& beta, const CurveId& target) {
  Interval w = collar_width(Interval::point(beta.hyp.hi()));
  const int bits = w.bits();
  return Interval::integer(2, bits) * w * as_interval(intersection_number(beta.curve, target), bits);
}

Interval curve_length_lower(const ShortCurveState& state, const CurveId& target) {
  require_same_sheet(state, target);
  Interval a = collar_crossing_bound(state.first, target);
  Interval b = collar_crossing_bound(state.second, target);
  return b.lo() > a.lo() ? b : a;
}

Interval minsky_intersection_bound(const Interval& a_ext, const Interval& b_ext) {
  if (!a_ext.positive() || !b_ext.positive()) throw DomainError("extremal lengths must be positive");
  return sqrt(Interval::point(a_ext.hi()) * Interval::point(b_ext.hi()));
}

Interval crossing_arc_bound(const Interval& mod_bound, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!mod_bound.positive()) throw DomainError("modulus bound must be positive");
  const int bits = mod_bound.bits();
  Interval u = log(recip(Interval::exact(delta, bits))) / (Interval::integer(2, bits) * mod_bound);
  Interval half_pi = Interval::pi(bits) * Interval::exact(0.5, bits);
  if (!u.certainly_less(half_pi)) throw DomainError("log(1/delta)/(2 mod) = " + u.to_string(8) + " is not below pi/2");
  Interval c = cos(u);
  Interval one = Interval::integer(1, bits);
  return log((one + c) / (one - c));
}

}  // namespace teichflow
