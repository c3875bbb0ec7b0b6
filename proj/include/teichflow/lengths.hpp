#pragma once

// Extremal and hyperbolic length enclosures on the slit surface.
//
// For a sheet curve with flat vector v and slit u = (0, s e^{-t/2}):
//
//   l_t²(v) / (1 + (π+2) s² e^{-t})  <=  Ext_t(v)  <=  l_t²(v) / (1 - |u × v|)
//
// (the lower bound comes from a stadium of area (π+2)s²e^{-t} around the
// slit, the upper from the cylinder of curves parallel to v that miss it),
// and every simple closed curve satisfies 2 e^{-ℓ/2} <= ℓ / Ext <= π.

#include <gmpxx.h>

#include <string>

#include "teichflow/contfrac.hpp"
#include "teichflow/flow.hpp"
#include "teichflow/numerics.hpp"
#include "teichflow/surface.hpp"

namespace teichflow {

/// Lower extremal-length bound.
Interval ext_lower(const Interval& theta, const LatticeVector& v, const Rational& s, const FlowTime& t);
/// Upper extremal-length bound, 1 / modulus of short_curve_cylinder.
Interval ext_upper(const Interval& theta, const LatticeVector& v, const Rational& s, const FlowTime& t);

/// Hyperbolic length from extremal length: [root of ℓ = 2 ext.lo e^{-ℓ/2}, π ext.hi].
Interval hyp_from_ext(const Interval& ext);

/// asinh(1 / sinh(ℓ/2)), the half-width of the standard collar.
Interval collar_width(const Interval& hyp);

struct LengthInterval {
  CurveId curve;
  Interval flat_sq;
  Interval ext;
  Interval hyp;
  std::string method;
};

/// All three enclosures for a sheet curve.
LengthInterval sheet_curve_lengths(const Interval& theta, int sheet, const LatticeVector& v, const Rational& s,
                                   const FlowTime& t);

/// The two flat-shortest curves of one sheet at time t.
struct ShortCurveState {
  int sheet = 1;
  FlowTime t = FlowTime::generic(0.0);
  Convergent first_convergent;
  LengthInterval first;
  LatticeVector second_vector;
  /// a in v_{n-1} + a v_n, or -1 for a curve outside that family.
  long second_coefficient = 0;
  /// The second curve is one of the neighbouring convergents.
  bool second_is_convergent = false;
  /// The second curve was picked from candidates tied at every precision tried.
  bool second_tied = false;
  LengthInterval second;
};

/// Predicted short curves of `slope` at t.
ShortCurveState short_curve_state(const Slope& slope, int sheet, const Rational& s, const FlowTime& t);
/// The same state with the second curve replaced by `second`.
ShortCurveState with_second(const ShortCurveState& state, const Slope& slope, const LatticeVector& second,
                            const Rational& s);

/// Upper bound for a same-sheet target by homotoping it across the two
/// short curves: first.hyp.hi · i(second, target) + second.hyp.hi · i(first, target).
Interval curve_length_upper(const ShortCurveState& state, const CurveId& target);
/// Collar lower bound 2 w(β) i(β, target); β runs over both short curves
/// and the larger bound is returned.
Interval curve_length_lower(const ShortCurveState& state, const CurveId& target);
/// The collar bound for one short curve alone.
Interval collar_crossing_bound(const LengthInterval& beta, const CurveId& target);

/// sqrt(a.hi · b.hi), an upper bound on i(α, β)² <= Ext(α) Ext(β).
Interval minsky_intersection_bound(const Interval& a_ext, const Interval& b_ext);

/// log((1 + cos u) / (1 - cos u)) with u = log(1/δ) / (2 · mod). An
/// order-of-magnitude estimate, not a certified bound.
Interval crossing_arc_bound(const Interval& mod_bound, double delta = 0.1);

}  // namespace teichflow
