#pragma once

// Genus-2 surface made of two unit tori S_1, S_2 (lattice Z² rotated so the
// slope θ_j direction is vertical), each cut along a vertical slit of flat
// length s·e^{-t/2} and glued crosswise along the slits. The union of the
// two slits is the separating curve σ.

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "teichflow/contfrac.hpp"
#include "teichflow/flow.hpp"
#include "teichflow/numerics.hpp"

namespace teichflow {

/// Positive rational in lowest terms.
struct Rational {
  mpz_class num = 1;
  mpz_class den = 2;

  /// "n/d" or an integer; throws ConfigError.
  static Rational parse(std::string_view text);
  Interval to_interval(int bits) const { return Interval::rational(num, den, bits); }
  double to_double() const { return mpq_class(num, den).get_d(); }
  std::string to_string() const { return num.get_str() + "/" + den.get_str(); }

  bool operator==(const Rational&) const = default;
};

struct SlitSurfaceConfig {
  ContinuedFraction theta1;
  ContinuedFraction theta2;
  Rational s;

  /// Throws ConfigError unless 0 < s < 1.
  void validate() const;
  const ContinuedFraction& slope(int sheet) const;
};

/// A curve class on the slit surface.
struct CurveId {
  enum class Kind { sheet_curve, sigma, gamma };

  Kind kind = Kind::sigma;
  int sheet = 0;         ///< 1 or 2 for sheet curves
  LatticeVector vector;  ///< canonical and primitive for sheet curves

  /// Throws DomainError for a zero or non-primitive vector or a bad sheet.
  static CurveId sheet_curve(int sheet, const LatticeVector& v);
  static CurveId sigma() { return {}; }
  static CurveId gamma() { return {Kind::gamma, 0, {}}; }
  /// The (1, 0)-curve of sheet j.
  static CurveId alpha(int sheet) { return sheet_curve(sheet, {1, 0}); }

  std::string to_string() const;
  bool operator==(const CurveId&) const = default;
};

/// Geometric intersection number for the enumerated pairs: same-sheet
/// curves |q_a p_b - p_a q_b|; different sheets 0; sheet curve and σ 0;
/// γ and σ 2; γ and a sheet curve v of sheet j the count i(α_j, v) + 1 (an
/// upper count: one arc parallel to α_j plus one slit crossing per sheet).
/// Throws Unsupported for non-primitive sheet vectors.
mpz_class intersection_number(const CurveId& a, const CurveId& b);

/// The slit (0, s e^{-t/2}).
FlatVector slit_vector(const Rational& s, const FlowTime& t);
/// l_t(σ) = 2 s e^{-t/2}.
Interval sigma_flat_length(const Rational& s, const FlowTime& t);

struct CylinderEstimate {
  Interval slit_cross;  ///< |u × v| for the slit u and the curve's flat vector v
  Interval area;        ///< 1 - |u × v|
  Interval length;      ///< flat length of the core curve
  Interval modulus;     ///< area / length²
};

/// The widest cylinder of curves parallel to v that avoids the slit.
/// Throws DomainError when |u × v| >= 1.
CylinderEstimate short_curve_cylinder(const Interval& theta, const LatticeVector& v, const Rational& s,
                                      const FlowTime& t);
inline CylinderEstimate short_curve_cylinder(const Interval& theta, const Convergent& c, const Rational& s,
                                             const FlowTime& t) {
  return short_curve_cylinder(theta, LatticeVector::of(c), s, t);
}

/// (log(4 R1 R2 / s²) + t + 1) / 2, an upper bound on the modulus of the
/// largest annulus around σ. Throws DomainError unless R_j > s e^{-t/2}/2.
Interval annulus_modulus_bound(const SlitSurfaceConfig& cfg, const FlowTime& t, const Interval& R1,
                               const Interval& R2);

}  // namespace teichflow
