#pragma once

// Self-validating interval arithmetic on top of MPFR.
//
// Every endpoint is rounded outward (lower endpoints toward -inf, upper
// endpoints toward +inf), so an Interval produced by any operation below
// encloses the exact real result of applying the operation to any point
// of its operands. Operations never widen silently across a domain
// boundary: a divisor containing zero or a log/sqrt argument that is not
// strictly positive raises DomainError.

#include <mpfr.h>
#include <gmpxx.h>

#include <compare>
#include <functional>
#include <string>

namespace teichflow {

/// Working precision of a computation.
struct Precision {
  int bits = 256;              ///< MPFR mantissa width, at least 64.
  double target_width = 1e-30; ///< refinement goal for enclosures of θ.

  void validate() const;

  /// Doubled mantissa and a target width shrunk by the old mantissa width.
  Precision refined() const;

  /// `fallback` with its bits replaced by $TEICHFLOW_BITS when that is set.
  static Precision from_env(Precision fallback);
  static Precision from_env();

  bool operator==(const Precision&) const = default;
};

/// RAII owner of one mpfr_t.
class Real {
 public:
  explicit Real(mpfr_prec_t bits = 256);
  /// Exact conversion; `bits` must be at least 53.
  Real(double value, mpfr_prec_t bits);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }
  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  int sign() const { return mpfr_sgn(value_); }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  bool is_nan() const { return mpfr_nan_p(value_) != 0; }

  /// Decimal rendering with `digits` significant digits, rounded per `rnd`.
  std::string to_string(int digits = 20, mpfr_rnd_t rnd = MPFR_RNDN) const;

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

 private:
  mpfr_t value_;
};

/// Closed interval [lo, hi] with MPFR endpoints; lo <= hi always holds.
class Interval {
 public:
  /// The degenerate interval [0, 0] at 64 bits.
  Interval();
  /// Throws DomainError unless lo <= hi and neither endpoint is NaN.
  Interval(Real lo, Real hi);

  static Interval point(const Real& value);
  static Interval integer(long value, int bits);
  static Interval integer(const mpz_class& value, int bits);
  static Interval rational(const mpz_class& num, const mpz_class& den, int bits);
  /// Exact enclosure of a binary64 value.
  static Interval exact(double value, int bits);
  static Interval pi(int bits);
  static Interval hull(const Interval& a, const Interval& b);

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  int bits() const;

  double lo_down() const { return lo_.to_double(MPFR_RNDD); }
  double hi_up() const { return hi_.to_double(MPFR_RNDU); }
  /// Nearest double to the exact midpoint.
  double mid() const;
  Real mid_real() const;
  /// hi - lo rounded up.
  Real width() const;
  double width_up() const { return width().to_double(MPFR_RNDU); }

  bool contains(double x) const;
  bool contains(const Real& x) const;
  bool contains(const Interval& inner) const;
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool positive() const { return lo_.sign() > 0; }
  bool negative() const { return hi_.sign() < 0; }
  /// Every point of *this is below every point of `other`.
  bool certainly_less(const Interval& other) const { return hi_ < other.lo_; }
  bool overlaps(const Interval& other) const { return !(hi_ < other.lo_) && !(other.hi_ < lo_); }
  /// Throws DomainError when the intervals are disjoint.
  Interval intersect(const Interval& other) const;
  /// Same interval carried at `bits`, rounding outward when narrowing.
  Interval with_bits(int bits) const;

  std::string to_string(int digits = 17) const;

  /// Endpoint-wise identity, used by determinism checks.
  friend bool operator==(const Interval& a, const Interval& b) { return a.lo_ == b.lo_ && a.hi_ == b.hi_; }

 private:
  Real lo_;
  Real hi_;
};

Interval operator-(const Interval& x);
Interval operator+(const Interval& x, const Interval& y);
Interval operator-(const Interval& x, const Interval& y);
Interval operator*(const Interval& x, const Interval& y);
Interval operator/(const Interval& x, const Interval& y);

Interval sqr(const Interval& x);
Interval abs(const Interval& x);
Interval recip(const Interval& x);
Interval sqrt(const Interval& x);
Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval sinh(const Interval& x);
Interval asinh(const Interval& x);
Interval cos(const Interval& x);
Interval acos(const Interval& x);

enum class ArithOp { add, sub, mul, div, exp, log, sqrt, sinh, asinh, cos, acos };

/// Tag-dispatched form of the operators above; unary ops ignore `y`.
Interval interval_arith(const Interval& x, const Interval& y, ArithOp op);

using IntervalFunction = std::function<Interval(const Interval&)>;

/// Certified bisection for a monotone function given by an interval
/// extension. The bracket must show a certified sign change (f(lo) <= 0 <=
/// f(hi) or the reverse); otherwise NoSignChange. The result contains the
/// root, has width <= tol, and its endpoints keep the sign-change property.
/// Throws InsufficientPrecision when the working precision cannot separate
/// the root to within `tol`.
Interval bisect_root(const IntervalFunction& f, const Real& lo, const Real& hi, double tol);
Interval bisect_root(const IntervalFunction& f, double lo, double hi, double tol, int bits = 256);

}  // namespace teichflow
