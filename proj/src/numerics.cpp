#include "teichflow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "teichflow/errors.hpp"

namespace teichflow {

// ---------------------------------------------------------------------------
// Precision

void Precision::validate() const {
  if (bits < 64) throw ConfigError("precision must be at least 64 bits, got " + std::to_string(bits));
  if (!(target_width > 0.0)) throw ConfigError("target width must be positive");
}

Precision Precision::refined() const {
  Precision next = *this;
  next.bits = bits * 2;
  next.target_width = std::max(std::ldexp(target_width, -bits), std::numeric_limits<double>::min());
  return next;
}

Precision Precision::from_env(Precision fallback) {
  if (const char* env = std::getenv("TEICHFLOW_BITS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    long bits = std::strtol(env, &end, 10);
    if (end == env || *end != '\0') throw ConfigError(std::string("TEICHFLOW_BITS is not an integer: ") + env);
    fallback.bits = static_cast<int>(bits);
  }
  fallback.validate();
  return fallback;
}

Precision Precision::from_env() { return from_env(Precision{}); }

// ---------------------------------------------------------------------------
// Real

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(double value, mpfr_prec_t bits) {
  mpfr_init2(value_, std::max<mpfr_prec_t>(bits, 53));
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  value_[0] = other.value_[0];
  mpfr_init2(other.value_, MPFR_PREC_MIN);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

std::string Real::to_string(int digits, mpfr_rnd_t rnd) const {
  if (is_nan()) return "nan";
  if (mpfr_inf_p(value_)) return sign() > 0 ? "inf" : "-inf";
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  const std::string fmt = "%." + std::to_string(digits) + "R" + (rnd == MPFR_RNDD ? "D" : rnd == MPFR_RNDU ? "U" : "N") + "g";
  int n = mpfr_snprintf(buf.data(), buf.size(), fmt.c_str(), value_);
  if (n >= static_cast<int>(buf.size())) {
    buf.resize(static_cast<std::size_t>(n) + 1);
    mpfr_snprintf(buf.data(), buf.size(), fmt.c_str(), value_);
  }
  return std::string(buf.data());
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (a.is_nan() || b.is_nan()) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

// ---------------------------------------------------------------------------
// Interval

namespace {

int max_bits(const Interval& x, const Interval& y) { return std::max(x.bits(), y.bits()); }

using Unary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
using Binary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

Real apply(Unary fn, const Real& a, int bits, mpfr_rnd_t rnd) {
  Real r(bits);
  fn(r.raw(), a.raw(), rnd);
  return r;
}

Real apply(Binary fn, const Real& a, const Real& b, int bits, mpfr_rnd_t rnd) {
  Real r(bits);
  fn(r.raw(), a.raw(), b.raw(), rnd);
  return r;
}

// Image of an increasing function.
Interval increasing(Unary fn, const Interval& x) {
  return Interval(apply(fn, x.lo(), x.bits(), MPFR_RNDD), apply(fn, x.hi(), x.bits(), MPFR_RNDU));
}

const Real& min_of(const Real& a, const Real& b) { return b < a ? b : a; }
const Real& max_of(const Real& a, const Real& b) { return a < b ? b : a; }

}  // namespace

Interval::Interval() : lo_(64), hi_(64) {}

Interval::Interval(Real lo, Real hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.is_nan() || hi_.is_nan()) throw DomainError("interval endpoint is NaN");
  if (hi_ < lo_) throw DomainError("interval with lo > hi: [" + lo_.to_string() + ", " + hi_.to_string() + "]");
}

int Interval::bits() const { return static_cast<int>(std::max(lo_.bits(), hi_.bits())); }

Interval Interval::point(const Real& value) { return Interval(value, value); }

Interval Interval::integer(long value, int bits) {
  Real lo(bits), hi(bits);
  mpfr_set_si(lo.raw(), value, MPFR_RNDD);
  mpfr_set_si(hi.raw(), value, MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval Interval::integer(const mpz_class& value, int bits) {
  Real lo(bits), hi(bits);
  mpfr_set_z(lo.raw(), value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi.raw(), value.get_mpz_t(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval Interval::rational(const mpz_class& num, const mpz_class& den, int bits) {
  if (den == 0) throw DomainError("rational with zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  Real lo(bits), hi(bits);
  mpfr_set_q(lo.raw(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.raw(), q.get_mpq_t(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval Interval::exact(double value, int bits) {
  if (std::isnan(value)) throw DomainError("NaN is not an interval");
  Real r(value, std::max(bits, 53));
  return Interval(r, r);
}

Interval Interval::pi(int bits) {
  Real lo(bits), hi(bits);
  mpfr_const_pi(lo.raw(), MPFR_RNDD);
  mpfr_const_pi(hi.raw(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  int bits = max_bits(a, b);
  Real lo(bits), hi(bits);
  mpfr_min(lo.raw(), a.lo().raw(), b.lo().raw(), MPFR_RNDD);
  mpfr_max(hi.raw(), a.hi().raw(), b.hi().raw(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Real Interval::mid_real() const {
  Real m(bits() + 1);
  mpfr_add(m.raw(), lo_.raw(), hi_.raw(), MPFR_RNDN);
  mpfr_div_2ui(m.raw(), m.raw(), 1, MPFR_RNDN);
  return m;
}

double Interval::mid() const { return mid_real().to_double(MPFR_RNDN); }

Real Interval::width() const {
  Real w(bits());
  mpfr_sub(w.raw(), hi_.raw(), lo_.raw(), MPFR_RNDU);
  return w;
}

bool Interval::contains(double x) const {
  return mpfr_cmp_d(lo_.raw(), x) <= 0 && mpfr_cmp_d(hi_.raw(), x) >= 0;
}

bool Interval::contains(const Real& x) const { return lo_ <= x && x <= hi_; }

bool Interval::contains(const Interval& inner) const { return lo_ <= inner.lo_ && inner.hi_ <= hi_; }

Interval Interval::intersect(const Interval& other) const {
  if (!overlaps(other)) throw DomainError("intersection of disjoint intervals");
  return Interval(max_of(lo_, other.lo_), min_of(hi_, other.hi_));
}

Interval Interval::with_bits(int bits) const {
  Real lo(bits), hi(bits);
  mpfr_set(lo.raw(), lo_.raw(), MPFR_RNDD);
  mpfr_set(hi.raw(), hi_.raw(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

std::string Interval::to_string(int digits) const {
  return "[" + lo_.to_string(digits, MPFR_RNDD) + ", " + hi_.to_string(digits, MPFR_RNDU) + "]";
}

// ---------------------------------------------------------------------------
// Arithmetic

Interval operator-(const Interval& x) {
  Real lo(x.bits()), hi(x.bits());
  mpfr_neg(lo.raw(), x.hi().raw(), MPFR_RNDD);
  mpfr_neg(hi.raw(), x.lo().raw(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator+(const Interval& x, const Interval& y) {
  int bits = max_bits(x, y);
  return Interval(apply(mpfr_add, x.lo(), y.lo(), bits, MPFR_RNDD), apply(mpfr_add, x.hi(), y.hi(), bits, MPFR_RNDU));
}

Interval operator-(const Interval& x, const Interval& y) {
  int bits = max_bits(x, y);
  return Interval(apply(mpfr_sub, x.lo(), y.hi(), bits, MPFR_RNDD), apply(mpfr_sub, x.hi(), y.lo(), bits, MPFR_RNDU));
}

Interval operator*(const Interval& x, const Interval& y) {
  int bits = max_bits(x, y);
  if (x.lo().sign() >= 0 && y.lo().sign() >= 0) {
    return Interval(apply(mpfr_mul, x.lo(), y.lo(), bits, MPFR_RNDD), apply(mpfr_mul, x.hi(), y.hi(), bits, MPFR_RNDU));
  }
  const Real* xs[2] = {&x.lo(), &x.hi()};
  const Real* ys[2] = {&y.lo(), &y.hi()};
  Real lo(bits), hi(bits);
  mpfr_set_inf(lo.raw(), 1);
  mpfr_set_inf(hi.raw(), -1);
  Real tmp(bits);
  for (const Real* a : xs) {
    for (const Real* b : ys) {
      mpfr_mul(tmp.raw(), a->raw(), b->raw(), MPFR_RNDD);
      if (tmp.is_nan()) mpfr_set_zero(tmp.raw(), 1);  // 0 * inf
      if (tmp < lo) lo = tmp;
      mpfr_mul(tmp.raw(), a->raw(), b->raw(), MPFR_RNDU);
      if (tmp.is_nan()) mpfr_set_zero(tmp.raw(), 1);
      if (hi < tmp) hi = tmp;
    }
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval recip(const Interval& x) {
  if (x.contains_zero()) throw DomainError("division by an interval containing 0: " + x.to_string());
  int bits = x.bits();
  Real lo(bits), hi(bits);
  mpfr_ui_div(lo.raw(), 1, x.hi().raw(), MPFR_RNDD);
  mpfr_ui_div(hi.raw(), 1, x.lo().raw(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator/(const Interval& x, const Interval& y) {
  if (y.contains_zero()) throw DomainError("division by an interval containing 0: " + y.to_string());
  int bits = max_bits(x, y);
  if (x.lo().sign() >= 0 && y.lo().sign() > 0) {
    return Interval(apply(mpfr_div, x.lo(), y.hi(), bits, MPFR_RNDD), apply(mpfr_div, x.hi(), y.lo(), bits, MPFR_RNDU));
  }
  const Real* xs[2] = {&x.lo(), &x.hi()};
  const Real* ys[2] = {&y.lo(), &y.hi()};
  Real lo(bits), hi(bits);
  mpfr_set_inf(lo.raw(), 1);
  mpfr_set_inf(hi.raw(), -1);
  Real tmp(bits);
  for (const Real* a : xs) {
    for (const Real* b : ys) {
      mpfr_div(tmp.raw(), a->raw(), b->raw(), MPFR_RNDD);
      if (tmp < lo) lo = tmp;
      mpfr_div(tmp.raw(), a->raw(), b->raw(), MPFR_RNDU);
      if (hi < tmp) hi = tmp;
    }
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval sqr(const Interval& x) {
  int bits = x.bits();
  if (x.lo().sign() >= 0) return Interval(apply(mpfr_sqr, x.lo(), bits, MPFR_RNDD), apply(mpfr_sqr, x.hi(), bits, MPFR_RNDU));
  if (x.hi().sign() <= 0) return Interval(apply(mpfr_sqr, x.hi(), bits, MPFR_RNDD), apply(mpfr_sqr, x.lo(), bits, MPFR_RNDU));
  Real a = apply(mpfr_sqr, x.lo(), bits, MPFR_RNDU);
  Real b = apply(mpfr_sqr, x.hi(), bits, MPFR_RNDU);
  return Interval(Real(bits), max_of(a, b));
}

Interval abs(const Interval& x) {
  if (x.lo().sign() >= 0) return x;
  if (x.hi().sign() <= 0) return -x;
  Real m(x.bits());
  mpfr_neg(m.raw(), x.lo().raw(), MPFR_RNDU);
  return Interval(Real(x.bits()), max_of(m, x.hi()));
}

Interval sqrt(const Interval& x) {
  if (!x.positive()) throw DomainError("sqrt of a non-positive interval: " + x.to_string());
  return increasing(mpfr_sqrt, x);
}

Interval exp(const Interval& x) { return increasing(mpfr_exp, x); }

Interval log(const Interval& x) {
  if (!x.positive()) throw DomainError("log of a non-positive interval: " + x.to_string());
  return increasing(mpfr_log, x);
}

Interval sinh(const Interval& x) { return increasing(mpfr_sinh, x); }

Interval asinh(const Interval& x) { return increasing(mpfr_asinh, x); }

Interval cos(const Interval& x) {
  const int bits = x.bits();
  const Interval pi = Interval::pi(bits);
  Interval minus_one = Interval::integer(-1, bits);
  Interval one = Interval::integer(1, bits);
  Interval full(minus_one.lo(), one.hi());
  if (!x.lo().is_finite() || !x.hi().is_finite()) return full;
  if (!(x.width() < (pi + pi).lo())) return full;
  if (std::fabs(x.lo().to_double()) > 1e15) return full;

  Real a_lo = apply(mpfr_cos, x.lo(), bits, MPFR_RNDD);
  Real a_hi = apply(mpfr_cos, x.lo(), bits, MPFR_RNDU);
  Real b_lo = apply(mpfr_cos, x.hi(), bits, MPFR_RNDD);
  Real b_hi = apply(mpfr_cos, x.hi(), bits, MPFR_RNDU);
  Real lo = min_of(a_lo, b_lo);
  Real hi = max_of(a_hi, b_hi);

  // Interior extrema sit at multiples of π; include every one that the
  // enclosure of mπ cannot rule out.
  const long first = static_cast<long>(std::floor(x.lo().to_double() / M_PI)) - 1;
  const long last = static_cast<long>(std::ceil(x.hi().to_double() / M_PI)) + 1;
  for (long m = first; m <= last; ++m) {
    Interval mpi = Interval::integer(m, bits) * pi;
    if (!mpi.overlaps(x)) continue;
    if (m % 2 == 0) hi = one.hi();
    else lo = minus_one.lo();
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval acos(const Interval& x) {
  if (mpfr_cmp_si(x.lo().raw(), -1) < 0 || mpfr_cmp_si(x.hi().raw(), 1) > 0) {
    throw DomainError("acos outside [-1, 1]: " + x.to_string());
  }
  const int bits = x.bits();
  return Interval(apply(mpfr_acos, x.hi(), bits, MPFR_RNDD), apply(mpfr_acos, x.lo(), bits, MPFR_RNDU));
}

Interval interval_arith(const Interval& x, const Interval& y, ArithOp op) {
  switch (op) {
    case ArithOp::add: return x + y;
    case ArithOp::sub: return x - y;
    case ArithOp::mul: return x * y;
    case ArithOp::div: return x / y;
    case ArithOp::exp: return exp(x);
    case ArithOp::log: return log(x);
    case ArithOp::sqrt: return sqrt(x);
    case ArithOp::sinh: return sinh(x);
    case ArithOp::asinh: return asinh(x);
    case ArithOp::cos: return cos(x);
    case ArithOp::acos: return acos(x);
  }
  throw Unsupported("unknown interval operator");
}

// ---------------------------------------------------------------------------
// Root finding

namespace {

enum class Sign { nonpositive, nonnegative, unknown };

Sign certified_sign(const Interval& v) {
  if (v.hi().sign() <= 0) return Sign::nonpositive;
  if (v.lo().sign() >= 0) return Sign::nonnegative;
  return Sign::unknown;
}

Real midpoint(const Real& a, const Real& b, int bits) {
  Real m(bits);
  mpfr_add(m.raw(), a.raw(), b.raw(), MPFR_RNDN);
  mpfr_div_2ui(m.raw(), m.raw(), 1, MPFR_RNDN);
  return m;
}

}  // namespace

Interval bisect_root(const IntervalFunction& f, const Real& lo_in, const Real& hi_in, double tol) {
  if (!(tol > 0.0)) throw DomainError("bisect_root tolerance must be positive");
  if (hi_in < lo_in) throw DomainError("bisect_root bracket is reversed");
  const int bits = static_cast<int>(std::max(lo_in.bits(), hi_in.bits()));

  // Orient so that `neg` is the side where f is certainly <= 0.
  Sign s_lo = certified_sign(f(Interval::point(lo_in)));
  Sign s_hi = certified_sign(f(Interval::point(hi_in)));
  bool increasing_f;
  if (s_lo == Sign::nonpositive && s_hi == Sign::nonnegative) {
    increasing_f = true;
  } else if (s_lo == Sign::nonnegative && s_hi == Sign::nonpositive) {
    increasing_f = false;
  } else {
    throw NoSignChange("no certified sign change on [" + lo_in.to_string() + ", " + hi_in.to_string() + "]");
  }
  const Sign left_sign = increasing_f ? Sign::nonpositive : Sign::nonnegative;
  const Sign right_sign = increasing_f ? Sign::nonnegative : Sign::nonpositive;

  Real lo = lo_in;
  Real hi = hi_in;
  Real width(bits);
  auto width_ok = [&] {
    mpfr_sub(width.raw(), hi.raw(), lo.raw(), MPFR_RNDU);
    return mpfr_cmp_d(width.raw(), tol) <= 0;
  };

  while (!width_ok()) {
    Real mid = midpoint(lo, hi, bits);
    if (!(lo < mid) || !(mid < hi)) break;  // no representable interior point left
    Sign s = certified_sign(f(Interval::point(mid)));
    if (s == left_sign) {
      lo = std::move(mid);
    } else if (s == right_sign) {
      hi = std::move(mid);
    } else {
      // The enclosure of f(mid) straddles zero: tighten each side separately
      // toward mid and stop.
      Real inner = mid;
      for (int i = 0; i < 4 * bits; ++i) {
        Real m = midpoint(lo, inner, bits);
        if (!(lo < m) || !(m < inner)) break;
        if (certified_sign(f(Interval::point(m))) == left_sign) lo = std::move(m);
        else inner = std::move(m);
      }
      inner = mid;
      for (int i = 0; i < 4 * bits; ++i) {
        Real m = midpoint(inner, hi, bits);
        if (!(inner < m) || !(m < hi)) break;
        if (certified_sign(f(Interval::point(m))) == right_sign) hi = std::move(m);
        else inner = std::move(m);
      }
      break;
    }
  }
  if (!width_ok()) {
    throw InsufficientPrecision("bisect_root cannot reach width " + std::to_string(tol) + " at " + std::to_string(bits) + " bits");
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval bisect_root(const IntervalFunction& f, double lo, double hi, double tol, int bits) {
  return bisect_root(f, Real(lo, bits), Real(hi, bits), tol);
}

}  // namespace teichflow
