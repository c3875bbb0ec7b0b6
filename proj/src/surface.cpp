#include "teichflow/surface.hpp"

#include <cctype>

#include "teichflow/errors.hpp"

namespace teichflow {

Rational Rational::parse(std::string_view text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  }
  auto parse_int = [&](const std::string& part) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("bad rational '" + std::string(text) + "'");
    }
    return mpz_class(part);
  };
  Rational r;
  std::size_t slash = t.find('/');
  if (slash == std::string::npos) {
    r.num = parse_int(t);
    r.den = 1;
  } else {
    r.num = parse_int(t.substr(0, slash));
    r.den = parse_int(t.substr(slash + 1));
  }
  if (r.den == 0) throw ConfigError("rational '" + std::string(text) + "' has zero denominator");
  mpq_class q(r.num, r.den);
  q.canonicalize();
  r.num = q.get_num();
  r.den = q.get_den();
  return r;
}

void SlitSurfaceConfig::validate() const {
  if (!(s.num > 0 && s.num < s.den)) throw ConfigError("slit length s must satisfy 0 < s < 1, got " + s.to_string());
}

const ContinuedFraction& SlitSurfaceConfig::slope(int sheet) const {
  if (sheet == 1) return theta1;
  if (sheet == 2) return theta2;
  throw DomainError("sheet must be 1 or 2");
}

CurveId CurveId::sheet_curve(int sheet, const LatticeVector& v) {
  if (sheet != 1 && sheet != 2) throw DomainError("sheet must be 1 or 2");
  LatticeVector c = LatticeVector::canonical(v.q, v.p);
  if (c.is_zero() || !c.primitive()) throw DomainError("sheet curve " + v.to_string() + " is not primitive");
  return {Kind::sheet_curve, sheet, c};
}

std::string CurveId::to_string() const {
  switch (kind) {
    case Kind::sheet_curve: return "S" + std::to_string(sheet) + vector.to_string();
    case Kind::sigma: return "sigma";
    case Kind::gamma: return "gamma";
  }
  return "?";
}

mpz_class intersection_number(const CurveId& a, const CurveId& b) {
  using K = CurveId::Kind;
  for (const CurveId* c : {&a, &b}) {
    if (c->kind == K::sheet_curve && (c->vector.is_zero() || !c->vector.primitive())) {
      throw Unsupported("intersection with non-primitive vector " + c->vector.to_string());
    }
  }
  if (a.kind == K::sheet_curve && b.kind == K::sheet_curve) {
    if (a.sheet != b.sheet) return 0;
    mpz_class det = a.vector.q * b.vector.p - a.vector.p * b.vector.q;
    return abs(det);
  }
  if (a.kind == b.kind) return 0;
  if (a.kind == K::sigma || b.kind == K::sigma) {
    const CurveId& other = a.kind == K::sigma ? b : a;
    return other.kind == K::gamma ? 2 : 0;
  }
  // γ against a sheet curve.
  const CurveId& curve = a.kind == K::gamma ? b : a;
  return intersection_number(CurveId::alpha(curve.sheet), curve) + 1;
}

namespace {

Interval contraction(const FlowTime& t) {
  const int bits = t.value().bits();
  return exp(-(t.value() * Interval::exact(0.5, bits)));
}

}  // namespace

FlatVector slit_vector(const Rational& s, const FlowTime& t) {
  const int bits = t.value().bits();
  return {Interval::integer(0, bits), s.to_interval(bits) * contraction(t)};
}

Interval sigma_flat_length(const Rational& s, const FlowTime& t) {
  const int bits = t.value().bits();
  return Interval::integer(2, bits) * s.to_interval(bits) * contraction(t);
}

CylinderEstimate short_curve_cylinder(const Interval& theta, const LatticeVector& v, const Rational& s,
                                      const FlowTime& t) {
  FlatVector u = slit_vector(s, t);
  FlatVector w = flow_image(theta, v, t);
  Interval cross = abs(u.x * w.y - u.y * w.x);
  const int bits = cross.bits();
  Interval area = Interval::integer(1, bits) - cross;
  if (!area.positive()) throw DomainError("slit is not avoided by curves parallel to " + v.to_string());
  Interval length_sq = flat_length_sq(theta, v, t);
  return {cross, area, sqrt(length_sq), area / length_sq};
}

Interval annulus_modulus_bound(const SlitSurfaceConfig& cfg, const FlowTime& t, const Interval& R1,
                               const Interval& R2) {
  const int bits = std::max({t.value().bits(), R1.bits(), R2.bits()});
  Interval s = cfg.s.to_interval(bits);
  Interval r = s * contraction(t.at(Precision{bits})) * Interval::exact(0.5, bits);
  if (!r.certainly_less(R1) || !r.certainly_less(R2)) {
    throw DomainError("annulus radii must exceed s e^{-t/2}/2 = " + r.to_string(8));
  }
  Interval inner = Interval::integer(4, bits) * R1 * R2 / sqr(s);
  return (log(inner) + t.value() + Interval::integer(1, bits)) * Interval::exact(0.5, bits);
}

}  // namespace teichflow
