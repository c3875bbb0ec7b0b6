#include "teichflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "teichflow/errors.hpp"

namespace teichflow {

// ---------------------------------------------------------------------------
// LatticeVector

LatticeVector LatticeVector::canonical(mpz_class q, mpz_class p) {
  if (q < 0 || (q == 0 && p < 0)) {
    q = -q;
    p = -p;
  }
  return {std::move(q), std::move(p)};
}

bool LatticeVector::primitive() const {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  return g == 1;
}

std::string LatticeVector::to_string() const { return "(" + q.get_str() + "," + p.get_str() + ")"; }

bool LatticeVector::operator<(const LatticeVector& other) const {
  if (q != other.q) return q < other.q;
  return p < other.p;
}

// ---------------------------------------------------------------------------
// FlowTime

const char* to_string(TimeTag tag) {
  switch (tag) {
    case TimeTag::generic: return "generic";
    case TimeTag::min_time: return "T_n";
    case TimeTag::even: return "even";
    case TimeTag::odd: return "odd";
  }
  return "?";
}

FlowTime::FlowTime(Interval value, TimeTag tag, long index, Evaluator evaluator)
    : value_(std::move(value)), tag_(tag), index_(index), evaluator_(std::move(evaluator)) {}

FlowTime FlowTime::generic(double t, int bits) {
  if (!std::isfinite(t)) throw DomainError("flow time must be finite");
  return generic(Interval::exact(t, bits));
}

FlowTime FlowTime::generic(Interval t) { return FlowTime(std::move(t), TimeTag::generic, -1, nullptr); }

FlowTime FlowTime::at(const Precision& prec) const {
  if (evaluator_) return FlowTime(evaluator_(prec), tag_, index_, evaluator_);
  return FlowTime(value_.with_bits(std::max(prec.bits, value_.bits())), tag_, index_, nullptr);
}

// ---------------------------------------------------------------------------
// Flow and flat lengths

namespace {

int bits_of(const Interval& theta, const FlowTime& t) { return std::max(theta.bits(), t.value().bits()); }

Interval half(const Interval& x) { return x * Interval::exact(0.5, x.bits()); }

// Quantities shared by every length evaluation at one (θ, t).
struct FlowFrame {
  int bits;
  Interval theta;
  Interval exp_t;
  Interval exp_minus_t;
  Interval norm;  // 1 + θ²

  FlowFrame(const Interval& th, const FlowTime& t)
      : bits(bits_of(th, t)),
        theta(th.with_bits(bits)),
        exp_t(exp(t.value().with_bits(bits))),
        exp_minus_t(exp(-t.value().with_bits(bits))),
        norm(Interval::integer(1, bits) + sqr(theta)) {}

  Interval length_sq(const mpz_class& q, const mpz_class& p) const {
    Interval Q = Interval::integer(q, bits);
    Interval P = Interval::integer(p, bits);
    Interval u = Q + theta * P;
    Interval w = P - theta * Q;
    return (sqr(u) * exp_minus_t + sqr(w) * exp_t) / norm;
  }
};

}  // namespace

std::array<std::array<Interval, 2>, 2> flow_matrix(const Interval& theta, const FlowTime& t) {
  const int bits = bits_of(theta, t);
  Interval th = theta.with_bits(bits);
  Interval scale = recip(sqrt(Interval::integer(1, bits) + sqr(th)));
  Interval contract = exp(-half(t.value().with_bits(bits)));
  Interval expand = exp(half(t.value().with_bits(bits)));
  // x = e^{t/2}(qθ - p)/√(1+θ²) is the expanded horizontal direction,
  // y = e^{-t/2}(q + pθ)/√(1+θ²) the contracted vertical one (the slope-θ
  // direction, along which the slit lies).
  return {{{expand * th * scale, -(expand * scale)}, {contract * scale, contract * th * scale}}};
}

Interval flow_determinant(const Interval& theta, const FlowTime& t) {
  auto m = flow_matrix(theta, t);
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

FlatVector flow_image(const Interval& theta, const LatticeVector& v, const FlowTime& t) {
  auto m = flow_matrix(theta, t);
  const int bits = m[0][0].bits();
  Interval Q = Interval::integer(v.q, bits);
  Interval P = Interval::integer(v.p, bits);
  return {m[0][0] * Q + m[0][1] * P, m[1][0] * Q + m[1][1] * P};
}

Interval flat_length_sq(const Interval& theta, const LatticeVector& v, const FlowTime& t,
                        std::optional<double> width_cap) {
  if (v.is_zero()) throw DomainError("flat length of the zero vector");
  Interval l2 = FlowFrame(theta, t).length_sq(v.q, v.p);
  if (width_cap && l2.width_up() > *width_cap) {
    throw InsufficientPrecision("flat length enclosure of " + v.to_string() + " wider than " + std::to_string(*width_cap));
  }
  return l2;
}

Interval flat_length_sq(const Slope& slope, const LatticeVector& v, const FlowTime& t, double width_cap, int retries) {
  Slope current = slope;
  FlowTime tt = t.at(slope.precision());
  for (int attempt = 0;; ++attempt) {
    Interval l2 = flat_length_sq(current.theta(), v, tt);
    if (l2.width_up() <= width_cap) return l2;
    if (attempt >= retries) {
      throw InsufficientPrecision("flat length enclosure of " + v.to_string() + " still wider than " +
                                  std::to_string(width_cap) + " after " + std::to_string(retries) + " refinements");
    }
    current = current.refined();
    tt = t.at(current.precision());
  }
}

// ---------------------------------------------------------------------------
// Minimizing times

namespace {

Interval min_time_value(const Interval& theta, const Convergent& c) {
  const int bits = theta.bits();
  Interval Q = Interval::integer(c.q, bits);
  Interval P = Interval::integer(c.p, bits);
  Interval gap = Q * theta - P;
  if (gap.contains_zero()) {
    throw InsufficientPrecision("sign of q_" + std::to_string(c.n) + " theta - p_" + std::to_string(c.n) + " undecided");
  }
  return log((P * theta + Q) / abs(gap));
}

}  // namespace

FlowTime min_time(const Interval& theta, const Convergent& c) {
  return FlowTime(min_time_value(theta, c), TimeTag::min_time, c.n,
                  [theta, c](const Precision& prec) { return min_time_value(theta.with_bits(prec.bits), c); });
}

FlowTime min_time(const Slope& slope, long n) {
  ContinuedFraction cf = slope.fraction();
  return FlowTime(min_time_value(slope.theta(), slope.convergent(n)), TimeTag::min_time, n,
                  [cf, n](const Precision& prec) {
                    Slope s(cf, static_cast<std::size_t>(std::max(n, 0L)), prec);
                    return min_time_value(s.theta(), s.convergent(n));
                  });
}

Interval min_length_sq(const Interval& theta, const Convergent& c) {
  const int bits = theta.bits();
  Interval Q = Interval::integer(c.q, bits);
  Interval P = Interval::integer(c.p, bits);
  Interval gap = Q * theta - P;
  if (gap.contains_zero()) {
    throw InsufficientPrecision("sign of q_" + std::to_string(c.n) + " theta - p_" + std::to_string(c.n) + " undecided");
  }
  Interval two = Interval::integer(2, bits);
  return two * (Q + P * theta) * abs(gap) / (Interval::integer(1, bits) + sqr(theta));
}

Interval shortest_threshold(const Interval& theta, const mpz_class& a0) {
  const int bits = theta.bits();
  Interval A = Interval::integer(a0, bits);
  return log((Interval::integer(1, bits) + A * theta) / (theta - A));
}

Interval shortest_threshold(const Slope& slope) { return shortest_threshold(slope.theta(), slope.fraction().a0()); }

// ---------------------------------------------------------------------------
// Shortest and second-shortest predictions

namespace {

// Index of the entry certainly shorter than every other one, if any.
std::optional<std::size_t> certified_minimum(const std::vector<Interval>& lengths) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    if (lengths[i].mid() < lengths[best].mid()) best = i;
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (i != best && !lengths[best].certainly_less(lengths[i])) return std::nullopt;
  }
  return best;
}

}  // namespace

ShortestPrediction predicted_shortest(const Slope& slope, const FlowTime& t, int retries) {
  Slope current = slope;
  FlowTime tt = t.at(slope.precision());
  for (int attempt = 0;; ++attempt) {
    const Interval& time = tt.value();
    Interval threshold = shortest_threshold(current);
    if (time.certainly_less(threshold)) {
      throw BelowThreshold("t = " + time.to_string(10) + " lies below the convergent threshold " +
                           threshold.to_string(10));
    }
    const long top = static_cast<long>(current.max_index());
    if (!time.certainly_less(min_time(current, top + 1).value())) {
      throw InsufficientPrecision("t = " + time.to_string(10) + " beyond the slope's convergent range");
    }
    // Largest n with T_n possibly <= t; the shortest is among n-1, n, n+1.
    long n = 0;
    for (long i = top; i >= 0; --i) {
      if (!time.certainly_less(min_time(current, i).value())) {
        n = i;
        break;
      }
    }
    std::vector<long> indices;
    for (long i = std::max(n - 1, -1L); i <= n + 1; ++i) indices.push_back(i);
    std::vector<Interval> lengths;
    for (long i : indices) lengths.push_back(flat_length_sq(current.theta(), LatticeVector::of(current.convergent(i)), tt));
    if (auto best = certified_minimum(lengths)) {
      return {current.convergent(indices[*best]), lengths[*best], current.bits()};
    }
    if (attempt >= retries) {
      throw AmbiguousAtPrecision("shortest convergent near n = " + std::to_string(n) + " undecided at t = " +
                                 time.to_string(10) + " after " + std::to_string(retries) + " refinements");
    }
    current = current.refined();
    tt = t.at(current.precision());
  }
}

std::vector<LatticeVector> second_shortest_candidates(const Slope& slope, long n) {
  if (n < 0) throw DomainError("second-shortest candidates need n >= 0");
  const mpz_class& a_next = slope.element(static_cast<std::size_t>(n + 1));
  if (a_next > 10000000) throw Unsupported("element a_" + std::to_string(n + 1) + " too large to enumerate candidates");
  const Convergent& prev = slope.convergent(n - 1);
  const Convergent& cur = slope.convergent(n);
  std::vector<LatticeVector> out;
  const long count = a_next.get_si();
  out.reserve(static_cast<std::size_t>(count) + 1);
  for (long a = 0; a <= count; ++a) out.push_back(LatticeVector::canonical(prev.q + a * cur.q, prev.p + a * cur.p));
  return out;
}

SecondPrediction predicted_second_shortest(const Slope& slope, long n, const FlowTime& t, int retries,
                                           bool accept_tie) {
  Slope current = slope;
  FlowTime tt = t.at(slope.precision());
  for (int attempt = 0;; ++attempt) {
    std::vector<LatticeVector> candidates = second_shortest_candidates(current, n);
    FlowFrame frame(current.theta(), tt);
    std::vector<Interval> lengths;
    lengths.reserve(candidates.size());
    for (const auto& v : candidates) lengths.push_back(frame.length_sq(v.q, v.p));
    if (auto best = certified_minimum(lengths)) {
      return {candidates[*best], static_cast<long>(*best), lengths[*best], current.bits()};
    }
    if (attempt >= retries && accept_tie) {
      std::size_t lowest = 0;
      for (std::size_t i = 1; i < lengths.size(); ++i) {
        if (lengths[i].hi() < lengths[lowest].hi()) lowest = i;
      }
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (!lengths[lowest].certainly_less(lengths[i])) {
          return {candidates[i], static_cast<long>(i), lengths[i], current.bits(), true};
        }
      }
    }
    if (attempt >= retries) {
      throw AmbiguousAtPrecision("second-shortest vector for n = " + std::to_string(n) + " undecided at t = " +
                                 tt.value().to_string(10));
    }
    current = current.refined();
    tt = t.at(current.precision());
  }
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

namespace {

struct Found {
  LatticeVector v;
  Interval l2;
};

// Every primitive vector whose true l_t² can be <= L, given as
// |q + θp| <= sqrt(L(1+θ²)e^t) and |p - θq| <= sqrt(L(1+θ²)e^{-t}).
std::vector<Found> enumerate_region(const FlowFrame& frame, double L, long window) {
  const int bits = frame.bits;
  Interval Lb = Interval::exact(L, bits);
  Interval A = sqrt(Lb * frame.norm * frame.exp_t);
  Interval B = sqrt(Lb * frame.norm * frame.exp_minus_t);
  Interval q_bound = (A + frame.theta * B) / frame.norm;
  const double q_max_real = q_bound.hi_up();
  if (!(q_max_real <= static_cast<double>(window))) {
    throw WindowTooSmall("certified search needs |q| up to " + q_bound.to_string(6) + ", window is " +
                         std::to_string(window));
  }
  const long q_max = static_cast<long>(std::floor(q_max_real));
  const long double th = frame.theta.mid();
  const long double b = B.hi_up();
  const long double et = frame.exp_t.mid();
  const long double norm = frame.norm.mid();
  // Generous slack for the binary64 prefilter; exact membership is decided
  // by the interval evaluation below.
  const long double keep = 2.0L * L + 1.0L;

  std::vector<Found> out;
  for (long q = 0; q <= q_max; ++q) {
    long p_lo, p_hi;
    if (q == 0) {
      p_lo = p_hi = 1;
    } else {
      p_lo = static_cast<long>(std::floor(th * q - b)) - 1;
      p_hi = static_cast<long>(std::ceil(th * q + b)) + 1;
    }
    for (long p = p_lo; p <= p_hi; ++p) {
      if (std::gcd(q, std::labs(p)) != 1) continue;
      const long double u = q + th * p;
      const long double w = p - th * q;
      const long double approx = (u * u / et + w * w * et) / norm;
      if (approx > keep) continue;
      Interval l2 = frame.length_sq(q, p);
      if (l2.lo() <= Lb.hi()) out.push_back({LatticeVector::canonical(q, p), std::move(l2)});
    }
  }
  return out;
}

struct SearchResult {
  std::vector<OracleHit> hits;
  bool any_tie = false;
};

SearchResult search(const Interval& theta, const FlowTime& t, long window, int k) {
  if (k < 1) throw DomainError("brute_force_k_shortest needs k >= 1");
  FlowFrame frame(theta, t);
  // Every unimodular lattice has a vector with l² <= 2/√3 < 2.
  double L = 2.0;
  for (;;) {
    std::vector<Found> found = enumerate_region(frame, L, window);
    Real bound(L, frame.bits);
    const auto certain = std::count_if(found.begin(), found.end(), [&](const Found& f) { return f.l2.hi() <= bound; });
    if (certain < k) {
      L *= 4.0;
      continue;
    }
    std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
      const double ma = a.l2.mid(), mb = b.l2.mid();
      if (ma != mb) return ma < mb;
      return a.v < b.v;
    });
    SearchResult result;
    for (int i = 0; i < k; ++i) {
      bool tie = false;
      if (i + 1 < k) {
        tie = !found[i].l2.certainly_less(found[i + 1].l2);
      } else {
        for (std::size_t j = static_cast<std::size_t>(k); j < found.size(); ++j) {
          if (!found[i].l2.certainly_less(found[j].l2)) tie = true;
        }
      }
      result.any_tie = result.any_tie || tie;
      result.hits.push_back({found[i].v, found[i].l2, tie});
    }
    return result;
  }
}

}  // namespace

std::vector<OracleHit> brute_force_k_shortest(const Interval& theta, const FlowTime& t, long window, int k) {
  return search(theta, t, window, k).hits;
}

std::vector<OracleHit> brute_force_k_shortest(const Slope& slope, const FlowTime& t, long window, int k, int retries) {
  Slope current = slope;
  FlowTime tt = t.at(slope.precision());
  for (int attempt = 0;; ++attempt) {
    SearchResult r = search(current.theta(), tt, window, k);
    if (!r.any_tie || attempt >= retries) return r.hits;
    current = current.refined();
    tt = t.at(current.precision());
  }
}

}  // namespace teichflow
