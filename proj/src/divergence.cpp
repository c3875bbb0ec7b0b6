#include "teichflow/divergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "teichflow/errors.hpp"

namespace teichflow {

// ---------------------------------------------------------------------------
// Scenario

Scenario Scenario::default_scenario() {
  Scenario scn;
  scn.cfg.theta1 = ContinuedFraction::parse("a0=3,const:3");
  scn.cfg.theta2 = ContinuedFraction::parse("a0=3,spiked:base=3,positions=2k,values=4^k");
  scn.cfg.s = Rational::parse("1/2");
  return scn;
}

Scenario Scenario::as_control() const {
  Scenario out = *this;
  const ContinuedFraction& cf = spiked_slope();
  if (cf.kind() != ContinuedFraction::Kind::spiked) throw ConfigError("control run needs a spiked slope");
  // Keep the positions so the designated times stay defined.
  ContinuedFraction flat = cf.flattened_spikes();
  (spiked_sheet == 1 ? out.cfg.theta1 : out.cfg.theta2) = flat;
  out.control = true;
  return out;
}

Scenario Scenario::swapped() const {
  Scenario out = *this;
  std::swap(out.cfg.theta1, out.cfg.theta2);
  out.spiked_sheet = 3 - spiked_sheet;
  return out;
}

void Scenario::validate() const {
  cfg.validate();
  prec.validate();
  if (spiked_sheet != 1 && spiked_sheet != 2) throw ConfigError("spiked sheet must be 1 or 2");
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  if (samples < 0) throw ConfigError("samples must be non-negative");
  if (oracle_cap < 1) throw ConfigError("oracle cap must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");

  const ContinuedFraction& bounded = cfg.slope(3 - spiked_sheet);
  const ContinuedFraction& spiked = spiked_slope();
  if (!bounded.bounded()) throw ConfigError("sheet " + std::to_string(3 - spiked_sheet) + " slope must have bounded elements");
  if (bounded.min_element() < 3) throw ConfigError("bounded slope elements must be >= 3");
  if (spiked.kind() != ContinuedFraction::Kind::spiked) {
    throw ConfigError("sheet " + std::to_string(spiked_sheet) + " slope must be a spiked pattern");
  }
  if (spiked.base() < 3) throw ConfigError("spike base must be >= 3");
  mpz_class previous = 0;
  for (long k = 1; k <= k_max + 1; ++k) {
    if (!spiked.spike_position(k)) throw ConfigError("spiked slope defines fewer than k_max + 1 spikes");
    mpz_class v = spiked.spike_value(k);
    if (v < 3) throw ConfigError("spike values must be >= 3");
    if (!control && v <= previous) throw ConfigError("spike values must be strictly increasing");
    previous = v;
  }
  if (*spiked.spike_position(1) < 2) throw ConfigError("first spike position must be >= 2");
}

std::vector<std::pair<std::size_t, mpz_class>> Scenario::spikes() const {
  std::vector<std::pair<std::size_t, mpz_class>> out;
  for (long k = 1; k <= k_max; ++k) {
    auto pos = spiked_slope().spike_position(k);
    if (!pos) break;
    out.emplace_back(*pos, spiked_slope().spike_value(k));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Times

namespace {

std::size_t spike_index(const Scenario& scn, long k) {
  if (k < 1) throw DomainError("spike index k must be >= 1");
  auto pos = scn.spiked_slope().spike_position(k);
  if (!pos || *pos < 1) throw DomainError("no spike with index " + std::to_string(k));
  return *pos;
}

Interval odd_value(const Slope& s, std::size_t n) {
  const int bits = s.bits();
  Interval q = Interval::integer(s.convergent(static_cast<long>(n)).q, bits);
  return log((Interval::integer(1, bits) + sqr(s.theta())) * sqr(q));
}

}  // namespace

FlowTime even_time(const Scenario& scn, long k) {
  const long n = static_cast<long>(spike_index(scn, k)) - 1;
  ContinuedFraction cf = scn.spiked_slope();
  auto eval = [cf, n](const Precision& prec) {
    Slope s(cf, static_cast<std::size_t>(n), prec);
    return min_time(s, n).value();
  };
  return FlowTime(eval(scn.prec), TimeTag::even, k, eval);
}

FlowTime odd_time(const Scenario& scn, long k) {
  const std::size_t n = spike_index(scn, k);
  ContinuedFraction cf = scn.spiked_slope();
  auto eval = [cf, n](const Precision& prec) { return odd_value(Slope(cf, n, prec), n); };
  return FlowTime(eval(scn.prec), TimeTag::odd, k, eval);
}

ScenarioSlopes make_slopes(const Scenario& scn) {
  const double t_max = odd_time(scn, scn.k_max).value().hi_up() + 1.0;
  Slope a = Slope::covering(scn.cfg.theta1, t_max, scn.prec);
  Slope b = Slope::covering(scn.cfg.theta2, t_max, scn.prec);
  return {std::move(a), std::move(b)};
}

// ---------------------------------------------------------------------------
// Ratio points

namespace {

Interval pt(const Real& r) { return Interval::point(r); }

bool fits_oracle(const Slope& slope, const ShortCurveState& st, long cap) {
  const mpz_class bound(cap);
  return slope.convergent(st.first_convergent.n + 1).q <= bound && st.second_vector.q <= bound;
}

OracleCheck run_oracle(const Scenario& scn, const Slope& slope, ShortCurveState& st, std::vector<std::string>& flags) {
  OracleCheck check;
  const std::string sheet = "S" + std::to_string(st.sheet);
  if (!fits_oracle(slope, st, scn.oracle_cap)) {
    check.skipped_reason = "denominators above oracle cap";
    return check;
  }
  std::vector<OracleHit> hits;
  try {
    hits = brute_force_k_shortest(slope, st.t, scn.oracle_cap, 2);
  } catch (const WindowTooSmall& e) {
    check.skipped_reason = e.what();
    flags.push_back("oracle_window_" + sheet);
    return check;
  }
  check.performed = true;
  check.first = hits[0].vector;
  check.second = hits[1].vector;
  check.tie = hits[0].tied_with_next || hits[1].tied_with_next;
  check.first_matches = check.first == LatticeVector::of(st.first_convergent);
  check.second_matches = check.second == st.second_vector;
  auto family = second_shortest_candidates(slope, st.first_convergent.n);
  check.second_in_candidates = std::find(family.begin(), family.end(), check.second) != family.end();
  if (check.tie) flags.push_back("oracle_tie_" + sheet);
  if (!check.first_matches) flags.push_back("oracle_first_mismatch_" + sheet);
  if (!check.second_in_candidates) flags.push_back("oracle_second_outside_candidates_" + sheet);
  if (check.first_matches && !check.second_matches && !check.tie) {
    st = with_second(st, slope, check.second, scn.cfg.s);
    flags.push_back("second_from_oracle_" + sheet);
  }
  return check;
}

AlphaBounds alpha_bounds(const ShortCurveState& st) {
  CurveId target = CurveId::alpha(st.sheet);
  return {curve_length_lower(st, target), curve_length_upper(st, target)};
}

Interval ratio_of(const AlphaBounds& a1, const AlphaBounds& a2) {
  if (!a2.lower.positive()) throw DomainError("alpha_2 lower bound is not positive");
  Interval lo = pt(a1.lower.lo()) / pt(a2.upper.hi());
  Interval hi = pt(a1.upper.hi()) / pt(a2.lower.lo());
  return Interval(lo.lo(), hi.hi());
}

Interval weight_of(const AlphaBounds& a1, const AlphaBounds& a2) {
  Interval lo = pt(a1.lower.lo()) / (pt(a1.lower.lo()) + pt(a2.upper.hi()));
  Interval hi = pt(a1.upper.hi()) / (pt(a1.upper.hi()) + pt(a2.lower.lo()));
  return Interval(lo.lo(), hi.hi());
}

double mid_of(const AlphaBounds& a) { return 0.5 * (a.lower.lo_down() + a.upper.hi_up()); }

// α_s upper bound with the second curve's length replaced by 2 w(first),
// the collar-width estimate of a curve crossing the first one once.
Interval collar_alpha_upper(const ShortCurveState& st) {
  CurveId target = CurveId::alpha(st.sheet);
  const int bits = st.first.hyp.bits();
  Interval w = collar_width(pt(st.first.hyp.lo()));
  Interval est = Interval::integer(2, bits) * pt(w.hi());
  Interval i_first = Interval::integer(intersection_number(st.first.curve, target), bits);
  Interval i_second = Interval::integer(intersection_number(st.second.curve, target), bits);
  return pt(st.first.hyp.hi()) * i_second + est * i_first;
}

}  // namespace

RatioTracePoint ratio_at(const Scenario& scn, const ScenarioSlopes& slopes, const FlowTime& t) {
  RatioTracePoint point;
  point.t = t;
  point.parity = (t.tag() == TimeTag::even || t.tag() == TimeTag::odd) ? t.tag() : TimeTag::generic;
  point.k = point.parity == TimeTag::generic ? 0 : t.index();
  const Rational& s = scn.cfg.s;
  try {
    ShortCurveState st1 = short_curve_state(slopes.sheet1, 1, s, t);
    ShortCurveState st2 = short_curve_state(slopes.sheet2, 2, s, t);
    if (st1.second_tied) point.flags.push_back("second_tie_S1");
    if (st2.second_tied) point.flags.push_back("second_tie_S2");
    point.oracle1 = run_oracle(scn, slopes.sheet1, st1, point.flags);
    point.oracle2 = run_oracle(scn, slopes.sheet2, st2, point.flags);

    AlphaBounds a1 = alpha_bounds(st1);
    AlphaBounds a2 = alpha_bounds(st2);
    if (a1.upper.hi() < a1.lower.lo()) point.flags.push_back("bounds_inverted_S1");
    if (a2.upper.hi() < a2.lower.lo()) point.flags.push_back("bounds_inverted_S2");
    point.ratio = ratio_of(a1, a2);
    point.w1 = weight_of(a1, a2);

    // Convergent-based alternative whenever a second curve is intermediate.
    std::optional<AlphaBounds> alt1, alt2;
    for (ShortCurveState* st : {&st1, &st2}) {
      if (st->second_is_convergent) continue;
      const Slope& slope = slopes.sheet(st->sheet);
      point.flags.push_back("second_nonconvergent_S" + std::to_string(st->sheet));
      ShortCurveState alt =
          with_second(*st, slope, LatticeVector::of(slope.convergent(st->first_convergent.n + 1)), s);
      (st->sheet == 1 ? alt1 : alt2) = alpha_bounds(alt);
    }
    if (alt1 || alt2) point.alt_ratio = ratio_of(alt1 ? *alt1 : a1, alt2 ? *alt2 : a2);

    try {
      Interval R1 = sqrt(st1.first.flat_sq);
      Interval R2 = sqrt(st2.first.flat_sq);
      point.mod_bound = annulus_modulus_bound(scn.cfg, st1.t, R1, R2);
      point.ct_bound = crossing_arc_bound(*point.mod_bound, scn.delta);
    } catch (const DomainError& e) {
      point.flags.push_back(point.mod_bound ? "ct_bound_domain" : "mod_bound_domain");
    }
    if (point.ct_bound) {
      const double sum = mid_of(a1) + mid_of(a2);
      const double eps = 2.0 * point.ct_bound->mid() / sum;
      point.gamma_ratio = Interval(Real(1.0, 53), Real(1.0 + eps, 53));
    }

    const ShortCurveState& spiked = scn.spiked_sheet == 1 ? st1 : st2;
    const ShortCurveState& bounded = scn.spiked_sheet == 1 ? st2 : st1;
    {
      const int bits = spiked.first.hyp.bits();
      Interval w = collar_width(pt(spiked.first.hyp.hi()));
      Interval cross = Interval::integer(intersection_number(spiked.first.curve, spiked.second.curve), bits);
      Interval lower = Interval::integer(2, bits) * w * cross;
      Real top = spiked.second.hyp.hi();
      if (lower.lo() <= top) point.second_hyp_collar = Interval(lower.lo(), top);
      AlphaBounds diag = alpha_bounds(spiked);
      diag.upper = collar_alpha_upper(spiked);
      point.collar_ratio = scn.spiked_sheet == 2 ? ratio_of(a1, diag) : ratio_of(diag, a2);
    }
    if (point.parity == TimeTag::even) {
      const Slope& ss = slopes.sheet(scn.spiked_sheet);
      const std::size_t nk = *ss.fraction().spike_position(point.k);
      const double q_bounded = bounded.first_convergent.q.get_d();
      const double q_spiked = ss.convergent(static_cast<long>(nk) - 1).q.get_d();
      point.spike_growth_ratio = q_bounded / (q_spiked * std::sqrt(ss.element(nk).get_d()));
    }
    point.state1 = std::move(st1);
    point.state2 = std::move(st2);
    point.alpha1 = a1;
    point.alpha2 = a2;
  } catch (const Error& e) {
    point.error = e.what();
    point.flags.push_back("error");
  }
  return point;
}

RatioTracePoint ratio_at(const Scenario& scn, const FlowTime& t) { return ratio_at(scn, make_slopes(scn), t); }

std::vector<RatioTracePoint> trace(const Scenario& scn, unsigned jobs) {
  scn.validate();
  ScenarioSlopes slopes = make_slopes(scn);
  std::vector<FlowTime> tagged;
  for (long k = 1; k <= scn.k_max; ++k) {
    tagged.push_back(even_time(scn, k));
    tagged.push_back(odd_time(scn, k));
  }
  std::stable_sort(tagged.begin(), tagged.end(),
                   [](const FlowTime& a, const FlowTime& b) { return a.value().mid() < b.value().mid(); });
  std::vector<FlowTime> times;
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    times.push_back(tagged[i]);
    if (i + 1 == tagged.size()) break;
    const double a = tagged[i].value().mid();
    const double b = tagged[i + 1].value().mid();
    for (long j = 1; j <= scn.samples; ++j) {
      times.push_back(FlowTime::generic(a + (b - a) * static_cast<double>(j) / static_cast<double>(scn.samples + 1),
                                        scn.prec.bits));
    }
  }

  std::vector<RatioTracePoint> points(times.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < times.size(); i = next++) points[i] = ratio_at(scn, slopes, times[i]);
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(times.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i + 1 < tagged.size(); ++i) {
    if (!tagged[i].value().certainly_less(tagged[i + 1].value())) {
      for (auto& p : points) {
        if (p.parity != TimeTag::generic && p.k == tagged[i].index()) p.flags.push_back("time_order_undecided");
      }
    }
  }
  return points;
}

// ---------------------------------------------------------------------------
// Summaries

LimitWeights limit_weights(const std::vector<RatioTracePoint>& tr) {
  if (tr.empty()) throw DomainError("limit_weights needs a non-empty trace");
  LimitWeights out;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double running = -std::numeric_limits<double>::infinity();
  for (const auto& p : tr) {
    out.gamma_ratios.push_back(p.gamma_ratio);
    if (!p.w1) continue;
    const double m = p.w1->mid();
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    if (!(p.w1->lo().sign() > 0 && p.w1->hi_up() < 1.0)) out.all_inside_unit_interval = false;
    if (p.parity == TimeTag::even) {
      running = std::max(running, m);
      out.even_k.push_back(p.k);
      out.even_running_max.push_back(running);
    }
  }
  if (lo > hi) throw DomainError("no trace point carries a weight");
  out.accumulation = Interval(Real(lo, 53), Real(hi, 53));
  return out;
}

OscillationSummary oscillation(const std::vector<RatioTracePoint>& tr) {
  OscillationSummary out;
  out.complete = true;
  for (const auto& p : tr) {
    if (p.parity == TimeTag::generic) continue;
    if (!p.ratio) {
      out.complete = false;
      continue;
    }
    if (p.parity == TimeTag::even) {
      out.even_k.push_back(p.k);
      out.even_mid.push_back(p.ratio->mid());
      out.even_lo.push_back(p.ratio->lo_down());
    } else {
      out.odd_k.push_back(p.k);
      out.odd_mid.push_back(p.ratio->mid());
      out.odd_hi.push_back(p.ratio->hi_up());
    }
  }
  bool increasing = true;
  int compared = 0;
  for (std::size_t i = 0; i + 1 < out.even_k.size(); ++i) {
    if (out.even_k[i] < 2) continue;
    ++compared;
    if (!(out.even_mid[i + 1] > out.even_mid[i])) increasing = false;
  }
  out.even_mid_increasing = increasing && compared > 0;

  if (!out.odd_k.empty()) {
    const double odd_hi = *std::max_element(out.odd_hi.begin(), out.odd_hi.end());
    const double odd_mid = *std::max_element(out.odd_mid.begin(), out.odd_mid.end());
    for (std::size_t i = 0; i < out.even_k.size(); ++i) {
      const double lo = *std::min_element(out.even_lo.begin() + static_cast<long>(i), out.even_lo.end());
      const double mid = *std::min_element(out.even_mid.begin() + static_cast<long>(i), out.even_mid.end());
      if (!out.certified_K && lo > odd_hi) out.certified_K = out.even_k[i];
      if (!out.midpoint_K && mid > odd_mid) out.midpoint_K = out.even_k[i];
    }
  }
  return out;
}

}  // namespace teichflow
