// Acceptance criteria 1-10: one PASS/FAIL line each; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>

#include "teichflow/config.hpp"
#include "teichflow/errors.hpp"
#include "teichflow/report.hpp"

using namespace teichflow;

namespace {

const char* const kTheta1 = "a0=3,const:3";
const char* const kTheta2 = "a0=3,spiked:base=3,positions=2k,values=4^k";

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_seconds, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = budget_seconds <= 0 || secs < budget_seconds;
  const bool ok = out.ok && in_time;
  if (!ok) ++failures;
  std::printf("CRITERION %d %s: %s | %s | %.2f s%s\n", id, ok ? "PASS" : "FAIL", title, out.detail.c_str(), secs,
              in_time ? "" : " (over budget)");
  std::fflush(stdout);
}

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

Interval systole() { return Interval::integer(2, 256) / sqrt(Interval::integer(13, 256)); }

struct OracleTally {
  long samples = 0, first = 0, second = 0;
};

OracleTally oracle_run(const char* pattern, long upper) {
  ContinuedFraction cf = ContinuedFraction::parse(pattern);
  Slope probe(cf, static_cast<std::size_t>(upper + 2));
  const double lo = std::max(shortest_threshold(probe).hi_up(), cf.bounded() ? 3.59 : 0.0);
  const double hi = min_time(probe, upper).value().lo_down();
  Slope slope = Slope::covering(cf, hi + 1.0);
  OracleTally tally;
  for (int i = 0; i < 200; ++i) {
    FlowTime t = FlowTime::generic(lo + (hi - lo) * (i + 0.5) / 200.0);
    ShortestPrediction pred = predicted_shortest(slope, t);
    auto hits = brute_force_k_shortest(slope, t, 1000000, 2);
    ++tally.samples;
    if (hits[0].vector == LatticeVector::of(pred.convergent)) ++tally.first;
    auto fam = second_shortest_candidates(slope, pred.convergent.n);
    if (std::find(fam.begin(), fam.end(), hits[1].vector) != fam.end()) ++tally.second;
  }
  return tally;
}

}  // namespace

int main() {
  const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  criterion(1, "continued-fraction exactness", 1.0, [] {
    bool ok = true;
    for (const char* pattern : {kTheta1, kTheta2}) {
      ContinuedFraction cf = ContinuedFraction::parse(pattern);
      Slope slope(cf, 31);
      auto cs = convergents(cf, 31);
      mpz_class p2 = 0, q2 = 1, p1 = 1, q1 = 0;
      for (std::size_t n = 0; n <= 31; ++n) {
        mpz_class p = cf.element(n) * p1 + p2, q = cf.element(n) * q1 + q2;
        ok = ok && cs[n].p == p && cs[n].q == q;
        p2 = p1, q2 = q1, p1 = p, q1 = q;
      }
      for (long n = 0; n <= 30; ++n) {
        const auto& a = cs[static_cast<std::size_t>(n)];
        const auto& b = cs[static_cast<std::size_t>(n + 1)];
        ok = ok && abs(b.p * a.q - b.q * a.p) == 1;
        Interval gap = slope.gap(n);
        ok = ok && Interval::rational(1, a.q + b.q, 256).certainly_less(gap) &&
             gap.certainly_less(Interval::rational(1, b.q, 256));
      }
    }
    return Outcome{ok, "recurrence, |det| = 1 and brackets for n <= 30 on both default slopes"};
  });

  criterion(2, "flow isometry at t = 0", 1.0, [] {
    Slope slope = Slope::covering(ContinuedFraction::parse(kTheta1), 10.0);
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<long> d(-100000, 100000);
    int tested = 0, ok = 0;
    double widest = 0.0;
    while (tested < 100) {
      LatticeVector v = LatticeVector::canonical(d(gen), d(gen));
      if (v.is_zero() || !v.primitive()) continue;
      ++tested;
      Interval l = flat_length_sq(slope.theta(), v, FlowTime::generic(0.0));
      Interval want = Interval::integer(v.q * v.q + v.p * v.p, 256);
      widest = std::max(widest, l.width_up());
      if (l.contains(want) && l.width_up() <= 1e-20) ++ok;
    }
    return Outcome{ok == 100, std::to_string(ok) + "/100 enclose q^2+p^2, widest " + num(widest)};
  });

  criterion(3, "closed-form systole", 1.0, [] {
    Slope slope = Slope::covering(ContinuedFraction::parse(kTheta1), 40.0);
    bool ok = true;
    double widest = 0.0;
    for (long n = 0; n <= 10; ++n) {
      Interval m = min_length_sq(slope.theta(), slope.convergent(n));
      widest = std::max(widest, m.width_up());
      ok = ok && m.overlaps(systole()) && m.width_up() <= 1e-12;
    }
    Interval T0 = min_time(slope, 0).value();
    const bool t0 = T0.overlaps(Interval::integer(3, 256) * log(slope.theta()));
    return Outcome{ok && t0, "2/sqrt(13) enclosed for n <= 10 (widest " + num(widest) + "), T_0 = 3 log theta: " +
                                 (t0 ? "yes" : "no")};
  });

  OracleTally o1, o2;
  auto oracle_start = std::chrono::steady_clock::now();
  criterion(4, "shortest-vector oracle equivalence", 60.0, [&] {
    o1 = oracle_run(kTheta1, 8);
    o2 = oracle_run(kTheta2, 6);
    const bool ok = o1.first == o1.samples && o2.first == o2.samples;
    return Outcome{ok, "theta1 " + std::to_string(o1.first) + "/" + std::to_string(o1.samples) + " on [3.59, T_8], theta2 " +
                           std::to_string(o2.first) + "/" + std::to_string(o2.samples) + " on [threshold, T_6]"};
  });
  const double oracle_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - oracle_start).count();

  criterion(5, "second-shortest containment", 60.0 - oracle_secs, [&] {
    const bool ok = o1.samples == 200 && o2.samples == 200 && o1.second == o1.samples && o2.second == o2.samples;
    return Outcome{ok, "theta1 " + std::to_string(o1.second) + "/200, theta2 " + std::to_string(o2.second) +
                           "/200 inside the candidate family"};
  });

  criterion(6, "extremal-length sandwich", 5.0, [] {
    Slope slope = Slope::covering(ContinuedFraction::parse(kTheta1), 45.0);
    Rational s = Rational::parse("1/2");
    bool ordered = true, near_one = true;
    double rel5 = 0, rel15 = 0;
    for (long n = 5; n <= 15; ++n) {
      FlowTime t = min_time(slope, n);
      LatticeVector v = LatticeVector::of(slope.convergent(n));
      Interval f = flat_length_sq(slope.theta(), v, t);
      Interval lo = ext_lower(slope.theta(), v, s, t), hi = ext_upper(slope.theta(), v, s, t);
      ordered = ordered && lo.hi() <= hi.lo();
      const double rel = ((hi - lo) / f).mid();
      if (n == 5) rel5 = rel;
      if (n == 15) rel15 = rel;
      if (n >= 10) near_one = near_one && (lo / f).lo_down() >= 0.9 && (hi / f).hi_up() <= 1.1;
    }
    for (double t = 3.6; t < 38.0; t += 0.37) {
      FlowTime ft = FlowTime::generic(t);
      LatticeVector v = LatticeVector::of(predicted_shortest(slope, ft).convergent);
      ordered = ordered && ext_lower(slope.theta(), v, s, ft).hi() <= ext_upper(slope.theta(), v, s, ft).lo();
    }
    return Outcome{ordered && near_one && rel15 < rel5,
                   "relative gap n=5 " + num(rel5) + ", n=15 " + num(rel15) + ", ordered " + (ordered ? "yes" : "no") +
                       ", ratios in [0.9, 1.1] from n=10 " + (near_one ? "yes" : "no")};
  });

  criterion(7, "one-spike scaling of the short curve", 5.0, [] {
    const double band_lo = 4.5, band_hi = 5.5;  // frozen from the first run
    const long n = 5;
    Rational s = Rational::parse("1/2");
    double lo = 1e300, hi = 0, flat50 = 0;
    std::string detail;
    for (long A : {20L, 50L, 100L}) {
      auto cf = ContinuedFraction::spiked(3, 3, std::to_string(n + 1), std::to_string(A));
      Slope slope(cf, n + 4);
      LengthInterval L = sheet_curve_lengths(slope.theta(), 1, LatticeVector::of(slope.convergent(n)), s, min_time(slope, n));
      const double scaled = L.hyp.mid() * static_cast<double>(A);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
      if (A == 50) flat50 = L.flat_sq.mid() * 50.0;
      detail += "A=" + std::to_string(A) + ": " + num(scaled) + " ";
    }
    const bool ok = lo >= band_lo && hi <= band_hi && hi / lo <= 4.0 && flat50 >= 1.8 && flat50 <= 2.2;
    return Outcome{ok, detail + "in [4.5, 5.5], c2/c1 " + num(hi / lo) + ", A * flat (A=50) " + num(flat50)};
  });

  Scenario scn = Scenario::default_scenario();
  std::vector<RatioTracePoint> tr;
  double trace_secs = 0;
  criterion(8, "oscillation witness", 600.0, [&] {
    auto start = std::chrono::steady_clock::now();
    tr = trace(scn, jobs);
    trace_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto ctl = trace(scn.as_control(), jobs);
    OscillationSummary osc = oscillation(tr), cosc = oscillation(ctl);
    const bool separated = osc.certified_K && *osc.certified_K <= 5;
    const bool control_flat = cosc.complete && !cosc.certified_K && !cosc.midpoint_K;
    std::string mids;
    for (double m : osc.even_mid) mids += num(m) + " ";
    double min_even_lo = 1e300, max_odd_hi = 0;
    for (std::size_t i = 0; i < osc.even_k.size(); ++i)
      if (osc.even_k[i] >= 2) min_even_lo = std::min(min_even_lo, osc.even_lo[i]);
    for (double h : osc.odd_hi) max_odd_hi = std::max(max_odd_hi, h);
    const bool ok = osc.complete && osc.even_mid_increasing && separated && control_flat;
    return Outcome{ok, "even midpoints " + mids + "(increasing for k>=2: " + (osc.even_mid_increasing ? "yes" : "no") +
                           "); certified K: " + (osc.certified_K ? std::to_string(*osc.certified_K) : "none") +
                           " (min even ratio.lo over k>=2 " + num(min_even_lo) + " vs max odd ratio.hi " +
                           num(max_odd_hi) + "); midpoint K: " +
                           (osc.midpoint_K ? std::to_string(*osc.midpoint_K) : "none") + "; control separation: " +
                           (control_flat ? "none" : "present")};
  });

  criterion(9, "limit-weight trend", 0.0, [&] {
    if (tr.empty()) return Outcome{false, "no trace"};
    LimitWeights lw = limit_weights(tr);
    bool increasing = lw.even_running_max.size() >= 2;
    std::string rm;
    for (std::size_t i = 0; i < lw.even_running_max.size(); ++i) {
      rm += num(lw.even_running_max[i]) + " ";
      if (i > 0) increasing = increasing && lw.even_running_max[i] > lw.even_running_max[i - 1];
    }
    const double last = lw.even_running_max.empty() ? 0.0 : lw.even_running_max.back();
    return Outcome{increasing && last > 0.9, "running max of even w1 midpoints " + rm + "(target > 0.9 by k=5)"};
  });

  criterion(10, "determinism", 0.0, [&] {
    if (tr.empty()) return Outcome{false, "no trace"};
    auto start = std::chrono::steady_clock::now();
    auto again = trace(scn, jobs);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = trace_csv(tr) == trace_csv(again) && trace_json(tr, scn) == trace_json(again, scn) &&
                    trace_plot(tr) == trace_plot(again);
    return Outcome{ok, std::string("CSV, JSON and plot data byte-identical: ") + (ok ? "yes" : "no") + " (" +
                           num(trace_secs) + " s and " + num(secs) + " s)"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
