#include "teichflow/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>

#include <json.hpp>

#include "teichflow/errors.hpp"

namespace teichflow {

const char* to_string(GroupStatus s) {
  switch (s) {
    case GroupStatus::pass: return "pass";
    case GroupStatus::fail: return "fail";
    case GroupStatus::skipped: return "skipped";
    case GroupStatus::error: return "error";
  }
  return "?";
}

bool VerifyReport::all_passed() const {
  return std::all_of(groups.begin(), groups.end(), [](const GroupResult& g) { return g.status == GroupStatus::pass; });
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json root;
  root["all_passed"] = all_passed();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& g : groups) {
    nlohmann::ordered_json j;
    j["name"] = g.name;
    j["status"] = to_string(g.status);
    j["seconds"] = g.seconds;
    j["message"] = g.message;
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : g.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    j["checks"] = checks;
    arr.push_back(j);
  }
  root["groups"] = arr;
  return root.dump(2) + "\n";
}

namespace {

std::string fmt(const char* f, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Runs body, times it, and turns exceptions into skipped/error states.
GroupResult run_group(const std::string& name, const std::function<void(GroupResult&)>& body) {
  GroupResult g;
  g.name = name;
  auto start = std::chrono::steady_clock::now();
  try {
    body(g);
    bool ok = std::all_of(g.checks.begin(), g.checks.end(), [](const CheckResult& c) { return c.ok; });
    if (g.status == GroupStatus::pass && !ok) g.status = GroupStatus::fail;
  } catch (const WindowTooSmall& e) {
    g.status = GroupStatus::skipped;
    g.message = e.what();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    g.status = GroupStatus::error;
    g.message = e.what();
  }
  g.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return g;
}

void add(GroupResult& g, std::string name, bool ok, std::string detail = {}) {
  g.checks.push_back({std::move(name), ok, std::move(detail)});
}

}  // namespace

GroupResult verify_contfrac(const RunConfig& cfg) {
  return run_group("contfrac", [&](GroupResult& g) {
    const std::size_t n_max = 30;
    for (int sheet : {1, 2}) {
      ContinuedFraction cf = ContinuedFraction::parse(sheet == 1 ? cfg.theta1 : cfg.theta2);
      Slope slope(cf, n_max + 1, cfg.precision());
      std::vector<Convergent> cs = convergents(cf, n_max + 1);
      mpz_class p2 = 0, q2 = 1, p1 = 1, q1 = 0;
      bool recurrence = true, unimodular = true, bracket = true;
      std::string where;
      for (std::size_t i = 0; i <= n_max + 1; ++i) {
        mpz_class a = cf.element(i);
        mpz_class p = a * p1 + p2, q = a * q1 + q2;
        if (cs[i].p != p || cs[i].q != q) recurrence = false;
        p2 = p1;
        q2 = q1;
        p1 = p;
        q1 = q;
      }
      for (std::size_t i = 0; i <= n_max; ++i) {
        mpz_class det = cs[i + 1].p * cs[i].q - cs[i + 1].q * cs[i].p;
        if (abs(det) != 1) unimodular = false;
        const long n = static_cast<long>(i);
        Interval gap = slope.gap(n);
        Interval lo = Interval::rational(1, cs[i].q + cs[i + 1].q, cfg.bits);
        Interval hi = Interval::rational(1, cs[i + 1].q, cfg.bits);
        if (!(lo.certainly_less(gap) && gap.certainly_less(hi))) {
          bracket = false;
          if (where.empty()) where = "n=" + std::to_string(n);
        }
      }
      const std::string s = "sheet" + std::to_string(sheet);
      add(g, s + "_recurrence", recurrence);
      add(g, s + "_determinant", unimodular);
      add(g, s + "_bracket", bracket, where);
    }
  });
}

GroupResult verify_flow_oracle(const RunConfig& cfg) {
  return run_group("flow-oracle", [&](GroupResult& g) {
    for (int sheet : {1, 2}) {
      ContinuedFraction cf = ContinuedFraction::parse(sheet == 1 ? cfg.theta1 : cfg.theta2);
      const long upper = cf.bounded() ? 8 : 6;
      Slope probe(cf, upper + 2, cfg.precision());
      const double lo = shortest_threshold(probe).hi_up();
      const double hi = min_time(probe, upper).value().lo_down();
      Slope slope = Slope::covering(cf, hi + 1.0, cfg.precision());
      int first_ok = 0, second_ok = 0;
      std::string first_bad, second_bad;
      for (int i = 0; i < kOracleSamples; ++i) {
        const double t = lo + (hi - lo) * (i + 0.5) / kOracleSamples;
        FlowTime ft = FlowTime::generic(t, cfg.bits);
        ShortestPrediction pred = predicted_shortest(slope, ft);
        auto hits = brute_force_k_shortest(slope, ft, cfg.oracle_cap, 2);
        if (hits[0].vector == LatticeVector::of(pred.convergent)) ++first_ok;
        else if (first_bad.empty()) first_bad = fmt("t=%.6f", t);
        auto family = second_shortest_candidates(slope, pred.convergent.n);
        if (std::find(family.begin(), family.end(), hits[1].vector) != family.end()) ++second_ok;
        else if (second_bad.empty()) second_bad = fmt("t=%.6f", t);
      }
      const std::string s = "sheet" + std::to_string(sheet);
      const std::string range = fmt("[%.6f, ", lo) + fmt("%.6f]", hi);
      add(g, s + "_shortest_matches", first_ok == kOracleSamples,
          std::to_string(first_ok) + "/" + std::to_string(kOracleSamples) + " in " + range + " " + first_bad);
      add(g, s + "_second_in_candidates", second_ok == kOracleSamples,
          std::to_string(second_ok) + "/" + std::to_string(kOracleSamples) + " " + second_bad);
    }
  });
}

GroupResult verify_sandwich(const RunConfig& cfg) {
  return run_group("sandwich", [&](GroupResult& g) {
    ContinuedFraction cf = ContinuedFraction::parse(cfg.theta1);
    Rational s = Rational::parse(cfg.s);
    Slope slope(cf, 17, cfg.precision());
    bool ordered = true;
    bool near_one = true;
    double rel5 = 0.0, rel15 = 0.0;
    for (long n = 5; n <= 15; ++n) {
      FlowTime t = min_time(slope, n);
      LatticeVector v = LatticeVector::of(slope.convergent(n));
      Interval flat = flat_length_sq(slope.theta(), v, t);
      Interval lower = ext_lower(slope.theta(), v, s, t);
      Interval upper = ext_upper(slope.theta(), v, s, t);
      if (!(lower.hi() <= upper.lo())) ordered = false;
      const double rel = ((upper - lower) / flat).mid();
      if (n == 5) rel5 = rel;
      if (n == 15) rel15 = rel;
      if (n >= 10) {
        Interval rl = lower / flat, ru = upper / flat;
        if (rl.lo_down() < 0.9 || ru.hi_up() > 1.1) near_one = false;
      }
    }
    // Generic times between the tagged ones.
    for (double t = 4.0; t < min_time(slope, 15).value().mid(); t += 1.7) {
      FlowTime ft = FlowTime::generic(t, cfg.bits);
      ShortestPrediction pred = predicted_shortest(slope, ft);
      LatticeVector v = LatticeVector::of(pred.convergent);
      if (!(ext_lower(slope.theta(), v, s, ft).hi() <= ext_upper(slope.theta(), v, s, ft).lo())) ordered = false;
    }
    add(g, "ext_lower_below_ext_upper", ordered);
    add(g, "relative_gap_shrinks", rel15 < rel5, fmt("n=5: %.6g", rel5) + fmt(", n=15: %.6g", rel15));
    add(g, "ratios_near_one_from_n10", near_one);
  });
}

GroupResult verify_short_curve_scaling(const RunConfig& cfg) {
  return run_group("short-curve-scaling", [&](GroupResult& g) {
    Rational s = Rational::parse(cfg.s);
    double lo = 1e300, hi = 0.0, flat50 = 0.0;
    std::string detail;
    for (long A : {20L, 50L, 100L}) {
      auto cf = ContinuedFraction::spiked(3, 3, std::to_string(kScalingIndex + 1), std::to_string(A));
      Slope slope(cf, kScalingIndex + 4, cfg.precision());
      FlowTime t = min_time(slope, kScalingIndex);
      LengthInterval L =
          sheet_curve_lengths(slope.theta(), 1, LatticeVector::of(slope.convergent(kScalingIndex)), s, t);
      const double scaled = L.hyp.mid() * static_cast<double>(A);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
      if (A == 50) flat50 = L.flat_sq.mid() * 50.0;
      detail += fmt("A=%.0f: ", static_cast<double>(A)) + fmt("%.6f ", scaled);
    }
    add(g, "hyp_times_A_in_band", lo >= kScalingBandLo && hi <= kScalingBandHi, detail);
    add(g, "band_ratio_at_most_4", hi / lo <= 4.0, fmt("%.6f", hi / lo));
    add(g, "flat_times_A_near_2", flat50 >= 1.8 && flat50 <= 2.2, fmt("%.6f", flat50));
  });
}

GroupResult verify_oscillation(const RunConfig& cfg, const std::vector<RatioTracePoint>& tr) {
  return run_group("oscillation", [&](GroupResult& g) {
    OscillationSummary osc = oscillation(tr);
    add(g, "tagged_points_complete", osc.complete);
    std::string mids;
    for (double m : osc.even_mid) mids += fmt("%.6g ", m);
    add(g, "even_midpoints_increasing", osc.even_mid_increasing, mids);
    const bool separated = osc.certified_K && *osc.certified_K <= cfg.k_max;
    add(g, "certified_separation", separated,
        osc.midpoint_K ? "midpoint separation at K=" + std::to_string(*osc.midpoint_K) : "no midpoint separation");
    LimitWeights lw = limit_weights(tr);
    bool increasing = lw.even_running_max.size() >= 2;
    for (std::size_t i = 1; i < lw.even_running_max.size(); ++i)
      increasing = increasing && lw.even_running_max[i] > lw.even_running_max[i - 1];
    std::string rm;
    for (double r : lw.even_running_max) rm += fmt("%.6g ", r);
    add(g, "w1_running_max_increasing", increasing, rm);
    const double last = lw.even_running_max.empty() ? 0.0 : lw.even_running_max.back();
    add(g, "w1_running_max_exceeds_target", last > kWeightTarget, fmt("%.6g", last));
    add(g, "w1_inside_unit_interval", lw.all_inside_unit_interval);
  });
}

GroupResult verify_control(const RunConfig&, const std::vector<RatioTracePoint>& tr) {
  return run_group("control", [&](GroupResult& g) {
    OscillationSummary osc = oscillation(tr);
    add(g, "tagged_points_complete", osc.complete);
    add(g, "no_certified_separation", !osc.certified_K);
    add(g, "no_midpoint_separation", !osc.midpoint_K);
  });
}

VerifyReport run_verify(const RunConfig& cfg) {
  cfg.validate();
  Scenario scn = cfg.scenario();
  scn.validate();
  RunConfig control_cfg = cfg;
  control_cfg.control = true;
  Scenario control = control_cfg.scenario();
  control.validate();

  VerifyReport r;
  r.groups.push_back(verify_contfrac(cfg));
  r.groups.push_back(verify_flow_oracle(cfg));
  r.groups.push_back(verify_sandwich(cfg));
  r.groups.push_back(verify_short_curve_scaling(cfg));

  std::vector<RatioTracePoint> tr, ctr;
  GroupResult osc, ctl;
  auto t0 = std::chrono::steady_clock::now();
  try {
    tr = trace(scn, cfg.effective_jobs());
    osc = verify_oscillation(cfg, tr);
  } catch (const Error& e) {
    osc = {"oscillation", GroupStatus::error, {}, e.what(), 0.0};
  }
  osc.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t0 = std::chrono::steady_clock::now();
  try {
    ctr = trace(control, cfg.effective_jobs());
    ctl = verify_control(cfg, ctr);
  } catch (const Error& e) {
    ctl = {"control", GroupStatus::error, {}, e.what(), 0.0};
  }
  ctl.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.groups.push_back(std::move(osc));
  r.groups.push_back(std::move(ctl));
  return r;
}

}  // namespace teichflow
