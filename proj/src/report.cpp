#include "teichflow/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "teichflow/errors.hpp"

namespace teichflow {

using Json = nlohmann::ordered_json;

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_down(const Real& x) { return format_double(x.to_double(MPFR_RNDD)); }
std::string format_up(const Real& x) { return format_double(x.to_double(MPFR_RNDU)); }

const char* const kTraceCsvHeader =
    "t_lo,t_hi,parity,k,sheet1_q,sheet1_p,sheet2_q,sheet2_p,a1_lo,a1_hi,a2_lo,a2_hi,ratio_lo,ratio_mid,ratio_hi,"
    "w1_lo,w1_mid,w1_hi,mod_bound,ct_bound,flags";

namespace {

Json triple(const Interval& x) {
  return Json{{"lo", x.lo_down()}, {"mid", x.mid()}, {"hi", x.hi_up()}};
}

Json triple(const std::optional<Interval>& x) { return x ? triple(*x) : Json(nullptr); }

Json vec(const LatticeVector& v) { return Json{{"q", v.q.get_str()}, {"p", v.p.get_str()}}; }

Json lengths_json(const LengthInterval& l) {
  return Json{{"curve", l.curve.to_string()}, {"flat_sq", triple(l.flat_sq)}, {"ext", triple(l.ext)},
              {"hyp", triple(l.hyp)}, {"method", l.method}};
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

Json oracle_json(const OracleCheck& o) {
  if (!o.performed) return Json{{"performed", false}, {"reason", o.skipped_reason}};
  return Json{{"performed", true},           {"first", vec(o.first)},
              {"second", vec(o.second)},     {"first_matches", o.first_matches},
              {"second_matches", o.second_matches}, {"second_in_candidates", o.second_in_candidates},
              {"tie", o.tie}};
}

Json state_json(const ShortCurveState& st, const Slope& slope) {
  Json j;
  j["first"] = vec(LatticeVector::of(st.first_convergent));
  j["first_index"] = st.first_convergent.n;
  j["first_lengths"] = lengths_json(st.first);
  j["second"] = vec(st.second_vector);
  j["second_coefficient"] = st.second_coefficient;
  j["second_is_convergent"] = st.second_is_convergent;
  j["second_lengths"] = lengths_json(st.second);
  auto family = second_shortest_candidates(slope, st.first_convergent.n);
  if (family.size() <= 64) {
    Json c = Json::array();
    for (const auto& v : family) c.push_back(vec(v));
    j["candidates"] = c;
  }
  j["candidate_count"] = family.size();
  return j;
}

}  // namespace

std::string trace_csv(const std::vector<RatioTracePoint>& points) {
  std::ostringstream o;
  o << kTraceCsvHeader << "\n";
  for (const auto& p : points) {
    const Interval& t = p.t.value();
    o << format_down(t.lo()) << "," << format_up(t.hi()) << "," << to_string(p.parity) << "," << p.k << ",";
    if (p.state1 && p.state2) {
      o << p.state1->first_convergent.q.get_str() << "," << p.state1->first_convergent.p.get_str() << ","
        << p.state2->first_convergent.q.get_str() << "," << p.state2->first_convergent.p.get_str() << ",";
    } else {
      o << ",,,,";
    }
    if (p.alpha1 && p.alpha2 && p.ratio && p.w1) {
      o << format_down(p.alpha1->lower.lo()) << "," << format_up(p.alpha1->upper.hi()) << ","
        << format_down(p.alpha2->lower.lo()) << "," << format_up(p.alpha2->upper.hi()) << ","
        << format_down(p.ratio->lo()) << "," << format_double(p.ratio->mid()) << "," << format_up(p.ratio->hi())
        << "," << format_down(p.w1->lo()) << "," << format_double(p.w1->mid()) << "," << format_up(p.w1->hi()) << ",";
    } else {
      o << ",,,,,,,,,,";
    }
    o << (p.mod_bound ? format_up(p.mod_bound->hi()) : "") << ",";
    o << (p.ct_bound ? format_double(p.ct_bound->mid()) : "") << ",";
    o << join(p.flags, ';') << "\n";
  }
  return o.str();
}

std::string trace_json(const std::vector<RatioTracePoint>& points, const Scenario& scn) {
  ScenarioSlopes slopes = make_slopes(scn);
  Json root;
  root["scenario"] = Json{{"theta1", scn.cfg.theta1.to_string()},
                          {"theta2", scn.cfg.theta2.to_string()},
                          {"s", scn.cfg.s.to_string()},
                          {"spiked_sheet", scn.spiked_sheet},
                          {"k_max", scn.k_max},
                          {"samples", scn.samples},
                          {"bits", scn.prec.bits},
                          {"oracle_cap", scn.oracle_cap},
                          {"delta", scn.delta},
                          {"control", scn.control}};
  Json arr = Json::array();
  for (const auto& p : points) {
    Json j;
    j["t"] = triple(p.t.value());
    j["parity"] = to_string(p.parity);
    j["k"] = p.k;
    if (p.state1) j["sheet1"] = state_json(*p.state1, slopes.sheet1);
    if (p.state2) j["sheet2"] = state_json(*p.state2, slopes.sheet2);
    j["oracle1"] = oracle_json(p.oracle1);
    j["oracle2"] = oracle_json(p.oracle2);
    if (p.alpha1) j["alpha1"] = Json{{"lower", triple(p.alpha1->lower)}, {"upper", triple(p.alpha1->upper)}};
    if (p.alpha2) j["alpha2"] = Json{{"lower", triple(p.alpha2->lower)}, {"upper", triple(p.alpha2->upper)}};
    j["ratio"] = triple(p.ratio);
    j["w1"] = triple(p.w1);
    j["mod_bound"] = triple(p.mod_bound);
    j["ct_bound"] = triple(p.ct_bound);
    Json d;
    d["gamma_ratio"] = triple(p.gamma_ratio);
    d["spike_growth_ratio"] = p.spike_growth_ratio ? Json(*p.spike_growth_ratio) : Json(nullptr);
    d["alt_ratio"] = triple(p.alt_ratio);
    d["collar_ratio"] = triple(p.collar_ratio);
    d["second_hyp_collar"] = triple(p.second_hyp_collar);
    j["diagnostics"] = d;
    j["flags"] = p.flags;
    j["error"] = p.error ? Json(*p.error) : Json(nullptr);
    arr.push_back(j);
  }
  root["points"] = arr;

  OscillationSummary osc = oscillation(points);
  root["oscillation"] = Json{{"even_k", osc.even_k},
                             {"even_mid", osc.even_mid},
                             {"even_lo", osc.even_lo},
                             {"odd_k", osc.odd_k},
                             {"odd_mid", osc.odd_mid},
                             {"odd_hi", osc.odd_hi},
                             {"even_mid_increasing", osc.even_mid_increasing},
                             {"certified_K", osc.certified_K ? Json(*osc.certified_K) : Json(nullptr)},
                             {"midpoint_K", osc.midpoint_K ? Json(*osc.midpoint_K) : Json(nullptr)},
                             {"complete", osc.complete}};
  try {
    LimitWeights lw = limit_weights(points);
    root["limit_weights"] = Json{{"accumulation", triple(lw.accumulation)},
                                 {"even_k", lw.even_k},
                                 {"even_running_max", lw.even_running_max},
                                 {"all_inside_unit_interval", lw.all_inside_unit_interval}};
  } catch (const Error& e) {
    root["limit_weights"] = Json{{"error", e.what()}};
  }
  return root.dump(2) + "\n";
}

std::string trace_plot(const std::vector<RatioTracePoint>& points) {
  std::ostringstream o;
  o << "# ratio: t ratio_lo ratio_mid ratio_hi parity\n";
  for (const auto& p : points) {
    if (!p.ratio) continue;
    o << format_double(p.t.value().mid()) << " " << format_down(p.ratio->lo()) << " "
      << format_double(p.ratio->mid()) << " " << format_up(p.ratio->hi()) << " " << to_string(p.parity) << "\n";
  }
  o << "\n\n# w1: t w1_lo w1_mid w1_hi parity\n";
  for (const auto& p : points) {
    if (!p.w1) continue;
    o << format_double(p.t.value().mid()) << " " << format_down(p.w1->lo()) << " " << format_double(p.w1->mid())
      << " " << format_up(p.w1->hi()) << " " << to_string(p.parity) << "\n";
  }
  return o.str();
}

std::string trace_summary(const std::vector<RatioTracePoint>& points) {
  std::ostringstream o;
  OscillationSummary osc = oscillation(points);
  std::size_t errors = 0;
  for (const auto& p : points) errors += p.error ? 1 : 0;
  o << "points: " << points.size() << " (errors: " << errors << ")\n";
  o << "even ratio midpoints increasing for k >= 2: " << (osc.even_mid_increasing ? "yes" : "no") << "\n";
  o << "certified separation K: " << (osc.certified_K ? std::to_string(*osc.certified_K) : "none") << "\n";
  o << "midpoint separation K: " << (osc.midpoint_K ? std::to_string(*osc.midpoint_K) : "none") << "\n";
  try {
    LimitWeights lw = limit_weights(points);
    o << "w1 midpoint range: [" << format_double(lw.accumulation.lo_down()) << ", "
      << format_double(lw.accumulation.hi_up()) << "]\n";
    o << "running max of even w1 midpoints:";
    for (double r : lw.even_running_max) o << " " << format_double(r);
    o << "\n";
  } catch (const Error&) {
  }
  return o.str();
}

// ---------------------------------------------------------------------------
// Single-slope tables

std::vector<ConvergentRow> convergent_rows(const ContinuedFraction& cf, std::size_t n_max, const Precision& prec) {
  Slope slope(cf, n_max, prec);
  std::vector<ConvergentRow> rows;
  for (std::size_t i = 0; i <= n_max; ++i) {
    const long n = static_cast<long>(i);
    const Convergent& c = slope.convergent(n);
    const mpz_class& q_next = slope.convergent(n + 1).q;
    ConvergentRow row{c, std::nullopt, Interval::rational(1, c.q + q_next, prec.bits),
                      Interval::rational(1, q_next, prec.bits), {}};
    try {
      row.gap = slope.gap(n);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string convergents_csv(const std::vector<ConvergentRow>& rows) {
  std::ostringstream o;
  o << "n,p,q,gap_lo,gap_mid,gap_hi,bracket_lo,bracket_hi,error\n";
  for (const auto& r : rows) {
    o << r.c.n << "," << r.c.p.get_str() << "," << r.c.q.get_str() << ",";
    if (r.gap) o << format_down(r.gap->lo()) << "," << format_double(r.gap->mid()) << "," << format_up(r.gap->hi());
    else o << ",,";
    o << "," << format_down(r.bracket_lo.lo()) << "," << format_up(r.bracket_hi.hi()) << "," << r.error << "\n";
  }
  return o.str();
}

std::string convergents_json(const std::vector<ConvergentRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back(Json{{"n", r.c.n},
                       {"p", r.c.p.get_str()},
                       {"q", r.c.q.get_str()},
                       {"gap", triple(r.gap)},
                       {"bracket_lo", triple(r.bracket_lo)},
                       {"bracket_hi", triple(r.bracket_hi)},
                       {"error", r.error.empty() ? Json(nullptr) : Json(r.error)}});
  }
  return Json{{"convergents", arr}}.dump(2) + "\n";
}

std::vector<ShortestRow> shortest_rows(const ContinuedFraction& cf, double t_min, double t_max, long count,
                                       const Rational& s, long window, const Precision& prec) {
  Slope slope = Slope::covering(cf, t_max + 1.0, prec);
  std::vector<FlowTime> times;
  for (long i = 0; i < count; ++i) {
    const double t = count == 1 ? t_min : t_min + (t_max - t_min) * static_cast<double>(i) / static_cast<double>(count - 1);
    times.push_back(FlowTime::generic(t, prec.bits));
  }
  for (long n = 0; n <= static_cast<long>(slope.max_index()); ++n) {
    FlowTime T = min_time(slope, n);
    if (T.value().mid() >= t_min && T.value().mid() <= t_max) times.push_back(T);
  }
  std::stable_sort(times.begin(), times.end(),
                   [](const FlowTime& a, const FlowTime& b) { return a.value().mid() < b.value().mid(); });

  std::vector<ShortestRow> rows;
  for (const auto& t : times) {
    ShortestRow row;
    row.t = t;
    try {
      ShortestPrediction pred = predicted_shortest(slope, t);
      row.predicted = pred.convergent;
      row.predicted_second = predicted_second_shortest(slope, pred.convergent.n, t).vector;
      row.lengths = sheet_curve_lengths(slope.theta(), 1, LatticeVector::of(pred.convergent), s, t);
    } catch (const BelowThreshold&) {
      row.flags.push_back("below_threshold");
    } catch (const Error& e) {
      row.flags.push_back(std::string("error: ") + e.what());
    }
    try {
      auto hits = brute_force_k_shortest(slope, t, window, 2);
      row.oracle = hits[0].vector;
      row.oracle_second = hits[1].vector;
      row.oracle_tie = hits[0].tied_with_next || hits[1].tied_with_next;
      if (row.oracle_tie) row.flags.push_back("tie");
      if (row.predicted) {
        auto family = second_shortest_candidates(slope, row.predicted->n);
        row.second_in_candidates = std::find(family.begin(), family.end(), hits[1].vector) != family.end();
        if (!(hits[0].vector == LatticeVector::of(*row.predicted))) row.flags.push_back("oracle_mismatch");
      }
    } catch (const WindowTooSmall&) {
      row.flags.push_back("oracle_window");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string shortest_csv(const std::vector<ShortestRow>& rows) {
  std::ostringstream o;
  o << "t_lo,t_hi,tag,index,pred_q,pred_p,oracle_q,oracle_p,second_q,second_p,oracle_second_q,oracle_second_p,"
       "second_in_candidates,flat_lo,flat_hi,ext_lo,ext_hi,hyp_lo,hyp_hi,flags\n";
  for (const auto& r : rows) {
    const Interval& t = r.t.value();
    o << format_down(t.lo()) << "," << format_up(t.hi()) << "," << to_string(r.t.tag()) << "," << r.t.index() << ",";
    auto put = [&](const std::optional<LatticeVector>& v) {
      if (v) o << v->q.get_str() << "," << v->p.get_str() << ",";
      else o << ",,";
    };
    put(r.predicted ? std::optional<LatticeVector>(LatticeVector::of(*r.predicted)) : std::nullopt);
    put(r.oracle);
    put(r.predicted_second);
    put(r.oracle_second);
    o << (r.second_in_candidates ? "yes" : "no") << ",";
    if (r.lengths) {
      o << format_down(r.lengths->flat_sq.lo()) << "," << format_up(r.lengths->flat_sq.hi()) << ","
        << format_down(r.lengths->ext.lo()) << "," << format_up(r.lengths->ext.hi()) << ","
        << format_down(r.lengths->hyp.lo()) << "," << format_up(r.lengths->hyp.hi()) << ",";
    } else {
      o << ",,,,,,";
    }
    o << join(r.flags, ';') << "\n";
  }
  return o.str();
}

std::string shortest_json(const std::vector<ShortestRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["t"] = triple(r.t.value());
    j["tag"] = to_string(r.t.tag());
    j["index"] = r.t.index();
    j["predicted"] = r.predicted ? vec(LatticeVector::of(*r.predicted)) : Json(nullptr);
    j["oracle"] = r.oracle ? vec(*r.oracle) : Json(nullptr);
    j["predicted_second"] = r.predicted_second ? vec(*r.predicted_second) : Json(nullptr);
    j["oracle_second"] = r.oracle_second ? vec(*r.oracle_second) : Json(nullptr);
    j["second_in_candidates"] = r.second_in_candidates;
    j["lengths"] = r.lengths ? lengths_json(*r.lengths) : Json(nullptr);
    j["flags"] = r.flags;
    arr.push_back(j);
  }
  return Json{{"shortest", arr}}.dump(2) + "\n";
}

}  // namespace teichflow
