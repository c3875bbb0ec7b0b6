#pragma once

// Text serializations of trace results and the single-slope tables. All
// numbers are printed with 17 significant digits; interval lower endpoints
// are rounded down and upper endpoints up.

#include <string>
#include <vector>

#include "teichflow/divergence.hpp"

namespace teichflow {

std::string format_down(const Real& x);
std::string format_up(const Real& x);
std::string format_double(double x);

/// CSV header of the trace file.
extern const char* const kTraceCsvHeader;

std::string trace_csv(const std::vector<RatioTracePoint>& points);
std::string trace_json(const std::vector<RatioTracePoint>& points, const Scenario& scn);
/// Two gnuplot data blocks: t vs ratio (lo, mid, hi) and t vs w1 (lo, mid, hi).
std::string trace_plot(const std::vector<RatioTracePoint>& points);
/// Human-readable run summary (oscillation and weights).
std::string trace_summary(const std::vector<RatioTracePoint>& points);

struct ConvergentRow {
  Convergent c;
  std::optional<Interval> gap;  ///< |p_n - θ q_n|
  Interval bracket_lo;          ///< 1/(q_n + q_{n+1})
  Interval bracket_hi;          ///< 1/q_{n+1}
  std::string error;
};

std::vector<ConvergentRow> convergent_rows(const ContinuedFraction& cf, std::size_t n_max, const Precision& prec);
std::string convergents_csv(const std::vector<ConvergentRow>& rows);
std::string convergents_json(const std::vector<ConvergentRow>& rows);

struct ShortestRow {
  FlowTime t = FlowTime::generic(0.0);
  std::optional<Convergent> predicted;
  std::optional<LatticeVector> predicted_second;
  std::optional<LatticeVector> oracle;
  std::optional<LatticeVector> oracle_second;
  bool oracle_tie = false;
  bool second_in_candidates = false;
  std::optional<LengthInterval> lengths;
  std::vector<std::string> flags;
};

/// Rows at `count` evenly spaced times in [t_min, t_max] plus every T_n in
/// that range.
std::vector<ShortestRow> shortest_rows(const ContinuedFraction& cf, double t_min, double t_max, long count,
                                       const Rational& s, long window, const Precision& prec);
std::string shortest_csv(const std::vector<ShortestRow>& rows);
std::string shortest_json(const std::vector<ShortestRow>& rows);

}  // namespace teichflow
