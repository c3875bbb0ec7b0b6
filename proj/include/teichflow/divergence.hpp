#pragma once

// Length-ratio trace along the two designated time sequences
//
//   t_{2k}   = T_{n_k - 1}(θ_s)              (just before the k-th spike takes effect)
//   t_{2k+1} = log((1 + θ_s²) q_{n_k}²)
//
// where θ_s is the spiked slope and n_k its k-th spike position. At every
// time the hyperbolic lengths of α_1, α_2 are bracketed by the collar
// (lower) and homotopy (upper) bounds of the two flat-shortest curves on
// their sheet.

#include <optional>
#include <string>
#include <vector>

#include "teichflow/contfrac.hpp"
#include "teichflow/flow.hpp"
#include "teichflow/lengths.hpp"
#include "teichflow/numerics.hpp"
#include "teichflow/surface.hpp"

namespace teichflow {

struct Scenario {
  SlitSurfaceConfig cfg;
  int spiked_sheet = 2;
  long k_max = 5;
  long samples = 2;  ///< generic times inside each gap between tagged times
  Precision prec;
  long oracle_cap = 1000000;
  double delta = 0.1;
  /// Spike values are allowed to stay at the base (no divergence expected).
  bool control = false;

  static Scenario default_scenario();
  /// Spikes replaced by the base element at the same positions.
  Scenario as_control() const;
  /// Sheets exchanged.
  Scenario swapped() const;

  /// Throws ConfigError when the slopes do not fit the construction:
  /// elements >= 3, the bounded sheet constant or periodic, the spiked sheet
  /// with strictly increasing spike values (unless control).
  void validate() const;

  const ContinuedFraction& spiked_slope() const { return cfg.slope(spiked_sheet); }
  std::vector<std::pair<std::size_t, mpz_class>> spikes() const;
};

/// Slopes of both sheets with convergents covering the whole trace.
struct ScenarioSlopes {
  Slope sheet1;
  Slope sheet2;

  const Slope& sheet(int j) const { return j == 1 ? sheet1 : sheet2; }
};

ScenarioSlopes make_slopes(const Scenario& scn);

FlowTime even_time(const Scenario& scn, long k);
FlowTime odd_time(const Scenario& scn, long k);

struct OracleCheck {
  bool performed = false;
  std::string skipped_reason;
  LatticeVector first;
  LatticeVector second;
  bool first_matches = false;
  bool second_matches = false;
  bool second_in_candidates = false;
  bool tie = false;
};

struct AlphaBounds {
  Interval lower;  ///< collar estimator; its lo is the certified lower bound
  Interval upper;  ///< homotopy estimator; its hi is the certified upper bound
};

struct RatioTracePoint {
  FlowTime t = FlowTime::generic(0.0);
  TimeTag parity = TimeTag::generic;
  long k = 0;
  std::optional<ShortCurveState> state1;
  std::optional<ShortCurveState> state2;
  OracleCheck oracle1;
  OracleCheck oracle2;
  std::optional<AlphaBounds> alpha1;
  std::optional<AlphaBounds> alpha2;
  std::optional<Interval> ratio;  ///< [α1.lower.lo / α2.upper.hi, α1.upper.hi / α2.lower.lo]
  std::optional<Interval> w1;     ///< ℓ(α1) / (ℓ(α1) + ℓ(α2))
  std::optional<Interval> mod_bound;
  std::optional<Interval> ct_bound;

  // Diagnostics, not certified.
  std::optional<Interval> gamma_ratio;       ///< ℓ(γ)/(ℓ(α1)+ℓ(α2)) sandwich with C = 0
  std::optional<double> spike_growth_ratio;  ///< q_{1,j} / (q_{s,n_k-1} √a_{s,n_k}) at even times
  std::optional<Interval> alt_ratio;         ///< ratio with convergent second curves
  std::optional<Interval> collar_ratio;      ///< α2 upper with ℓ(second) ≈ 2 w(first)
  std::optional<Interval> second_hyp_collar; ///< [2 w(first) i(first, second), π Ext⁺(second)] on the spiked sheet

  std::vector<std::string> flags;
  std::optional<std::string> error;

  double ratio_mid() const { return ratio ? ratio->mid() : 0.0; }
  double w1_mid() const { return w1 ? w1->mid() : 0.0; }
};

/// Ratio point at t. Short curves come from the shortest-vector
/// predictions; whenever their denominators are at most oracle_cap they are
/// cross-checked by exhaustive search, and an oracle second curve differing
/// from the prediction replaces it (flagged).
RatioTracePoint ratio_at(const Scenario& scn, const ScenarioSlopes& slopes, const FlowTime& t);
RatioTracePoint ratio_at(const Scenario& scn, const FlowTime& t);

/// Tagged points for k = 1..k_max plus samples, sorted by t. Points are
/// independent and computed on `jobs` threads; errors are recorded per point.
std::vector<RatioTracePoint> trace(const Scenario& scn, unsigned jobs = 1);

struct LimitWeights {
  Interval accumulation;  ///< [min, max] of w1 midpoints over the trace
  std::vector<long> even_k;
  std::vector<double> even_running_max;  ///< running max of w1 midpoints over even times
  std::vector<std::optional<Interval>> gamma_ratios;
  bool all_inside_unit_interval = true;
};

LimitWeights limit_weights(const std::vector<RatioTracePoint>& tr);

struct OscillationSummary {
  std::vector<long> even_k, odd_k;
  std::vector<double> even_mid, odd_mid, even_lo, odd_hi;
  bool even_mid_increasing = false;  ///< strictly, for k >= 2
  /// Smallest K with min_{even k >= K} ratio.lo > max_{odd} ratio.hi.
  std::optional<long> certified_K;
  /// Same test on ratio midpoints (diagnostic).
  std::optional<long> midpoint_K;
  bool complete = false;  ///< every tagged point computed without error
};

OscillationSummary oscillation(const std::vector<RatioTracePoint>& tr);

}  // namespace teichflow
