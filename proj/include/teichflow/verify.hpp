#pragma once

// Invariant suite behind `teichflow verify`. Each group reports pass, fail,
// skipped (the check could not run, e.g. the oracle window was too small) or
// error (a computation raised). Only pass counts as passed.

#include <string>
#include <vector>

#include "teichflow/config.hpp"

namespace teichflow {

enum class GroupStatus { pass, fail, skipped, error };
const char* to_string(GroupStatus s);

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct GroupResult {
  std::string name;
  GroupStatus status = GroupStatus::pass;
  std::vector<CheckResult> checks;
  std::string message;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<GroupResult> groups;
  bool all_passed() const;
  std::string to_json() const;
};

// Frozen thresholds from the first certified run.
inline constexpr long kScalingIndex = 5;  ///< spike at position kScalingIndex + 1
inline constexpr double kScalingBandLo = 4.5;
inline constexpr double kScalingBandHi = 5.5;
inline constexpr double kWeightTarget = 0.9;
inline constexpr int kOracleSamples = 200;

GroupResult verify_contfrac(const RunConfig& cfg);
GroupResult verify_flow_oracle(const RunConfig& cfg);
GroupResult verify_sandwich(const RunConfig& cfg);
GroupResult verify_short_curve_scaling(const RunConfig& cfg);
GroupResult verify_oscillation(const RunConfig& cfg, const std::vector<RatioTracePoint>& trace);
GroupResult verify_control(const RunConfig& cfg, const std::vector<RatioTracePoint>& control_trace);

/// Runs every group; the two traces are computed here.
VerifyReport run_verify(const RunConfig& cfg);

}  // namespace teichflow
