#pragma once

// Run configuration shared by the CLI subcommands. The file format is one
// `key = value` per line; `#` starts a comment. Slopes use the pattern
// grammar of contfrac.hpp.

#include <string>
#include <string_view>

#include "teichflow/divergence.hpp"

namespace teichflow {

struct RunConfig {
  // Scenario.
  std::string theta1 = "a0=3,const:3";
  std::string theta2 = "a0=3,spiked:base=3,positions=2k,values=4^k";
  std::string s = "1/2";
  long k_max = 5;
  long samples = 2;
  bool control = false;
  double delta = 0.1;

  // Precision and oracle.
  int bits = 256;
  double target_width = 1e-30;
  long oracle_cap = 1000000;

  // Single-slope subcommands.
  std::string theta = "a0=3,const:3";
  long n = 10;
  double t_min = 0.0;  ///< 0 means: the slope's shortest-vector threshold
  double t_max = 0.0;  ///< 0 means: T_6 of the slope
  long t_count = 20;

  // Output.
  std::string format = "csv";
  std::string out;
  unsigned jobs = 0;  ///< 0 means: hardware concurrency

  /// Defaults with bits taken from $TEICHFLOW_BITS when set.
  static RunConfig defaults();

  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path);
  /// Sets one key; throws ConfigError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  std::string serialize() const;

  /// Checks the fields every subcommand uses; scenario() results are
  /// validated separately by the subcommands that run one.
  void validate() const;
  Precision precision() const;
  Scenario scenario() const;
  unsigned effective_jobs() const;

  bool operator==(const RunConfig&) const = default;
};

}  // namespace teichflow
