#pragma once

#include <random>

#include "teichflow/numerics.hpp"

namespace testing {

inline teichflow::Interval iv(double lo, double hi, int bits = 256) {
  return {teichflow::Real(lo, bits), teichflow::Real(hi, bits)};
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

}  // namespace testing
