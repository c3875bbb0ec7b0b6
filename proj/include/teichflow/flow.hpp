#pragma once

// The flow g_t^θ on Z²: rotate the slope-θ direction to the vertical,
// then contract it by e^{-t/2} and expand the horizontal direction by
// e^{t/2}. A vector (q, p) has flat length squared
//
//   l_t² = ((q + θp)² e^{-t} + e^t (p - θq)²) / (1 + θ²).

#include <gmpxx.h>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "teichflow/contfrac.hpp"
#include "teichflow/numerics.hpp"

namespace teichflow {

/// Integer vector (q, p), identified with -(q, p).
struct LatticeVector {
  mpz_class q;
  mpz_class p;

  /// Representative with q >= 0, and p > 0 when q = 0.
  static LatticeVector canonical(mpz_class q, mpz_class p);
  static LatticeVector of(const Convergent& c) { return canonical(c.q, c.p); }

  bool is_zero() const { return q == 0 && p == 0; }
  bool primitive() const;
  std::string to_string() const;

  bool operator==(const LatticeVector&) const = default;
  /// Lexicographic on (q, p); used for deterministic tie-breaking.
  bool operator<(const LatticeVector& other) const;
};

enum class TimeTag { generic, min_time, even, odd };

const char* to_string(TimeTag tag);

/// A flow time enclosure with its provenance. Tagged times remember how to
/// recompute themselves at a higher precision.
class FlowTime {
 public:
  using Evaluator = std::function<Interval(const Precision&)>;

  FlowTime(Interval value, TimeTag tag, long index, Evaluator evaluator);

  /// An untagged time given exactly by a binary64 value.
  static FlowTime generic(double t, int bits = 256);
  static FlowTime generic(Interval t);

  const Interval& value() const { return value_; }
  TimeTag tag() const { return tag_; }
  /// Convergent index for min_time, k for even/odd, -1 for generic.
  long index() const { return index_; }

  /// The same time re-enclosed at precision `prec`.
  FlowTime at(const Precision& prec) const;

 private:
  Interval value_;
  TimeTag tag_;
  long index_;
  Evaluator evaluator_;
};

/// Image of a lattice vector in the flat plane.
struct FlatVector {
  Interval x;
  Interval y;
};

FlatVector flow_image(const Interval& theta, const LatticeVector& v, const FlowTime& t);
/// g_t^θ as a 2x2 interval matrix, rows (x, y); x is expanded, y contracted.
std::array<std::array<Interval, 2>, 2> flow_matrix(const Interval& theta, const FlowTime& t);
Interval flow_determinant(const Interval& theta, const FlowTime& t);

/// l_t(v)². With `width_cap`, throws InsufficientPrecision for a wider result.
Interval flat_length_sq(const Interval& theta, const LatticeVector& v, const FlowTime& t,
                        std::optional<double> width_cap = std::nullopt);
/// Same, re-evaluating θ and t at doubled precision (up to `retries` times)
/// until the width cap is met.
Interval flat_length_sq(const Slope& slope, const LatticeVector& v, const FlowTime& t, double width_cap,
                        int retries = 4);

/// T_n = log((p_n θ + q_n) / |q_n θ - p_n|), the time at which l_t(q_n, p_n) is minimal.
FlowTime min_time(const Interval& theta, const Convergent& c);
FlowTime min_time(const Slope& slope, long n);

/// l²_{T_n}(q_n, p_n) = 2 (q_n + p_n θ) |q_n θ - p_n| / (1 + θ²).
Interval min_length_sq(const Interval& theta, const Convergent& c);

/// log((1 + a0 θ) / (θ - a0)): from this time on the shortest vector is a convergent.
Interval shortest_threshold(const Interval& theta, const mpz_class& a0);
Interval shortest_threshold(const Slope& slope);

struct ShortestPrediction {
  Convergent convergent;
  Interval length_sq;
  int bits = 0;  ///< precision at which the comparison was decided
};

/// The shortest vector at t, among the convergents bracketing t.
/// Throws BelowThreshold when t lies certainly below shortest_threshold,
/// AmbiguousAtPrecision when the candidates stay tied after `retries`
/// precision doublings.
ShortestPrediction predicted_shortest(const Slope& slope, const FlowTime& t, int retries = 4);

/// Vectors that can be second shortest while convergent n is shortest:
/// v_{n-1} + a v_n for 0 <= a <= a_{n+1}; a = 0 and a = a_{n+1} are the
/// neighbouring convergents. Valid for n >= 0 with v_{-1} = (0, 1).
std::vector<LatticeVector> second_shortest_candidates(const Slope& slope, long n);

struct SecondPrediction {
  LatticeVector vector;
  long a = 0;  ///< coefficient in v_{n-1} + a v_n
  Interval length_sq;
  int bits = 0;
  /// Other candidates stayed tied with this one after every refinement.
  bool tied = false;
};

/// The shortest of second_shortest_candidates(slope, n) at t. An unresolved
/// tie throws AmbiguousAtPrecision unless accept_tie is set; then the tied
/// candidate with the smallest a is returned and marked.
SecondPrediction predicted_second_shortest(const Slope& slope, long n, const FlowTime& t, int retries = 4,
                                           bool accept_tie = false);

struct OracleHit {
  LatticeVector vector;
  Interval length_sq;
  /// Length interval overlaps the next entry's (or the next vector's just
  /// outside the returned list) even at the highest precision tried.
  bool tied_with_next = false;
};

/// The k shortest primitive vectors at t by certified exhaustive search.
/// The search region grows until every vector outside it is provably longer
/// than the k-th hit; WindowTooSmall when that needs |q| > window.
std::vector<OracleHit> brute_force_k_shortest(const Interval& theta, const FlowTime& t, long window, int k);
/// Same, refining θ and t on interval overlaps (up to `retries` doublings).
std::vector<OracleHit> brute_force_k_shortest(const Slope& slope, const FlowTime& t, long window, int k,
                                              int retries = 4);

}  // namespace teichflow
