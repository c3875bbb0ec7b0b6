#pragma once

// Continued-fraction slopes θ = [a0; a1, a2, ...] described by lazy element
// patterns, their exact convergents, and outward-rounded enclosures of θ.
//
// Slope pattern grammar (CLI and config files):
//
//   [a0=N,]const:C                          a_i = C for i >= 1
//   [a0=N,]periodic:C1,C2,...               a_i = C_{(i-1) mod len}
//   [a0=N,]spiked:base=B,positions=P,values=V
//
// P and V are integer expressions in k (integers, k, + - * ^, parentheses,
// implicit products such as "2k"). The k-th spike (k = 1, 2, ...) puts
// a_{P(k)} = V(k); every other element is B. A position expression that
// does not mention k describes a single spike. a0 defaults to 0.

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teichflow/numerics.hpp"

namespace teichflow {

/// n-th convergent p/q of a slope; n = -1 is the seed 1/0.
struct Convergent {
  long n = 0;
  mpz_class p;
  mpz_class q;

  bool operator==(const Convergent&) const = default;
};

/// Integer expression in one variable k.
class KExpression {
 public:
  static KExpression parse(std::string_view text);
  mpz_class evaluate(long k) const;
  bool depends_on_k() const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

class ContinuedFraction {
 public:
  enum class Kind { constant, periodic, spiked };

  /// [0; 1, 1, 1, ...].
  ContinuedFraction() = default;

  static ContinuedFraction parse(std::string_view text);
  static ContinuedFraction constant(long a0, long value);
  static ContinuedFraction periodic(long a0, std::vector<long> period);
  static ContinuedFraction spiked(long a0, long base, std::string_view positions, std::string_view values);

  /// a_i for any i >= 0.
  mpz_class element(std::size_t i) const;
  /// a_0 .. a_n.
  std::vector<mpz_class> elements(std::size_t n) const;
  const mpz_class& a0() const { return a0_; }
  Kind kind() const { return kind_; }

  /// Canonical pattern string, `a0=N,<pattern>`; parse(to_string()) == *this.
  std::string to_string() const;
  std::string pattern_string() const;

  /// Elements a_i (i >= 1) bounded above: constant and periodic patterns.
  bool bounded() const { return kind_ != Kind::spiked; }
  /// Smallest element a_i, i >= 1, among constant/periodic patterns and
  /// the base of a spiked one (spike values are checked separately).
  mpz_class min_element() const;

  /// Spike metadata; empty/zero for non-spiked patterns.
  std::optional<std::size_t> spike_position(long k) const;
  mpz_class spike_value(long k) const;
  const mpz_class& base() const { return base_; }
  /// The same slope with every spike replaced by the base element.
  ContinuedFraction without_spikes() const;
  /// The same spike positions with every value set to the base.
  ContinuedFraction flattened_spikes() const;

  bool operator==(const ContinuedFraction& other) const { return to_string() == other.to_string(); }

 private:
  void validate() const;

  Kind kind_ = Kind::constant;
  mpz_class a0_;
  mpz_class base_ = 1;             // constant value or spike base
  std::vector<mpz_class> period_;  // periodic only
  std::optional<KExpression> positions_;
  std::optional<KExpression> values_;
};

/// Exact convergents 0..n_max by the three-term recurrence.
std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t n_max);

/// Enclosure [p_{2n}/q_{2n}, p_{2n+1}/q_{2n+1}] for the smallest n whose
/// rational width 1/(q_{2n} q_{2n+1}) is at most target_width.
Interval theta_enclosure(const ContinuedFraction& cf, double target_width, int bits = 256);
/// Same, with the width requirement given as q_{2n} q_{2n+1} >= min_product.
Interval theta_enclosure(const ContinuedFraction& cf, const mpz_class& min_product, int bits);

/// Enclosure of |p_n - θ q_n|; throws InsufficientPrecision when the
/// enclosure of p_n - θ q_n contains 0.
Interval approximation_gap(const ContinuedFraction& cf, std::size_t n, const Interval& theta);

/// A slope together with its convergents up to a fixed index and an
/// enclosure of θ tight enough to resolve every gap |q_n θ - p_n| below
/// that index with ~64 bits of relative accuracy. Immutable.
class Slope {
 public:
  Slope(ContinuedFraction cf, std::size_t max_index, Precision prec = {});

  /// A slope whose convergents cover every minimizing time up to t_max.
  static Slope covering(ContinuedFraction cf, double t_max, Precision prec = {});

  const ContinuedFraction& fraction() const { return cf_; }
  const Precision& precision() const { return prec_; }
  int bits() const { return prec_.bits; }
  /// Largest index usable as a shortest-curve index; convergents and
  /// elements are stored through max_index() + 2.
  std::size_t max_index() const { return max_index_; }
  const Convergent& convergent(long n) const;
  const mpz_class& element(std::size_t i) const;
  const Interval& theta() const { return theta_; }

  /// q_n θ - p_n.
  Interval signed_gap(long n) const;
  /// |q_n θ - p_n|; throws InsufficientPrecision unless sign-definite.
  Interval gap(long n) const;

  /// The same slope at doubled precision.
  Slope refined() const;

 private:
  ContinuedFraction cf_;
  std::size_t max_index_;
  Precision prec_;
  std::vector<Convergent> convergents_;  // index n stored at n + 1
  std::vector<mpz_class> elements_;
  Interval theta_;
};

}  // namespace teichflow
