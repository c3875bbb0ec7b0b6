#include "teichflow/contfrac.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "teichflow/errors.hpp"

namespace teichflow {

// ---------------------------------------------------------------------------
// KExpression

struct KExpression::Node {
  enum class Op { number, var, add, sub, mul, pow, neg };
  Op op = Op::number;
  mpz_class value;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const KExpression::Node>;
using Op = KExpression::Node::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, mpz_class value = 0) {
  auto n = std::make_shared<KExpression::Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->value = std::move(value);
  return n;
}

// expr  := term (('+' | '-') term)*
// term  := unary (['*'] unary)*
// unary := '-' unary | power
// power := atom ['^' unary]
// atom  := integer | 'k' | '(' expr ')'
class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("bad expression '" + std::string(text_) + "': " + why);
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek() == '+' || peek() == '-') {
      Op op = peek() == '+' ? Op::add : Op::sub;
      ++pos_;
      lhs = make(op, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (peek() == '*') {
        ++pos_;
        lhs = make(Op::mul, lhs, unary());
      } else if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == 'k' || peek() == '(') {
        lhs = make(Op::mul, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (peek() == '-') {
      ++pos_;
      return make(Op::neg, unary());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (peek() == '^') {
      ++pos_;
      return make(Op::pow, base, unary());
    }
    return base;
  }

  NodePtr atom() {
    char c = peek();
    if (c == 'k') {
      ++pos_;
      return make(Op::var);
    }
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (peek() != ')') fail("missing ')'");
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      return make(Op::number, nullptr, nullptr, mpz_class(std::string(text_.substr(start, pos_ - start))));
    }
    fail(at_end() ? "unexpected end" : "unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

mpz_class eval_node(const KExpression::Node& n, long k) {
  switch (n.op) {
    case Op::number: return n.value;
    case Op::var: return mpz_class(k);
    case Op::add: return eval_node(*n.lhs, k) + eval_node(*n.rhs, k);
    case Op::sub: return eval_node(*n.lhs, k) - eval_node(*n.rhs, k);
    case Op::mul: return eval_node(*n.lhs, k) * eval_node(*n.rhs, k);
    case Op::neg: return -eval_node(*n.lhs, k);
    case Op::pow: {
      mpz_class e = eval_node(*n.rhs, k);
      if (e < 0 || e > 100000) throw ConfigError("exponent out of range in spike expression");
      mpz_class r;
      mpz_pow_ui(r.get_mpz_t(), eval_node(*n.lhs, k).get_mpz_t(), e.get_ui());
      return r;
    }
  }
  return 0;
}

bool mentions_k(const KExpression::Node& n) {
  if (n.op == Op::var) return true;
  return (n.lhs && mentions_k(*n.lhs)) || (n.rhs && mentions_k(*n.rhs));
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

long parse_long(std::string_view s, const char* what) {
  std::string t(s);
  if (t.empty()) throw ConfigError(std::string("missing ") + what);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string("bad integer for ") + what + ": '" + t + "'");
  }
  if (used != t.size()) throw ConfigError(std::string("bad integer for ") + what + ": '" + t + "'");
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t at = s.find(sep, start);
    parts.emplace_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

constexpr long kValidatedSpikes = 16;

}  // namespace

KExpression KExpression::parse(std::string_view text) {
  KExpression e;
  e.text_ = strip_spaces(text);
  if (e.text_.empty()) throw ConfigError("empty spike expression");
  e.root_ = ExprParser(e.text_).parse();
  return e;
}

mpz_class KExpression::evaluate(long k) const { return eval_node(*root_, k); }

bool KExpression::depends_on_k() const { return mentions_k(*root_); }

// ---------------------------------------------------------------------------
// ContinuedFraction

ContinuedFraction ContinuedFraction::parse(std::string_view text_in) {
  std::string text = strip_spaces(text_in);
  long a0 = 0;
  std::string_view rest = text;
  if (rest.rfind("a0=", 0) == 0) {
    std::size_t comma = rest.find(',');
    if (comma == std::string_view::npos) throw ConfigError("slope pattern '" + text + "' has no pattern after a0");
    a0 = parse_long(rest.substr(3, comma - 3), "a0");
    rest = rest.substr(comma + 1);
  }
  std::size_t colon = rest.find(':');
  if (colon == std::string_view::npos) throw ConfigError("slope pattern '" + text + "' has no pattern kind");
  std::string_view kind = rest.substr(0, colon);
  std::string_view body = rest.substr(colon + 1);

  if (kind == "const") return constant(a0, parse_long(body, "const value"));
  if (kind == "periodic") {
    std::vector<long> period;
    for (const auto& item : split(body, ',')) period.push_back(parse_long(item, "periodic element"));
    return periodic(a0, std::move(period));
  }
  if (kind == "spiked") {
    std::optional<long> base;
    std::optional<std::string> positions, values;
    for (const auto& item : split(body, ',')) {
      std::size_t eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("spiked field without '=': '" + item + "'");
      std::string key = item.substr(0, eq);
      std::string value = item.substr(eq + 1);
      if (key == "base") base = parse_long(value, "spike base");
      else if (key == "positions") positions = value;
      else if (key == "values") values = value;
      else throw ConfigError("unknown spiked field '" + key + "'");
    }
    if (!base || !positions || !values) throw ConfigError("spiked pattern needs base, positions and values");
    return spiked(a0, *base, *positions, *values);
  }
  throw ConfigError("unknown pattern kind '" + std::string(kind) + "'");
}

ContinuedFraction ContinuedFraction::constant(long a0, long value) {
  ContinuedFraction cf;
  cf.kind_ = Kind::constant;
  cf.a0_ = a0;
  cf.base_ = value;
  cf.validate();
  return cf;
}

ContinuedFraction ContinuedFraction::periodic(long a0, std::vector<long> period) {
  ContinuedFraction cf;
  cf.kind_ = Kind::periodic;
  cf.a0_ = a0;
  for (long v : period) cf.period_.emplace_back(v);
  cf.validate();
  return cf;
}

ContinuedFraction ContinuedFraction::spiked(long a0, long base, std::string_view positions, std::string_view values) {
  ContinuedFraction cf;
  cf.kind_ = Kind::spiked;
  cf.a0_ = a0;
  cf.base_ = base;
  cf.positions_ = KExpression::parse(positions);
  cf.values_ = KExpression::parse(values);
  cf.validate();
  return cf;
}

void ContinuedFraction::validate() const {
  if (a0_ < 0) throw ConfigError("a0 must be non-negative");
  switch (kind_) {
    case Kind::constant:
      if (base_ < 1) throw ConfigError("constant element must be >= 1");
      break;
    case Kind::periodic:
      if (period_.empty()) throw ConfigError("periodic pattern needs at least one element");
      for (const auto& v : period_) {
        if (v < 1) throw ConfigError("periodic elements must be >= 1");
      }
      break;
    case Kind::spiked: {
      if (base_ < 1) throw ConfigError("spike base must be >= 1");
      const long count = positions_->depends_on_k() ? kValidatedSpikes : 1;
      mpz_class previous = 0;
      for (long k = 1; k <= count; ++k) {
        mpz_class pos = positions_->evaluate(k);
        if (pos <= previous) throw ConfigError("spike positions must be >= 1 and strictly increasing in k");
        if (values_->evaluate(k) < 1) throw ConfigError("spike values must be >= 1");
        previous = pos;
      }
      break;
    }
  }
}

std::optional<std::size_t> ContinuedFraction::spike_position(long k) const {
  if (kind_ != Kind::spiked || k < 1) return std::nullopt;
  if (!positions_->depends_on_k() && k != 1) return std::nullopt;
  mpz_class pos = positions_->evaluate(k);
  if (!pos.fits_ulong_p()) throw ConfigError("spike position overflow");
  return static_cast<std::size_t>(pos.get_ui());
}

mpz_class ContinuedFraction::spike_value(long k) const {
  if (kind_ != Kind::spiked || !spike_position(k)) return 0;
  mpz_class v = values_->evaluate(k);
  if (v < 1) throw DomainError("spike value " + v.get_str() + " is not a positive element");
  return v;
}

mpz_class ContinuedFraction::element(std::size_t i) const {
  if (i == 0) return a0_;
  switch (kind_) {
    case Kind::constant: return base_;
    case Kind::periodic: return period_[(i - 1) % period_.size()];
    case Kind::spiked: {
      const mpz_class target(static_cast<unsigned long>(i));
      mpz_class previous = 0;
      for (long k = 1;; ++k) {
        if (!positions_->depends_on_k() && k > 1) break;
        mpz_class pos = positions_->evaluate(k);
        if (pos <= previous) throw DomainError("spike positions stopped increasing at k=" + std::to_string(k));
        if (pos == target) return spike_value(k);
        if (pos > target) break;
        previous = pos;
      }
      return base_;
    }
  }
  return base_;
}

std::vector<mpz_class> ContinuedFraction::elements(std::size_t n) const {
  std::vector<mpz_class> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(element(i));
  return out;
}

mpz_class ContinuedFraction::min_element() const {
  if (kind_ == Kind::periodic) return *std::min_element(period_.begin(), period_.end());
  return base_;
}

std::string ContinuedFraction::pattern_string() const {
  switch (kind_) {
    case Kind::constant: return "const:" + base_.get_str();
    case Kind::periodic: {
      std::string s = "periodic:";
      for (std::size_t i = 0; i < period_.size(); ++i) s += (i ? "," : "") + period_[i].get_str();
      return s;
    }
    case Kind::spiked:
      return "spiked:base=" + base_.get_str() + ",positions=" + positions_->text() + ",values=" + values_->text();
  }
  return {};
}

std::string ContinuedFraction::to_string() const { return "a0=" + a0_.get_str() + "," + pattern_string(); }

ContinuedFraction ContinuedFraction::without_spikes() const {
  if (kind_ != Kind::spiked) return *this;
  return constant(a0_.get_si(), base_.get_si());
}

ContinuedFraction ContinuedFraction::flattened_spikes() const {
  if (kind_ != Kind::spiked) return *this;
  return spiked(a0_.get_si(), base_.get_si(), positions_->text(), base_.get_str());
}

// ---------------------------------------------------------------------------
// Convergents and θ

std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t n_max) {
  std::vector<Convergent> out;
  out.reserve(n_max + 1);
  mpz_class p_prev = 1, q_prev = 0;
  mpz_class p = cf.a0(), q = 1;
  out.push_back({0, p, q});
  for (std::size_t n = 1; n <= n_max; ++n) {
    mpz_class a = cf.element(n);
    mpz_class p_next = a * p + p_prev;
    mpz_class q_next = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
    out.push_back({static_cast<long>(n), p, q});
  }
  return out;
}

Interval theta_enclosure(const ContinuedFraction& cf, const mpz_class& min_product, int bits) {
  mpz_class p_prev = 1, q_prev = 0;
  mpz_class p = cf.a0(), q = 1;
  for (std::size_t n = 1;; ++n) {
    mpz_class a = cf.element(n);
    mpz_class p_next = a * p + p_prev;
    mpz_class q_next = a * q + q_prev;
    // (p, q) is convergent n-1, (p_next, q_next) convergent n.
    if (n % 2 == 1 && q * q_next >= min_product) {
      Interval even = Interval::rational(p, q, bits);
      Interval odd = Interval::rational(p_next, q_next, bits);
      return Interval(even.lo(), odd.hi());
    }
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
  }
}

Interval theta_enclosure(const ContinuedFraction& cf, double target_width, int bits) {
  if (!(target_width > 0.0)) throw DomainError("theta_enclosure target width must be positive");
  mpz_class min_product(std::ceil(1.0 / std::max(target_width, 1e-300)));
  return theta_enclosure(cf, min_product, bits);
}

Interval approximation_gap(const ContinuedFraction& cf, std::size_t n, const Interval& theta) {
  const Convergent c = convergents(cf, n).back();
  const int bits = theta.bits();
  Interval signed_gap = Interval::integer(c.p, bits) - theta * Interval::integer(c.q, bits);
  if (signed_gap.contains_zero()) {
    throw InsufficientPrecision("enclosure of p_" + std::to_string(n) + " - theta q_" + std::to_string(n) + " contains 0");
  }
  return abs(signed_gap);
}

// ---------------------------------------------------------------------------
// Slope

Slope::Slope(ContinuedFraction cf, std::size_t max_index, Precision prec)
    : cf_(std::move(cf)), max_index_(max_index), prec_(prec) {
  prec_.validate();
  const std::size_t top = max_index_ + 2;
  std::vector<Convergent> cs = convergents(cf_, top + 1);
  convergents_.reserve(top + 2);
  convergents_.push_back({-1, 1, 0});
  for (std::size_t i = 0; i <= top; ++i) convergents_.push_back(cs[i]);
  elements_ = cf_.elements(top);

  mpz_class needed(std::ceil(1.0 / std::max(prec_.target_width, 1e-300)));
  mpz_class resolve = cs[top].q * cs[top + 1].q;
  mpz_mul_2exp(resolve.get_mpz_t(), resolve.get_mpz_t(), 64);
  // Endpoints rounded to prec_.bits would swamp the rational width once
  // q_N q_{N+1} outgrows the mantissa, so θ carries extra bits when needed.
  const mpz_class& width = std::max(needed, resolve);
  const int theta_bits = std::max<int>(prec_.bits, static_cast<int>(mpz_sizeinbase(width.get_mpz_t(), 2)) + 64);
  theta_ = theta_enclosure(cf_, width, theta_bits);
}

Slope Slope::covering(ContinuedFraction cf, double t_max, Precision prec) {
  // T_n >= log(q_n q_{n+1}), so the first N with q_N q_{N+1} > e^{t_max + 1}
  // has T_N beyond t_max.
  const double bound = std::exp(std::min(t_max + 1.0, 700.0));
  mpz_class p_prev = 1, q_prev = 0, p = cf.a0(), q = 1;
  std::size_t n = 0;
  for (;; ++n) {
    mpz_class a = cf.element(n + 1);
    mpz_class q_next = a * q + q_prev;
    mpz_class p_next = a * p + p_prev;
    if (mpz_class(q * q_next).get_d() > bound) break;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
  }
  return Slope(std::move(cf), std::max<std::size_t>(n + 1, 2), prec);
}

const Convergent& Slope::convergent(long n) const {
  if (n < -1 || n > static_cast<long>(max_index_ + 2)) {
    throw InsufficientPrecision("convergent index " + std::to_string(n) + " outside the slope's range (max " +
                                std::to_string(max_index_ + 2) + ")");
  }
  return convergents_[static_cast<std::size_t>(n + 1)];
}

const mpz_class& Slope::element(std::size_t i) const {
  if (i >= elements_.size()) {
    throw InsufficientPrecision("element index " + std::to_string(i) + " outside the slope's range");
  }
  return elements_[i];
}

Interval Slope::signed_gap(long n) const {
  const Convergent& c = convergent(n);
  return Interval::integer(c.q, theta_.bits()) * theta_ - Interval::integer(c.p, theta_.bits());
}

Interval Slope::gap(long n) const {
  Interval g = signed_gap(n);
  if (g.contains_zero()) {
    throw InsufficientPrecision("enclosure of q_" + std::to_string(n) + " theta - p_" + std::to_string(n) + " contains 0");
  }
  return abs(g);
}

Slope Slope::refined() const { return Slope(cf_, max_index_, prec_.refined()); }

}  // namespace teichflow
