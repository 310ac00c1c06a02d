#pragma once

// Formal Laurent series in t over a coefficient ring, with t-adic precision.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "flagcert/coeffring.hpp"

namespace flagcert {

// Valuation of a series: an integer, or +infinity for the exact zero series.
class Valuation {
 public:
  explicit Valuation(std::int64_t v) : value_(v) {}
  static Valuation infinity() { return Valuation(); }

  bool is_infinite() const { return !value_.has_value(); }
  std::int64_t value() const;  // throws on infinity

  friend bool operator==(const Valuation& a, const Valuation& b) { return a.value_ == b.value_; }
  friend bool operator<(const Valuation& a, const Valuation& b);
  friend bool operator<=(const Valuation& a, const Valuation& b) { return !(b < a); }
  friend bool operator>=(const Valuation& a, const Valuation& b) { return !(a < b); }
  friend bool operator>(const Valuation& a, const Valuation& b) { return b < a; }

  std::string to_string() const { return value_ ? std::to_string(*value_) : "inf"; }

 private:
  Valuation() = default;
  std::optional<std::int64_t> value_;
};

// Working-precision knob for operations that cannot be exact (series
// inversion of non-monomials). The precision is counted in t-orders beyond the
// largest |exponent| in play.
struct PrecisionPolicy {
  std::int64_t base_orders = 12;
  std::int64_t orders_per_n = 6;
  std::int64_t n = 1;
  std::optional<std::int64_t> override_orders;

  std::int64_t extra_orders() const;
  std::int64_t working_precision(std::int64_t max_abs_exponent) const;
};

class LaurentSeries {
 public:
  using TermTable = std::map<std::int64_t, RingElement>;

  explicit LaurentSeries(Ring ring);  // exact zero
  LaurentSeries(Ring ring, TermTable terms, std::optional<std::int64_t> precision = std::nullopt);

  static LaurentSeries zero(Ring ring) { return LaurentSeries(std::move(ring)); }
  static LaurentSeries one(Ring ring);
  static LaurentSeries constant(const RingElement& c);
  static LaurentSeries monomial(const RingElement& c, std::int64_t exponent);
  // 0 + O(t^precision)
  static LaurentSeries big_o(Ring ring, std::int64_t precision);

  const Ring& ring() const { return ring_; }
  const TermTable& terms() const { return terms_; }
  // nullopt means the series is an exactly known Laurent polynomial.
  const std::optional<std::int64_t>& precision() const { return precision_; }
  bool is_exact() const { return !precision_.has_value(); }
  bool is_exact_zero() const { return is_exact() && terms_.empty(); }
  bool is_exact_one() const;

  // Coefficient of t^k; throws IndeterminateValuation when k >= precision.
  RingElement coefficient(std::int64_t k) const;

  // Least exponent with nonzero coefficient; +inf for exact zero.
  Valuation valuation() const;
  // A lower bound on the valuation that never throws (precision if no terms).
  Valuation valuation_lower_bound() const;
  // Largest stored exponent; requires a nonzero series.
  std::int64_t max_exponent() const;
  std::int64_t max_abs_exponent() const;

  LaurentSeries truncated(std::int64_t precision) const;
  LaurentSeries shifted(std::int64_t k) const;  // multiply by t^k
  LaurentSeries operator-() const;
  LaurentSeries scaled(const RingElement& c) const;

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
  LaurentSeries& operator+=(const LaurentSeries& o) { return *this = *this + o; }
  LaurentSeries& operator-=(const LaurentSeries& o) { return *this = *this - o; }
  LaurentSeries& operator*=(const LaurentSeries& o) { return *this = *this * o; }

  // Structural equality: same ring, same terms, same precision.
  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b);
  friend bool operator!=(const LaurentSeries& a, const LaurentSeries& b) { return !(a == b); }

 private:
  void normalize();

  Ring ring_;
  TermTable terms_;
  std::optional<std::int64_t> precision_;
};

enum class SeriesEquality { exact_equal, equal_to_precision, unequal };

struct EqualityResult {
  SeriesEquality kind;
  std::optional<std::int64_t> precision;  // set for equal_to_precision
};

// Three-way equality: certification only ever accepts exact_equal.
EqualityResult series_compare(const LaurentSeries& a, const LaurentSeries& b);
bool exactly_equal(const LaurentSeries& a, const LaurentSeries& b);

Valuation series_val(const LaurentSeries& a);
LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b);

// Inverse of a. The reduced part of a (nilpotent generators set to zero) must
// have a unit leading coefficient. With target_precision = nullopt an exact
// Laurent-polynomial inverse is required (InexactResult otherwise); the search
// depth then comes from `policy`.
LaurentSeries series_invert(const LaurentSeries& a, std::optional<std::int64_t> target_precision,
                            const PrecisionPolicy& policy = {});

// Loop rotation t -> lam*t into a ring containing `generator` as an
// invertible generator; coefficients are mapped by generator name.
LaurentSeries series_rotate(const LaurentSeries& a, const Ring& into,
                            std::string_view generator = "lam");

// Apply a coefficient-ring homomorphism termwise.
LaurentSeries series_substitute(const LaurentSeries& a, const Substitution& s);

}  // namespace flagcert
