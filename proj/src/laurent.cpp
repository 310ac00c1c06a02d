#include "flagcert/laurent.hpp"

#include <algorithm>
#include <cstdlib>

#include "flagcert/errors.hpp"

namespace flagcert {

using detail::checked_add;

std::int64_t Valuation::value() const {
  if (!value_) throw IndeterminateValuation("valuation of the exact zero series is +inf");
  return *value_;
}

bool operator<(const Valuation& a, const Valuation& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return *a.value_ < *b.value_;
}

std::int64_t PrecisionPolicy::extra_orders() const {
  return override_orders ? *override_orders : base_orders + orders_per_n * std::max<std::int64_t>(n, 1);
}

std::int64_t PrecisionPolicy::working_precision(std::int64_t max_abs_exponent) const {
  return checked_add(max_abs_exponent, extra_orders());
}

// ---------------------------------------------------------------------------

LaurentSeries::LaurentSeries(Ring ring) : ring_(std::move(ring)) {}

LaurentSeries::LaurentSeries(Ring ring, TermTable terms, std::optional<std::int64_t> precision)
    : ring_(std::move(ring)), terms_(std::move(terms)), precision_(precision) {
  normalize();
}

void LaurentSeries::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    require_same_ring(it->second.ring(), ring_, "series coefficient");
    const bool drop = it->second.is_zero() || (precision_ && it->first >= *precision_);
    it = drop ? terms_.erase(it) : std::next(it);
  }
}

LaurentSeries LaurentSeries::one(Ring ring) { return constant(RingElement::one(std::move(ring))); }

LaurentSeries LaurentSeries::constant(const RingElement& c) { return monomial(c, 0); }

LaurentSeries LaurentSeries::monomial(const RingElement& c, std::int64_t exponent) {
  TermTable t;
  t.emplace(exponent, c);
  return LaurentSeries(c.ring(), std::move(t));
}

LaurentSeries LaurentSeries::big_o(Ring ring, std::int64_t precision) {
  return LaurentSeries(std::move(ring), {}, precision);
}

bool LaurentSeries::is_exact_one() const {
  return is_exact() && terms_.size() == 1 && terms_.begin()->first == 0 &&
         terms_.begin()->second.is_one();
}

RingElement LaurentSeries::coefficient(std::int64_t k) const {
  if (precision_ && k >= *precision_)
    throw IndeterminateValuation("coefficient of t^" + std::to_string(k) + " lies beyond O(t^" +
                                 std::to_string(*precision_) + ")");
  auto it = terms_.find(k);
  return it == terms_.end() ? RingElement::zero(ring_) : it->second;
}

Valuation LaurentSeries::valuation() const {
  if (!terms_.empty()) return Valuation(terms_.begin()->first);
  if (is_exact()) return Valuation::infinity();
  throw IndeterminateValuation("series is zero up to O(t^" + std::to_string(*precision_) + ")");
}

Valuation LaurentSeries::valuation_lower_bound() const {
  if (!terms_.empty()) return Valuation(terms_.begin()->first);
  if (is_exact()) return Valuation::infinity();
  return Valuation(*precision_);
}

std::int64_t LaurentSeries::max_exponent() const {
  if (terms_.empty()) throw PreconditionViolated("max_exponent of a series without terms");
  return terms_.rbegin()->first;
}

std::int64_t LaurentSeries::max_abs_exponent() const {
  std::int64_t m = 0;
  if (!terms_.empty())
    m = std::max(std::llabs(terms_.begin()->first), std::llabs(terms_.rbegin()->first));
  if (precision_) m = std::max<std::int64_t>(m, std::llabs(*precision_));
  return m;
}

LaurentSeries LaurentSeries::truncated(std::int64_t precision) const {
  const std::int64_t p = precision_ ? std::min(*precision_, precision) : precision;
  return LaurentSeries(ring_, terms_, p);
}

LaurentSeries LaurentSeries::shifted(std::int64_t k) const {
  TermTable t;
  for (const auto& [e, c] : terms_) t.emplace(checked_add(e, k), c);
  std::optional<std::int64_t> p;
  if (precision_) p = checked_add(*precision_, k);
  return LaurentSeries(ring_, std::move(t), p);
}

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

LaurentSeries LaurentSeries::scaled(const RingElement& c) const {
  require_same_ring(c.ring(), ring_, "series scale");
  TermTable t;
  for (const auto& [e, v] : terms_) t.emplace(e, v * c);
  return LaurentSeries(ring_, std::move(t), precision_);
}

namespace {

std::optional<std::int64_t> min_precision(const std::optional<std::int64_t>& a,
                                          const std::optional<std::int64_t>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

LaurentSeries combine(const LaurentSeries& a, const LaurentSeries& b, bool subtract) {
  require_same_ring(a.ring(), b.ring(), "series_add");
  auto terms = a.terms();
  for (const auto& [e, c] : b.terms()) {
    auto it = terms.find(e);
    if (it == terms.end())
      terms.emplace(e, subtract ? -c : c);
    else
      it->second = subtract ? it->second - c : it->second + c;
  }
  return LaurentSeries(a.ring(), std::move(terms), min_precision(a.precision(), b.precision()));
}

}  // namespace

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, false); }
LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return combine(a, b, true); }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  require_same_ring(a.ring(), b.ring(), "series_mul");
  // Big-O calculus: (A + O(t^p)) (B + O(t^q)) = AB + O(t^min(p + v(B), q + v(A))).
  std::optional<std::int64_t> precision;
  if (a.is_exact_zero() || b.is_exact_zero()) return LaurentSeries(a.ring());
  const auto va = a.valuation_lower_bound();
  const auto vb = b.valuation_lower_bound();
  if (a.precision()) precision = checked_add(*a.precision(), vb.value());
  if (b.precision()) precision = min_precision(precision, checked_add(*b.precision(), va.value()));

  LaurentSeries::TermTable terms;
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      const std::int64_t e = checked_add(ea, eb);
      if (precision && e >= *precision) continue;
      auto it = terms.find(e);
      if (it == terms.end())
        terms.emplace(e, ca * cb);
      else
        it->second += ca * cb;
    }
  }
  return LaurentSeries(a.ring(), std::move(terms), precision);
}

bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
  return same_ring(a.ring_, b.ring_) && a.precision_ == b.precision_ && a.terms_ == b.terms_;
}

EqualityResult series_compare(const LaurentSeries& a, const LaurentSeries& b) {
  const LaurentSeries d = a - b;
  if (!d.terms().empty()) return {SeriesEquality::unequal, std::nullopt};
  if (d.is_exact()) return {SeriesEquality::exact_equal, std::nullopt};
  return {SeriesEquality::equal_to_precision, d.precision()};
}

bool exactly_equal(const LaurentSeries& a, const LaurentSeries& b) {
  return series_compare(a, b).kind == SeriesEquality::exact_equal;
}

Valuation series_val(const LaurentSeries& a) { return a.valuation(); }
LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b) { return a + b; }
LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b) { return a * b; }

// ---------------------------------------------------------------------------
// Inversion

namespace {

// Split a = reduced + nilpotent, where `reduced` keeps the coefficient terms
// free of nilpotent generators.
std::pair<LaurentSeries, LaurentSeries> split_nilpotent(const LaurentSeries& a) {
  const auto& ring = *a.ring();
  LaurentSeries::TermTable red;
  LaurentSeries::TermTable nil;
  for (const auto& [e, c] : a.terms()) {
    TermMap r;
    TermMap n;
    for (const auto& [ex, v] : c.terms()) {
      bool nilpotent = false;
      for (std::size_t i = 0; i < ring.rank(); ++i)
        if (ring.generator(i).nilpotency && ex[i] != 0) nilpotent = true;
      (nilpotent ? n : r).emplace(ex, v);
    }
    if (ring.is_fraction_field()) {
      red.emplace(e, c);
      continue;
    }
    if (!r.empty()) red.emplace(e, RingElement(a.ring(), std::move(r)));
    if (!n.empty()) nil.emplace(e, RingElement(a.ring(), std::move(n)));
  }
  return {LaurentSeries(a.ring(), std::move(red), a.precision()),
          LaurentSeries(a.ring(), std::move(nil), a.precision())};
}

// Long division of 1 by `a` (unit leading coefficient) by increasing powers
// of t, up to (exclusive) result exponent `target`. Exact if the remainder
// vanishes.
LaurentSeries divide_one(const LaurentSeries& a, std::int64_t target) {
  const std::int64_t v = a.valuation().value();
  const RingElement lead = a.terms().begin()->second;
  if (!lead.is_unit())
    throw NotAUnit("leading coefficient of the series is not a unit in " + a.ring()->name());
  const RingElement lead_inv = lead.inverse();

  LaurentSeries quotient(a.ring());
  LaurentSeries remainder = LaurentSeries::one(a.ring());
  while (!remainder.terms().empty()) {
    const std::int64_t m = remainder.terms().begin()->first;
    const std::int64_t k = m - v;
    if (k >= target) break;
    const LaurentSeries term = LaurentSeries::monomial(remainder.terms().begin()->second * lead_inv, k);
    quotient += term;
    remainder -= term * a;
  }
  if (remainder.is_exact_zero()) return quotient;
  std::int64_t precision = target;
  if (a.precision()) precision = std::min(precision, *a.precision() - 2 * v);
  return quotient.truncated(precision);
}

}  // namespace

LaurentSeries series_invert(const LaurentSeries& a, std::optional<std::int64_t> target_precision,
                            const PrecisionPolicy& policy) {
  if (a.is_exact_zero()) throw NotAUnit("the zero series is not invertible");
  auto [reduced, nil] = split_nilpotent(a);
  if (reduced.terms().empty()) {
    if (!reduced.is_exact()) throw IndeterminateValuation("leading term of the series is unknown");
    throw NotAUnit("series has no invertible part");
  }
  const std::int64_t target =
      target_precision ? *target_precision : policy.working_precision(a.max_abs_exponent());

  // Each factor of (nil * q)^k can lower the valuation; give the reduced
  // inverse enough headroom that the final result still reaches `target`.
  const std::int64_t v = reduced.valuation().value();
  std::int64_t depth = 0;
  for (const auto& g : a.ring()->generators())
    if (g.nilpotency) depth += *g.nilpotency - 1;
  std::int64_t headroom = 0;
  if (!nil.terms().empty()) headroom = depth * std::max<std::int64_t>(0, v - nil.terms().begin()->first);

  const LaurentSeries q = divide_one(reduced, target + headroom);
  // a^-1 = q * sum_k (-nil q)^k, finite because nil is nilpotent.
  const LaurentSeries step = -(nil * q);
  LaurentSeries sum = LaurentSeries::one(a.ring());
  LaurentSeries power = LaurentSeries::one(a.ring());
  for (std::int64_t k = 0; k < depth; ++k) {
    power = power * step;
    if (power.terms().empty()) break;
    sum += power;
  }
  LaurentSeries result = q * sum;
  if (!result.is_exact()) result = result.truncated(target);
  if (!target_precision && !result.is_exact())
    throw InexactResult("inverse is not a Laurent polynomial within " + std::to_string(target) +
                        " t-orders");
  return result;
}

// ---------------------------------------------------------------------------

LaurentSeries series_substitute(const LaurentSeries& a, const Substitution& s) {
  LaurentSeries::TermTable t;
  for (const auto& [e, c] : a.terms()) t.emplace(e, ring_substitute(c, s));
  return LaurentSeries(s.target(), std::move(t), a.precision());
}

LaurentSeries series_rotate(const LaurentSeries& a, const Ring& into, std::string_view generator) {
  auto idx = into->index_of(generator);
  if (!idx || !into->generator(*idx).invertible)
    throw DescriptorMismatch("rotation target " + into->name() + " lacks invertible generator " +
                             std::string(generator));
  if (a.ring()->index_of(generator))
    throw DescriptorMismatch("source ring already contains " + std::string(generator));
  const Substitution embed = Substitution::embedding(into);
  LaurentSeries::TermTable t;
  for (const auto& [e, c] : a.terms())
    t.emplace(e, ring_substitute(c, embed) * RingElement::generator(into, generator, e));
  return LaurentSeries(into, std::move(t), a.precision());
}

}  // namespace flagcert
