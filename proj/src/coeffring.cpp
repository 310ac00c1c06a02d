#include "flagcert/coeffring.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "flagcert/errors.hpp"

namespace flagcert {

namespace detail {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ExponentOverflow("exponent overflow in addition");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ExponentOverflow("exponent overflow in multiplication");
  return r;
}

}  // namespace detail

using detail::checked_add;

// ---------------------------------------------------------------------------
// RingDescriptor

RingDescriptor::RingDescriptor(std::vector<Generator> generators, bool fraction_field)
    : generators_(std::move(generators)), fraction_field_(fraction_field) {
  std::set<std::string> names;
  for (const auto& g : generators_) {
    if (g.name.empty() || g.name == "t" || g.name == "O")
      throw InvalidDescriptor("reserved or empty generator name '" + g.name + "'");
    if (!names.insert(g.name).second) throw InvalidDescriptor("duplicate generator name " + g.name);
    if (g.nilpotency) {
      if (*g.nilpotency < 1) throw InvalidDescriptor("nilpotency order must be positive");
      if (g.invertible) throw InvalidDescriptor("a nilpotent generator cannot be invertible");
    }
  }
  if (fraction_field_) {
    if (generators_.size() != 1 || generators_[0].invertible || generators_[0].nilpotency)
      throw InvalidDescriptor(
          "fraction fields are supported only for a single plain polynomial generator");
  }
}

bool RingDescriptor::has_nilpotents() const {
  return std::any_of(generators_.begin(), generators_.end(),
                     [](const Generator& g) { return g.nilpotency.has_value(); });
}

std::optional<std::size_t> RingDescriptor::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i].name == name) return i;
  return std::nullopt;
}

std::string RingDescriptor::name() const {
  if (generators_.empty()) return "Q";
  if (fraction_field_) return "Q(" + generators_[0].name + ")";
  std::string poly = "Q[";
  std::string quotient;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto& g = generators_[i];
    if (i) poly += ",";
    poly += g.name;
    if (g.invertible) poly += "," + g.name + "^-1";
    if (g.nilpotency) {
      quotient += quotient.empty() ? "/(" : ",";
      quotient += g.name + "^" + std::to_string(*g.nilpotency);
    }
  }
  poly += "]";
  if (!quotient.empty()) quotient += ")";
  return poly + quotient;
}

bool RingDescriptor::operator==(const RingDescriptor& o) const {
  if (fraction_field_ != o.fraction_field_ || generators_.size() != o.generators_.size())
    return false;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const auto& a = generators_[i];
    const auto& b = o.generators_[i];
    if (a.name != b.name || a.invertible != b.invertible || a.nilpotency != b.nilpotency)
      return false;
  }
  return true;
}

bool same_ring(const Ring& a, const Ring& b) { return a == b || *a == *b; }

void require_same_ring(const Ring& a, const Ring& b, std::string_view context) {
  if (!same_ring(a, b))
    throw DescriptorMismatch(std::string(context) + ": " + a->name() + " vs " + b->name());
}

namespace rings {

Ring make(std::vector<Generator> generators, bool fraction_field) {
  return std::make_shared<const RingDescriptor>(std::move(generators), fraction_field);
}

Ring rationals() {
  static const Ring q = make({});
  return q;
}

Ring truncated(std::string name, int order) {
  return make({Generator{std::move(name), false, order}});
}

Ring dual(std::string name) { return truncated(std::move(name), 2); }

Ring polynomial(std::string name) { return make({Generator{std::move(name), false, {}}}); }

Ring laurent(std::string name) { return make({Generator{std::move(name), true, {}}}); }

Ring rational_functions(std::string name) {
  return make({Generator{std::move(name), false, {}}}, true);
}

}  // namespace rings

// ---------------------------------------------------------------------------
// Dense univariate helpers for the fraction field.

namespace {

using Dense = std::vector<Rational>;  // low degree first, no trailing zeros

void trim(Dense& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Dense to_dense(const TermMap& m) {
  Dense d;
  for (const auto& [e, c] : m) {
    auto k = static_cast<std::size_t>(e.at(0));
    if (d.size() <= k) d.resize(k + 1);
    d[k] = c;
  }
  trim(d);
  return d;
}

TermMap from_dense(const Dense& d) {
  TermMap m;
  for (std::size_t k = 0; k < d.size(); ++k)
    if (!d[k].is_zero()) m.emplace(Exponents{static_cast<std::int64_t>(k)}, d[k]);
  return m;
}

// Polynomial long division a = q*b + r.
std::pair<Dense, Dense> divmod(Dense a, const Dense& b) {
  Dense q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
  const Rational lead_inv = b.back().inverse();
  while (!a.empty() && a.size() >= b.size()) {
    const std::size_t shift = a.size() - b.size();
    const Rational f = a.back() * lead_inv;
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

void make_monic(Dense& p) {
  if (p.empty() || p.back().is_one()) return;
  const Rational inv = p.back().inverse();
  for (auto& c : p) c *= inv;
}

// Monic remainders keep the coefficients of the Euclidean sequence small.
Dense gcd(Dense a, Dense b) {
  make_monic(a);
  make_monic(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    make_monic(r);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool is_constant(const Dense& p) { return p.size() <= 1; }

Dense dense_mul(const Dense& a, const Dense& b) {
  if (a.empty() || b.empty()) return {};
  Dense out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

Dense dense_add(Dense a, const Dense& b, bool subtract) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (subtract)
      a[i] -= b[i];
    else
      a[i] += b[i];
  }
  trim(a);
  return a;
}

Dense exact_quotient(const Dense& a, const Dense& g) { return is_constant(g) ? a : divmod(a, g).first; }

// Sum of reduced fractions an/ad +- bn/bd, reduced, via the gcd of the denominators.
std::pair<Dense, Dense> fraction_add(const Dense& an, const Dense& ad, const Dense& bn, const Dense& bd,
                                     bool subtract) {
  const Dense g = gcd(ad, bd);
  const Dense ad1 = exact_quotient(ad, g), bd1 = exact_quotient(bd, g);
  Dense num = dense_add(dense_mul(an, bd1), dense_mul(bn, ad1), subtract);
  if (num.empty()) return {{}, {Rational(1)}};
  Dense den = dense_mul(ad1, bd);
  if (!is_constant(g)) {
    const Dense g2 = gcd(num, g);
    num = exact_quotient(num, g2);
    den = exact_quotient(den, g2);
  }
  return {num, den};
}

// Product of reduced fractions, cancelling across before multiplying.
std::pair<Dense, Dense> fraction_mul(const Dense& an, const Dense& ad, const Dense& bn, const Dense& bd) {
  const Dense g1 = gcd(an, bd), g2 = gcd(bn, ad);
  return {dense_mul(exact_quotient(an, g1), exact_quotient(bn, g2)),
          dense_mul(exact_quotient(ad, g2), exact_quotient(bd, g1))};
}

TermMap multiply_terms(const TermMap& a, const TermMap& b) {
  TermMap out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < ea.size(); ++i) e[i] = checked_add(ea[i], eb[i]);
      auto [it, inserted] = out.emplace(std::move(e), ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

TermMap add_terms(TermMap a, const TermMap& b, bool subtract) {
  for (const auto& [e, c] : b) {
    auto [it, inserted] = a.emplace(e, subtract ? -c : c);
    if (!inserted) {
      if (subtract)
        it->second -= c;
      else
        it->second += c;
    }
  }
  std::erase_if(a, [](const auto& kv) { return kv.second.is_zero(); });
  return a;
}

TermMap unit_terms(std::size_t rank, const Rational& c = Rational(1)) {
  TermMap m;
  if (!c.is_zero()) m.emplace(Exponents(rank, 0), c);
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// RingElement

RingElement::RingElement(Ring ring) : ring_(std::move(ring)) {
  den_ = unit_terms(ring_->rank());
}

RingElement::RingElement(Ring ring, const Rational& c) : ring_(std::move(ring)) {
  num_ = unit_terms(ring_->rank(), c);
  den_ = unit_terms(ring_->rank());
}

RingElement::RingElement(Ring ring, TermMap terms) : ring_(std::move(ring)), num_(std::move(terms)) {
  den_ = unit_terms(ring_->rank());
  if (ring_->is_fraction_field()) {
    // Clear negative powers into the denominator.
    std::int64_t lowest = 0;
    for (const auto& [e, c] : num_) lowest = std::min(lowest, e.at(0));
    if (lowest < 0) {
      TermMap shifted;
      for (const auto& [e, c] : num_) shifted.emplace(Exponents{e[0] - lowest}, c);
      num_ = std::move(shifted);
      den_ = TermMap{{Exponents{-lowest}, Rational(1)}};
    }
  }
  normalize();
}

RingElement RingElement::generator(Ring ring, std::string_view name, std::int64_t power) {
  auto idx = ring->index_of(name);
  if (!idx) throw UnknownSymbol("generator '" + std::string(name) + "' not in " + ring->name());
  Exponents e(ring->rank(), 0);
  e[*idx] = power;
  TermMap m;
  m.emplace(std::move(e), Rational(1));
  return RingElement(std::move(ring), std::move(m));
}

RingElement RingElement::fraction(Ring ring, TermMap num, TermMap den) {
  if (!ring->is_fraction_field()) throw DescriptorMismatch("fraction() requires a fraction field");
  RingElement r(ring);
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  r.normalize();
  return r;
}

void RingElement::normalize() {
  std::erase_if(num_, [](const auto& kv) { return kv.second.is_zero(); });
  for (const auto& [e, c] : num_)
    if (e.size() != ring_->rank()) throw DescriptorMismatch("exponent vector length mismatch");

  if (ring_->is_fraction_field()) {
    for (const auto* m : {&num_, &den_})
      for (const auto& [e, c] : *m)
        if (e[0] < 0) throw NotInTargetRing("fraction components must be polynomials");
    Dense n = to_dense(num_);
    Dense d = to_dense(den_);
    if (d.empty()) throw NotAUnit("zero denominator in Q(" + ring_->generator(0).name + ")");
    if (n.empty()) {
      num_.clear();
      den_ = unit_terms(1);
      return;
    }
    Dense g = gcd(n, d);
    if (g.size() > 1) {
      n = divmod(n, g).first;
      d = divmod(d, g).first;
    }
    const Rational lead = d.back();
    if (!lead.is_one()) {
      const Rational inv = lead.inverse();
      for (auto& c : n) c *= inv;
      for (auto& c : d) c *= inv;
    }
    num_ = from_dense(n);
    den_ = from_dense(d);
    return;
  }

  const auto& gens = ring_->generators();
  for (auto it = num_.begin(); it != num_.end();) {
    bool vanishes = false;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::int64_t k = it->first[i];
      if (k < 0 && !gens[i].invertible)
        throw NotInTargetRing("negative power of non-invertible generator " + gens[i].name +
                              " in " + ring_->name());
      if (gens[i].nilpotency && k >= *gens[i].nilpotency) vanishes = true;
    }
    it = vanishes ? num_.erase(it) : std::next(it);
  }
}

bool RingElement::is_one() const {
  const Exponents zero(ring_->rank(), 0);
  return num_.size() == 1 && num_.begin()->first == zero && num_.begin()->second.is_one() &&
         den_.size() == 1 && den_.begin()->first == zero;
}

std::optional<Rational> RingElement::constant_value() const {
  const Exponents zero(ring_->rank(), 0);
  if (den_.size() != 1 || den_.begin()->first != zero) return std::nullopt;
  if (num_.empty()) return Rational(0);
  if (num_.size() == 1 && num_.begin()->first == zero) return num_.begin()->second / den_.begin()->second;
  return std::nullopt;
}

Rational RingElement::constant_term() const {
  auto it = num_.find(Exponents(ring_->rank(), 0));
  return it == num_.end() ? Rational(0) : it->second;
}

namespace {

// Terms with every nilpotent exponent zero: the image modulo the nilradical,
// re-embedded in the same ring.
TermMap reduced_part(const RingDescriptor& r, const TermMap& terms) {
  TermMap out;
  for (const auto& [e, c] : terms) {
    bool keep = true;
    for (std::size_t i = 0; i < r.rank(); ++i)
      if (r.generator(i).nilpotency && e[i] != 0) keep = false;
    if (keep) out.emplace(e, c);
  }
  return out;
}

}  // namespace

bool RingElement::is_unit() const {
  if (is_zero()) return false;
  if (ring_->is_fraction_field()) return true;
  // Units of a polynomial/Laurent ring over Q are c * (monomial in the
  // invertible generators); nilpotent parts do not affect invertibility.
  const TermMap red = reduced_part(*ring_, num_);
  if (red.size() != 1) return false;
  const auto& e = red.begin()->first;
  for (std::size_t i = 0; i < ring_->rank(); ++i)
    if (e[i] != 0 && !ring_->generator(i).invertible) return false;
  return true;
}

RingElement RingElement::inverse() const {
  if (!is_unit()) throw NotAUnit(ring_->name() + ": element is not a unit");
  if (ring_->is_fraction_field()) {
    RingElement r(ring_);
    r.num_ = den_;
    r.den_ = num_;
    r.normalize();
    return r;
  }
  const TermMap red = reduced_part(*ring_, num_);
  const auto& [e, c] = *red.begin();
  Exponents neg(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) neg[i] = -e[i];
  TermMap inv_terms;
  inv_terms.emplace(std::move(neg), c.inverse());
  const RingElement lead_inv(ring_, std::move(inv_terms));
  // a = m (1 + n) with n nilpotent: a^-1 = m^-1 * sum (-n)^k, a finite sum.
  const RingElement n = (*this) * lead_inv - one(ring_);
  RingElement sum = one(ring_);
  RingElement power = one(ring_);
  while (true) {
    power = power * (-n);
    if (power.is_zero()) break;
    sum += power;
  }
  return lead_inv * sum;
}

RingElement RingElement::pow(std::int64_t k) const {
  if (k < 0) return inverse().pow(-k);
  RingElement result = one(ring_);
  RingElement base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

void RingElement::set_reduced_fraction(TermMap num, TermMap den) {
  Dense n = to_dense(num), d = to_dense(den);
  if (n.empty()) d = {Rational(1)};
  const Rational inv = d.back().inverse();
  for (auto& c : n) c *= inv;
  for (auto& c : d) c *= inv;
  num_ = from_dense(n);
  den_ = from_dense(d);
}

RingElement RingElement::operator-() const {
  RingElement r(*this);
  for (auto& [e, c] : r.num_) c = -c;
  return r;
}

RingElement operator+(const RingElement& a, const RingElement& b) {
  require_same_ring(a.ring_, b.ring_, "ring_add");
  RingElement r(a.ring_);
  if (a.ring_->is_fraction_field()) {
    auto [n, d] = fraction_add(to_dense(a.num_), to_dense(a.den_), to_dense(b.num_), to_dense(b.den_), false);
    r.set_reduced_fraction(from_dense(n), from_dense(d));
    return r;
  } else {
    r.num_ = add_terms(a.num_, b.num_, false);
  }
  r.normalize();
  return r;
}

RingElement operator-(const RingElement& a, const RingElement& b) {
  require_same_ring(a.ring_, b.ring_, "ring_sub");
  RingElement r(a.ring_);
  if (a.ring_->is_fraction_field()) {
    auto [n, d] = fraction_add(to_dense(a.num_), to_dense(a.den_), to_dense(b.num_), to_dense(b.den_), true);
    r.set_reduced_fraction(from_dense(n), from_dense(d));
    return r;
  } else {
    r.num_ = add_terms(a.num_, b.num_, true);
  }
  r.normalize();
  return r;
}

RingElement operator*(const RingElement& a, const RingElement& b) {
  require_same_ring(a.ring_, b.ring_, "ring_mul");
  RingElement r(a.ring_);
  if (a.is_zero() || b.is_zero()) return r;
  if (a.ring_->is_fraction_field()) {
    auto [n, d] = fraction_mul(to_dense(a.num_), to_dense(a.den_), to_dense(b.num_), to_dense(b.den_));
    r.set_reduced_fraction(from_dense(n), from_dense(d));
    return r;
  }
  r.num_ = multiply_terms(a.num_, b.num_);
  r.normalize();
  return r;
}

RingElement RingElement::operator*(const Rational& c) const {
  if (c.is_zero()) return zero(ring_);
  RingElement r(*this);
  for (auto& [e, v] : r.num_) v *= c;
  return r;
}

bool operator==(const RingElement& a, const RingElement& b) {
  return same_ring(a.ring_, b.ring_) && a.num_ == b.num_ && a.den_ == b.den_;
}

RingElement ring_add(const RingElement& a, const RingElement& b) { return a + b; }
RingElement ring_mul(const RingElement& a, const RingElement& b) { return a * b; }
RingElement ring_inverse(const RingElement& a) { return a.inverse(); }
bool ring_is_unit(const RingElement& a) { return a.is_unit(); }

// ---------------------------------------------------------------------------
// Substitution

Substitution& Substitution::set(std::string name, RingElement value) {
  require_same_ring(value.ring(), target_, "substitution image");
  images_[std::move(name)] = GeneratorImage{std::move(value), std::nullopt};
  return *this;
}

Substitution& Substitution::set(std::string name, GeneratorImage image) {
  if (image.value) require_same_ring(image.value->ring(), target_, "substitution image");
  if (image.inverse_value) require_same_ring(image.inverse_value->ring(), target_, "substitution image");
  if (!image.value && !image.inverse_value) throw PreconditionViolated("empty generator image");
  images_[std::move(name)] = std::move(image);
  return *this;
}

Substitution& Substitution::set_reciprocal(std::string name, std::string_view other) {
  GeneratorImage img;
  img.inverse_value = RingElement::generator(target_, other);
  return set(std::move(name), std::move(img));
}

const GeneratorImage* Substitution::find(std::string_view name) const {
  auto it = images_.find(name);
  return it == images_.end() ? nullptr : &it->second;
}

namespace {

class ImageCache {
 public:
  ImageCache(const RingDescriptor& source, const Substitution& s) : source_(source), s_(s) {
    for (std::size_t i = 0; i < source.rank(); ++i) {
      const auto& g = source.generator(i);
      GeneratorImage img;
      if (const auto* given = s.find(g.name)) {
        img = *given;
      } else if (s.target()->index_of(g.name)) {
        img.value = RingElement::generator(s.target(), g.name);
      } else {
        throw NotInTargetRing("generator " + g.name + " has no image in " + s.target()->name());
      }
      images_.push_back(std::move(img));
    }
  }

  RingElement power(std::size_t i, std::int64_t k) {
    auto& img = images_[i];
    if (k >= 0) {
      if (!img.value) img.value = invert(*img.inverse_value, i);
      check_nilpotent(i);
      return img.value->pow(k);
    }
    if (!img.inverse_value) img.inverse_value = invert(*img.value, i);
    return img.inverse_value->pow(-k);
  }

 private:
  RingElement invert(const RingElement& x, std::size_t i) const {
    if (!x.is_unit())
      throw NotInTargetRing("image of " + source_.generator(i).name + " is not invertible in " +
                            s_.target()->name());
    return x.inverse();
  }

  // A nilpotent generator must go to a nilpotent element of the same order.
  void check_nilpotent(std::size_t i) {
    const auto& g = source_.generator(i);
    if (!g.nilpotency || checked_.count(i)) return;
    if (!images_[i].value->pow(*g.nilpotency).is_zero())
      throw NotInTargetRing("substitution for nilpotent generator " + g.name +
                            " is not a ring homomorphism");
    checked_.insert(i);
  }

  const RingDescriptor& source_;
  const Substitution& s_;
  std::vector<GeneratorImage> images_;
  std::set<std::size_t> checked_;
};

RingElement substitute_terms(const TermMap& terms, ImageCache& cache, const Ring& target) {
  RingElement acc = RingElement::zero(target);
  for (const auto& [e, c] : terms) {
    RingElement m(target, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) m *= cache.power(i, e[i]);
    acc += m;
  }
  return acc;
}

}  // namespace

RingElement ring_substitute(const RingElement& a, const Substitution& s) {
  const auto& source = *a.ring();
  if (same_ring(a.ring(), s.target()) && source.rank() == 0) return a;
  ImageCache cache(source, s);
  RingElement num = substitute_terms(a.terms(), cache, s.target());
  if (!source.is_fraction_field()) return num;
  RingElement den = substitute_terms(a.denominator(), cache, s.target());
  if (!den.is_unit())
    throw NotInTargetRing("denominator does not specialize to a unit in " + s.target()->name());
  return num * den.inverse();
}

}  // namespace flagcert
