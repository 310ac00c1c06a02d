#pragma once

// Exact coefficient rings: Q, truncated polynomial rings such as the dual
// numbers Q[eps]/(eps^2), polynomial and Laurent-polynomial rings in a few
// named generators, and the rational-function field Q(eps).

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flagcert/rational.hpp"

namespace flagcert {

struct Generator {
  std::string name;
  bool invertible = false;            // Laurent generator: negative powers allowed
  std::optional<int> nilpotency;      // name^k = 0 for k >= *nilpotency
};

// Describes a coefficient ring. The empty descriptor is Q.
//
// A fraction-field descriptor has exactly one generator, which is neither
// invertible nor nilpotent as a ring generator; elements are reduced
// quotients of polynomials in it.
class RingDescriptor {
 public:
  explicit RingDescriptor(std::vector<Generator> generators, bool fraction_field = false);

  const std::vector<Generator>& generators() const { return generators_; }
  std::size_t rank() const { return generators_.size(); }
  bool is_fraction_field() const { return fraction_field_; }
  bool is_field() const { return fraction_field_ || generators_.empty(); }
  bool has_nilpotents() const;

  std::optional<std::size_t> index_of(std::string_view name) const;
  const Generator& generator(std::size_t i) const { return generators_.at(i); }

  // Human-readable name, e.g. "Q[lam,lam^-1,eps]" or "Q[eps]/(eps^2)".
  std::string name() const;

  bool operator==(const RingDescriptor& o) const;

 private:
  std::vector<Generator> generators_;
  bool fraction_field_ = false;
};

using Ring = std::shared_ptr<const RingDescriptor>;

bool same_ring(const Ring& a, const Ring& b);
void require_same_ring(const Ring& a, const Ring& b, std::string_view context);

namespace rings {
Ring rationals();
Ring dual(std::string name = "eps");               // Q[x]/(x^2)
Ring truncated(std::string name, int order);       // Q[x]/(x^order)
Ring polynomial(std::string name = "eps");         // Q[x]
Ring laurent(std::string name = "eps");            // Q[x, x^-1]
Ring rational_functions(std::string name = "eps"); // Q(x)
Ring make(std::vector<Generator> generators, bool fraction_field = false);
}  // namespace rings

using Exponents = std::vector<std::int64_t>;
using TermMap = std::map<Exponents, Rational>;

// An element of a coefficient ring. Immutable value.
//
// Polynomial-type rings store a sparse map exponent-vector -> nonzero
// coefficient. Fraction-field elements store numerator and denominator maps
// (univariate), coprime, with monic denominator.
class RingElement {
 public:
  explicit RingElement(Ring ring);  // zero
  RingElement(Ring ring, TermMap terms);
  RingElement(Ring ring, const Rational& c);

  static RingElement zero(Ring ring) { return RingElement(std::move(ring)); }
  static RingElement one(Ring ring) { return RingElement(std::move(ring), Rational(1)); }
  static RingElement generator(Ring ring, std::string_view name, std::int64_t power = 1);
  // num / den in a fraction-field ring; both given as univariate term maps.
  static RingElement fraction(Ring ring, TermMap num, TermMap den);

  const Ring& ring() const { return ring_; }
  const TermMap& terms() const { return num_; }
  // Denominator terms; {0..0 : 1} outside fraction fields.
  const TermMap& denominator() const { return den_; }

  bool is_zero() const { return num_.empty(); }
  bool is_one() const;
  // The rational value when the element is a constant (no generators involved).
  std::optional<Rational> constant_value() const;
  // Constant term of the numerator (coefficient of the all-zero exponent).
  Rational constant_term() const;

  bool is_unit() const;
  RingElement inverse() const;  // throws NotAUnit
  RingElement pow(std::int64_t k) const;

  RingElement operator-() const;
  friend RingElement operator+(const RingElement& a, const RingElement& b);
  friend RingElement operator-(const RingElement& a, const RingElement& b);
  friend RingElement operator*(const RingElement& a, const RingElement& b);
  RingElement operator*(const Rational& c) const;
  RingElement& operator+=(const RingElement& o) { return *this = *this + o; }
  RingElement& operator-=(const RingElement& o) { return *this = *this - o; }
  RingElement& operator*=(const RingElement& o) { return *this = *this * o; }

  friend bool operator==(const RingElement& a, const RingElement& b);
  friend bool operator!=(const RingElement& a, const RingElement& b) { return !(a == b); }

 private:
  void normalize();
  // Stores an already coprime fraction, scaled to a monic denominator.
  void set_reduced_fraction(TermMap num, TermMap den);

  Ring ring_;
  TermMap num_;
  TermMap den_;
};

RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_mul(const RingElement& a, const RingElement& b);
RingElement ring_inverse(const RingElement& a);
bool ring_is_unit(const RingElement& a);

// Image of one source generator under a ring homomorphism. Either side may be
// omitted; the missing one is obtained by inversion in the target when needed.
// Giving only `inverse_value` lets eps := u^-1 land in Q[u], where positive
// powers of eps have no image.
struct GeneratorImage {
  std::optional<RingElement> value;
  std::optional<RingElement> inverse_value;
};

// A ring homomorphism determined by generator images. Source generators not
// listed map to the target generator of the same name.
class Substitution {
 public:
  explicit Substitution(Ring target) : target_(std::move(target)) {}

  // name := value
  Substitution& set(std::string name, RingElement value);
  // name := value, with name^-1 := inverse_value given explicitly.
  Substitution& set(std::string name, GeneratorImage image);
  // name := 1/other, where `other` is a generator of the target.
  Substitution& set_reciprocal(std::string name, std::string_view other);

  const Ring& target() const { return target_; }
  const GeneratorImage* find(std::string_view name) const;

  // Natural inclusion: every generator maps to its namesake.
  static Substitution embedding(Ring target) { return Substitution(std::move(target)); }

 private:
  Ring target_;
  std::map<std::string, GeneratorImage, std::less<>> images_;
};

RingElement ring_substitute(const RingElement& a, const Substitution& s);

namespace detail {
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
}  // namespace detail

}  // namespace flagcert
