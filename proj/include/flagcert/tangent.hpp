#pragma once

// Tangent vectors at the base point of the affine flag manifold of SL2,
// in the basis of negative affine root spaces:
//   (e, k) <-> alpha + k delta   for k < 0   (upper-right t^k)
//   (f, k) <-> -alpha + k delta  for k <= 0  (lower-left t^k)
//   (h, k) <-> k delta           for k < 0   (diag(t^k, -t^k))

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"

#include "flagcert/affine_weyl.hpp"
#include "flagcert/loopgroup.hpp"

namespace flagcert {

enum class Channel { e, f, h };

std::string channel_name(Channel c);

// Trace-zero 2x2 matrix over R((t)).
class LieElement {
 public:
  explicit LieElement(LoopMatrix m);  // PreconditionViolated unless the trace is zero
  const LoopMatrix& matrix() const { return m_; }

 private:
  LoopMatrix m_;
};

class TangentVector {
 public:
  // Keyed by (level, channel) so iteration follows the serialization order.
  using Key = std::pair<std::int64_t, Channel>;

  explicit TangentVector(Ring coefficients) : ring_(std::move(coefficients)) {}

  const Ring& ring() const { return ring_; }
  const std::map<Key, RingElement>& components() const { return components_; }
  bool is_zero() const { return components_.empty(); }
  RingElement coefficient(Channel c, std::int64_t level) const;

  // Adds to a component; PreconditionViolated if (c, level) is not an n^- basis vector.
  void add(Channel c, std::int64_t level, const RingElement& value);

  friend bool operator==(const TangentVector& a, const TangentVector& b);

  // [{"channel": "h", "level": -1, "coeff": "1"}, ...]
  nlohmann::ordered_json to_json() const;
  // "(h,-1): 1; (f,-5): -1" or "0"
  std::string to_string() const;

 private:
  Ring ring_;
  std::map<Key, RingElement> components_;
};

bool is_nminus_basis(Channel c, std::int64_t level);

// Canonical representative modulo Lie I.
TangentVector project_nminus(const LieElement& x);

// x = eps-coefficient of g * ev(g)^-1, projected; `g` lives over a ring with
// generator "eps" of nilpotency order 2. Throws NotAtBasePoint unless ev(g) is in I.
TangentVector tangent_of_dual_point(const LoopMatrix& g, std::string_view eps = "eps");

// tangent_of_dual_point(rep^-1 g); NotAtExpectedPoint unless ev(g) lies in rep * I.
TangentVector translate_tangent(const LoopMatrix& rep, const LoopMatrix& g, std::string_view eps = "eps");

// The affine root whose root space contains v, when v has a single component.
std::optional<AffineRoot> root_label(const TangentVector& v);

// The ring obtained by deleting one generator (Q when nothing remains).
Ring ring_without(const Ring& ring, std::string_view generator);

}  // namespace flagcert
