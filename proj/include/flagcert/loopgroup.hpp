#pragma once

// 2x2 matrices over R((t)), Iwahori membership and cosets, Weyl
// representatives and the affine Bruhat decomposition of SL2 over a field.
//
// Borel convention: B is upper triangular, so the Iwahori subgroup is
//   I = { g in SL2(R[[t]]) : g21 in t R[[t]] }.

#include <optional>
#include <string>
#include <string_view>

#include "flagcert/affine_weyl.hpp"
#include "flagcert/laurent.hpp"
#include "flagcert/text.hpp"

namespace flagcert {

class LoopMatrix {
 public:
  // Raw matrix; entries must share a ring. Used for intermediates.
  explicit LoopMatrix(SeriesGrid entries);
  // Group member: the determinant must be exactly 1 (SingularInput otherwise).
  static LoopMatrix sl2(SeriesGrid entries);

  static LoopMatrix identity(const Ring& ring);
  static LoopMatrix diagonal(const LaurentSeries& a, const LaurentSeries& d);
  // [[1, x], [0, 1]] and [[1, 0], [x, 1]]
  static LoopMatrix upper(const LaurentSeries& x);
  static LoopMatrix lower(const LaurentSeries& x);
  static LoopMatrix from_ints(const Ring& ring, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  const Ring& ring() const { return entries_[0][0].ring(); }
  const SeriesGrid& entries() const { return entries_; }
  const LaurentSeries& operator()(int i, int j) const { return entries_.at(i).at(j); }
  bool is_exact() const;

  // Entrywise structural equality (same terms and precision).
  friend bool operator==(const LoopMatrix& a, const LoopMatrix& b) { return a.entries_ == b.entries_; }
  friend bool operator!=(const LoopMatrix& a, const LoopMatrix& b) { return !(a == b); }

 private:
  SeriesGrid entries_;
};

LoopMatrix mat_mul(const LoopMatrix& a, const LoopMatrix& b);
LaurentSeries mat_det(const LoopMatrix& a);
// Adjugate when det = 1, otherwise divides by the inverse determinant.
LoopMatrix mat_inv(const LoopMatrix& a);
LoopMatrix mat_neg(const LoopMatrix& a);
bool exactly_equal(const LoopMatrix& a, const LoopMatrix& b);

LoopMatrix mat_substitute(const LoopMatrix& a, const Substitution& s);
// Embed into a ring that contains every generator of a's ring by name.
LoopMatrix mat_embed(const LoopMatrix& a, const Ring& into);
// t -> lam * t entrywise.
LoopMatrix mat_rotate(const LoopMatrix& a, const Ring& into, std::string_view generator = "lam");

LoopMatrix matrix_parse(std::string_view text, const Ring& ring);
std::string matrix_print(const LoopMatrix& a);

// Certificate that g^-1 h lies in I.
struct IwahoriWitness {
  LoopMatrix factor;
  RingElement checked_determinant;
  Valuation lower_left_valuation;
};

// Throws IndeterminateMembership when the entries are too imprecise to decide.
bool is_in_iwahori(const LoopMatrix& g);

struct CosetResult {
  bool equal = false;
  std::optional<IwahoriWitness> witness;
};

// g I == h I; on success the witness satisfies g * factor == h exactly (re-verified).
CosetResult coset_equal(const LoopMatrix& g, const LoopMatrix& h);

// The same question for the Iwahori of the lower-triangular Borel, which is
// S I S^-1 with S = [[0,-1],[1,0]]; the witness factor lies in S I S^-1.
CosetResult coset_equal_lower_borel(const LoopMatrix& g, const LoopMatrix& h);

// t_{k alpha^vee} -> diag(t^k, t^-k), s -> [[0,-1],[1,0]]; products in order.
// Requires an element of the rank-one group.
LoopMatrix weyl_representative(const AffineWeylElement& w, const Ring& ring = rings::rationals());

// rep(vw)^-1 rep(v) rep(w) is diagonal with unit entries of R[[t]].
bool representative_coherence(const AffineWeylGroup& group, const AffineWeylElement& v, const AffineWeylElement& w);

struct BruhatCellResult {
  AffineWeylElement w;
  LoopMatrix left;
  LoopMatrix right;
};

// g = left * rep(w) * right with left, right in I(K[[t]]) for K = Q or Q(x).
// Input must be an exact SL2 matrix. `group` must be the A1 group.
BruhatCellResult bruhat_cell(const AffineWeylGroup& group, const LoopMatrix& g);

}  // namespace flagcert
