#include "flagcert/loopgroup.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "flagcert/errors.hpp"

namespace flagcert {

namespace {

enum class Decision { yes, no, unknown };

// Whether a lies in t^bound R[[t]].
Decision in_ideal(const LaurentSeries& a, std::int64_t bound) {
  if (!a.terms().empty() && a.terms().begin()->first < bound) return Decision::no;
  if (a.precision() && *a.precision() < bound) return Decision::unknown;
  return Decision::yes;
}

Decision is_one(const LaurentSeries& a) {
  switch (series_compare(a, LaurentSeries::one(a.ring())).kind) {
    case SeriesEquality::exact_equal:
      return Decision::yes;
    case SeriesEquality::equal_to_precision:
      return Decision::unknown;
    case SeriesEquality::unequal:
      break;
  }
  return Decision::no;
}

bool agrees(const LoopMatrix& a, const LoopMatrix& b) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto r = series_compare(a(i, j), b(i, j));
      if (r.kind == SeriesEquality::unequal) return false;
      if (r.kind == SeriesEquality::equal_to_precision && a.is_exact() && b.is_exact()) return false;
    }
  return true;
}

// Unit of R[[t]] given as an exact series.
bool is_power_series_unit(const LaurentSeries& a) {
  if (!a.is_exact() || a.terms().empty()) return false;
  if (a.terms().begin()->first != 0) return false;
  return a.terms().begin()->second.is_unit();
}

LoopMatrix adjugate(const LoopMatrix& a) {
  return LoopMatrix(SeriesGrid{{{a(1, 1), -a(0, 1)}, {-a(1, 0), a(0, 0)}}});
}

std::optional<std::int64_t> val_or_infinite(const LaurentSeries& a) {
  const Valuation v = series_val(a);
  if (v.is_infinite()) return std::nullopt;
  return v.value();
}

// min over entries of (v_ij + shift_ij), skipping zero entries.
std::int64_t shifted_min(const std::array<std::array<std::optional<std::int64_t>, 2>, 2>& v,
                         const std::array<std::array<std::int64_t, 2>, 2>& shift) {
  std::optional<std::int64_t> m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (v[i][j]) {
        const std::int64_t x = *v[i][j] + shift[i][j];
        m = m ? std::min(*m, x) : x;
      }
  if (!m) throw SingularInput("zero matrix");
  return *m;
}

// Solves rows * c = rhs over a field; free variables are set to zero.
std::optional<std::vector<RingElement>> solve_linear(std::vector<std::vector<RingElement>> rows,
                                                     std::vector<RingElement> rhs, std::size_t unknowns,
                                                     const Ring& field) {
  const std::size_t m = rows.size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < unknowns && r < m; ++c) {
    std::size_t p = r;
    while (p < m && rows[p][c].is_zero()) ++p;
    if (p == m) continue;
    std::swap(rows[p], rows[r]);
    std::swap(rhs[p], rhs[r]);
    const RingElement inv = rows[r][c].inverse();
    for (auto& x : rows[r]) x = x * inv;
    rhs[r] = rhs[r] * inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      const RingElement f = rows[i][c];
      for (std::size_t k = 0; k < unknowns; ++k) rows[i][k] = rows[i][k] - f * rows[r][k];
      rhs[i] = rhs[i] - f * rhs[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (!rhs[i].is_zero()) return std::nullopt;
  std::vector<RingElement> sol(unknowns, RingElement::zero(field));
  for (std::size_t i = 0; i < r; ++i) sol[pivot_col[i]] = rhs[i];
  return sol;
}

}  // namespace

// ---------------------------------------------------------------------------

LoopMatrix::LoopMatrix(SeriesGrid entries) : entries_(std::move(entries)) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) require_same_ring(entries_[0][0].ring(), entries_[i][j].ring(), "matrix entries");
}

LoopMatrix LoopMatrix::sl2(SeriesGrid entries) {
  LoopMatrix m(std::move(entries));
  const LaurentSeries det = mat_det(m);
  if (!det.is_exact_one()) throw SingularInput("determinant is " + series_print(det) + ", not 1");
  return m;
}

LoopMatrix LoopMatrix::identity(const Ring& ring) {
  return diagonal(LaurentSeries::one(ring), LaurentSeries::one(ring));
}

LoopMatrix LoopMatrix::diagonal(const LaurentSeries& a, const LaurentSeries& d) {
  return LoopMatrix(SeriesGrid{{{a, LaurentSeries::zero(a.ring())}, {LaurentSeries::zero(a.ring()), d}}});
}

LoopMatrix LoopMatrix::upper(const LaurentSeries& x) {
  const Ring& r = x.ring();
  return LoopMatrix(SeriesGrid{{{LaurentSeries::one(r), x}, {LaurentSeries::zero(r), LaurentSeries::one(r)}}});
}

LoopMatrix LoopMatrix::lower(const LaurentSeries& x) {
  const Ring& r = x.ring();
  return LoopMatrix(SeriesGrid{{{LaurentSeries::one(r), LaurentSeries::zero(r)}, {x, LaurentSeries::one(r)}}});
}

LoopMatrix LoopMatrix::from_ints(const Ring& ring, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  auto k = [&](std::int64_t v) { return LaurentSeries::constant(RingElement(ring, Rational(v))); };
  return LoopMatrix(SeriesGrid{{{k(a), k(b)}, {k(c), k(d)}}});
}

bool LoopMatrix::is_exact() const {
  for (const auto& row : entries_)
    for (const auto& e : row)
      if (!e.is_exact()) return false;
  return true;
}

LoopMatrix mat_mul(const LoopMatrix& a, const LoopMatrix& b) {
  require_same_ring(a.ring(), b.ring(), "mat_mul");
  SeriesGrid g{{{a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1)},
                {a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)}}};
  return LoopMatrix(std::move(g));
}

LaurentSeries mat_det(const LoopMatrix& a) { return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0); }

LoopMatrix mat_inv(const LoopMatrix& a) {
  const LaurentSeries det = mat_det(a);
  if (det.is_exact_one()) return adjugate(a);
  const LaurentSeries inv = series_invert(det, det.is_exact() ? std::nullopt : det.precision());
  const LoopMatrix adj = adjugate(a);
  return LoopMatrix(SeriesGrid{{{adj(0, 0) * inv, adj(0, 1) * inv}, {adj(1, 0) * inv, adj(1, 1) * inv}}});
}

LoopMatrix mat_neg(const LoopMatrix& a) { return LoopMatrix(SeriesGrid{{{-a(0, 0), -a(0, 1)}, {-a(1, 0), -a(1, 1)}}}); }

bool exactly_equal(const LoopMatrix& a, const LoopMatrix& b) {
  if (!same_ring(a.ring(), b.ring())) return false;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!exactly_equal(a(i, j), b(i, j))) return false;
  return true;
}

LoopMatrix mat_substitute(const LoopMatrix& a, const Substitution& s) {
  SeriesGrid g{{{series_substitute(a(0, 0), s), series_substitute(a(0, 1), s)},
                {series_substitute(a(1, 0), s), series_substitute(a(1, 1), s)}}};
  return LoopMatrix(std::move(g));
}

LoopMatrix mat_embed(const LoopMatrix& a, const Ring& into) {
  if (same_ring(a.ring(), into)) return a;
  return mat_substitute(a, Substitution::embedding(into));
}

LoopMatrix mat_rotate(const LoopMatrix& a, const Ring& into, std::string_view generator) {
  SeriesGrid g{{{series_rotate(a(0, 0), into, generator), series_rotate(a(0, 1), into, generator)},
                {series_rotate(a(1, 0), into, generator), series_rotate(a(1, 1), into, generator)}}};
  return LoopMatrix(std::move(g));
}

LoopMatrix matrix_parse(std::string_view text, const Ring& ring) { return LoopMatrix(grid_parse(text, ring)); }

std::string matrix_print(const LoopMatrix& a) { return grid_print(a.entries()); }

// ---------------------------------------------------------------------------

bool is_in_iwahori(const LoopMatrix& g) {
  std::vector<Decision> d;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d.push_back(in_ideal(g(i, j), (i == 1 && j == 0) ? 1 : 0));
  d.push_back(is_one(mat_det(g)));
  if (std::find(d.begin(), d.end(), Decision::no) != d.end()) return false;
  if (std::find(d.begin(), d.end(), Decision::unknown) != d.end())
    throw IndeterminateMembership("precision too low to decide Iwahori membership of " + matrix_print(g));
  return true;
}

CosetResult coset_equal(const LoopMatrix& g, const LoopMatrix& h) {
  require_same_ring(g.ring(), h.ring(), "coset_equal");
  const LoopMatrix x = mat_mul(mat_inv(g), h);
  if (!is_in_iwahori(x)) return {};
  if (!agrees(mat_mul(g, x), h)) throw std::logic_error("coset witness failed re-verification");
  const LaurentSeries& ll = x(1, 0);
  const Valuation llv = ll.is_exact() ? ll.valuation() : ll.valuation_lower_bound();
  return {true, IwahoriWitness{x, mat_det(x).coefficient(0), llv}};
}

CosetResult coset_equal_lower_borel(const LoopMatrix& g, const LoopMatrix& h) {
  const LoopMatrix s = LoopMatrix::from_ints(g.ring(), 0, -1, 1, 0);
  const LoopMatrix x = mat_mul(mat_inv(g), h);
  // x in S I S^-1  iff  S^-1 x S in I
  if (!is_in_iwahori(mat_mul(mat_mul(mat_inv(s), x), s))) return {};
  if (!agrees(mat_mul(g, x), h)) throw std::logic_error("coset witness failed re-verification");
  const LaurentSeries& ur = x(0, 1);
  const Valuation v = ur.is_exact() ? ur.valuation() : ur.valuation_lower_bound();
  return {true, IwahoriWitness{x, mat_det(x).coefficient(0), v}};
}

// ---------------------------------------------------------------------------

LoopMatrix weyl_representative(const AffineWeylElement& w, const Ring& ring) {
  if (w.translation().size() != 1) throw PreconditionViolated("loop-group representatives exist for SL2 only");
  const std::int64_t m = w.translation()[0];
  const RingElement one = RingElement::one(ring);
  LoopMatrix rep = LoopMatrix::diagonal(LaurentSeries::monomial(one, m), LaurentSeries::monomial(one, -m));
  if (!w.finite().is_identity()) rep = mat_mul(rep, LoopMatrix::from_ints(ring, 0, -1, 1, 0));
  return rep;
}

bool representative_coherence(const AffineWeylGroup& group, const AffineWeylElement& v, const AffineWeylElement& w) {
  const LoopMatrix x =
      mat_mul(mat_inv(weyl_representative(group.multiply(v, w))), mat_mul(weyl_representative(v), weyl_representative(w)));
  return x(0, 1).is_exact_zero() && x(1, 0).is_exact_zero() && is_power_series_unit(x(0, 0)) &&
         is_power_series_unit(x(1, 1));
}

// ---------------------------------------------------------------------------
// Bruhat cell
//
// The double coset I w I is read off from four minimal-valuation invariants
// of g (minimal entry valuation of g, D g D^-1, g D^-1 with D = diag(t, 1)).
// I w I = U_w w I with U_w the product of the root subgroups U_a over
// a > 0, w^-1(a) < 0, so the remaining step is a linear solve for the
// coefficients of u in U_w making w^-1 u^-1 g integral.

BruhatCellResult bruhat_cell(const AffineWeylGroup& group, const LoopMatrix& g) {
  if (group.rank() != 1) throw PreconditionViolated("bruhat_cell needs the A1 affine Weyl group");
  const Ring& K = g.ring();
  if (!(K->rank() == 0 || K->is_fraction_field()))
    throw PreconditionViolated("bruhat_cell works over Q or a rational-function field, not " + K->name());
  if (!g.is_exact()) throw IndeterminatePivot("bruhat_cell needs exact Laurent-polynomial entries");
  if (!mat_det(g).is_exact_one()) throw SingularInput("determinant is " + series_print(mat_det(g)) + ", not 1");

  std::array<std::array<std::optional<std::int64_t>, 2>, 2> v;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v[i][j] = val_or_infinite(g(i, j));
  const std::int64_t m0 = shifted_min(v, {{{0, 0}, {0, 0}}});
  const std::int64_t m1 = shifted_min(v, {{{0, 1}, {-1, 0}}});   // D g D^-1
  const std::int64_t m2 = shifted_min(v, {{{-1, 0}, {-1, 0}}});  // g D^-1

  AffineWeylElement w = group.identity();
  if (m0 == m1) {
    const std::int64_t m = (m2 == m0) ? -m0 : m0;
    w = group.translation({m});
  } else {
    const std::int64_t m = (m1 < m0) ? -m0 : m0;
    w = group.multiply(group.translation({m}), group.simple(1));
  }
  const LoopMatrix rep = weyl_representative(w, K);
  const LoopMatrix rep_inv = mat_inv(rep);

  const std::vector<AffineRoot> roots = group.inversions(group.inverse(w));
  const bool upper_roots = roots.empty() || roots.front().finite[0] > 0;
  for (const auto& a : roots)
    if ((a.finite[0] > 0) != upper_roots) throw std::logic_error("U_w is not a single root subgroup family");

  // b = rep^-1 g - sum_i c_i rep^-1 (t^{k_i} E) g
  const LoopMatrix base = mat_mul(rep_inv, g);
  std::vector<LoopMatrix> slopes;
  const RingElement one = RingElement::one(K);
  for (const auto& a : roots) {
    const LaurentSeries mono = LaurentSeries::monomial(one, a.level);
    const LaurentSeries z = LaurentSeries::zero(K);
    const LoopMatrix e = upper_roots ? LoopMatrix(SeriesGrid{{{z, mono}, {z, z}}})
                                     : LoopMatrix(SeriesGrid{{{z, z}, {mono, z}}});
    slopes.push_back(mat_neg(mat_mul(rep_inv, mat_mul(e, g))));
  }

  std::vector<std::vector<RingElement>> rows;
  std::vector<RingElement> rhs;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const std::int64_t bound = (i == 1 && j == 0) ? 1 : 0;
      std::set<std::int64_t> exps;
      for (const auto& [k, c] : base(i, j).terms())
        if (k < bound) exps.insert(k);
      for (const auto& s : slopes)
        for (const auto& [k, c] : s(i, j).terms())
          if (k < bound) exps.insert(k);
      for (std::int64_t k : exps) {
        std::vector<RingElement> row;
        for (const auto& s : slopes) row.push_back(s(i, j).coefficient(k));
        rows.push_back(std::move(row));
        rhs.push_back(-base(i, j).coefficient(k));
      }
    }
  }
  const auto sol = solve_linear(std::move(rows), std::move(rhs), roots.size(), K);
  if (!sol) throw std::logic_error("no U_w factor found for the computed cell " + group.print(w));

  LaurentSeries p = LaurentSeries::zero(K);
  for (std::size_t i = 0; i < roots.size(); ++i) p += LaurentSeries::monomial((*sol)[i], roots[i].level);
  const LoopMatrix left = upper_roots ? LoopMatrix::upper(p) : LoopMatrix::lower(p);
  const LoopMatrix right = mat_mul(rep_inv, mat_mul(mat_inv(left), g));

  if (!is_in_iwahori(left) || !is_in_iwahori(right))
    throw std::logic_error("Bruhat factors are not Iwahori elements");
  if (!exactly_equal(mat_mul(mat_mul(left, rep), right), g))
    throw std::logic_error("Bruhat reconstruction identity failed");
  return {w, left, right};
}

}  // namespace flagcert
