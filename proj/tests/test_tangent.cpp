#include <gtest/gtest.h>

#include "flagcert/errors.hpp"
#include "flagcert/tangent.hpp"
#include "support.hpp"

using namespace flagcert;
using gen::Rng;

namespace {

const Ring& Q() {
  static const Ring q = rings::rationals();
  return q;
}

const Ring& D() {
  static const Ring d = rings::dual();
  return d;
}

LoopMatrix dual_mat(std::string_view text) { return LoopMatrix::sl2(grid_parse(text, D())); }

// Random trace-zero matrix over Q with exact entries in t^[-3, 3].
LoopMatrix random_lie(Rng& rng) {
  const LaurentSeries a = gen::random_series(rng, Q());
  return LoopMatrix(SeriesGrid{{{a, gen::random_series(rng, Q())}, {gen::random_series(rng, Q()), -a}}});
}

// 1 + eps x over the dual numbers; det = 1 + eps tr x = 1.
LoopMatrix exponential(const LoopMatrix& x) {
  const LoopMatrix ex = mat_embed(x, D());
  const LaurentSeries eps = LaurentSeries::constant(RingElement::generator(D(), "eps"));
  SeriesGrid g = ex.entries();
  for (auto& row : g)
    for (auto& e : row) e = e * eps;
  g[0][0] += LaurentSeries::one(D());
  g[1][1] += LaurentSeries::one(D());
  return LoopMatrix::sl2(g);
}

// Oracle for Lie I: diagonal and upper-right in Q[[t]], lower-left in tQ[[t]].
bool in_lie_iwahori(const LoopMatrix& x) {
  auto from = [](const LaurentSeries& s, std::int64_t k) { return s.terms().empty() || s.terms().begin()->first >= k; };
  return from(x(0, 0), 0) && from(x(0, 1), 0) && from(x(1, 0), 1);
}

// The matrix that a tangent vector names, so projection can be re-applied.
LoopMatrix matrix_of(const TangentVector& v) {
  LaurentSeries h = LaurentSeries::zero(Q()), e = h, f = h;
  for (const auto& [key, c] : v.components()) {
    const LaurentSeries m = LaurentSeries::monomial(c, key.first);
    if (key.second == Channel::h) h += m;
    if (key.second == Channel::e) e += m;
    if (key.second == Channel::f) f += m;
  }
  return LoopMatrix(SeriesGrid{{{h, e}, {f, -h}}});
}

TangentVector linear(const TangentVector& a, const TangentVector& b, const Rational& s) {
  TangentVector out = a;
  for (const auto& [key, c] : b.components()) out.add(key.second, key.first, c * s);
  return out;
}

}  // namespace

TEST(Tangent, ChannelsAndLabels) {
  const TangentVector h = tangent_of_dual_point(dual_mat("[[1 + eps*t^-1, 0], [0, 1 - eps*t^-1]]"));
  EXPECT_EQ(h.to_string(), "(h,-1): 1");
  EXPECT_EQ(*root_label(h), (AffineRoot{{0}, -1}));
  EXPECT_TRUE(root_label(h)->is_imaginary());

  const TangentVector e = tangent_of_dual_point(dual_mat("[[1, 2*eps*t^-2 + eps*t], [0, 1]]"));
  EXPECT_EQ(e.to_string(), "(e,-2): 2");
  EXPECT_EQ(*root_label(e), (AffineRoot{{1}, -2}));

  const TangentVector f = tangent_of_dual_point(dual_mat("[[1, 0], [-eps + eps*t, 1]]"));
  EXPECT_EQ(f.to_string(), "(f,0): -1");
  EXPECT_EQ(*root_label(f), (AffineRoot{{-1}, 0}));

  EXPECT_TRUE(tangent_of_dual_point(dual_mat("[[1, eps], [eps*t, 1]]")).is_zero());
  EXPECT_EQ(tangent_of_dual_point(dual_mat("[[1, eps], [eps*t, 1]]")).to_string(), "0");
  const TangentVector two = tangent_of_dual_point(dual_mat("[[1 + eps*t^-1, eps*t^-1], [0, 1 - eps*t^-1]]"));
  EXPECT_FALSE(root_label(two));
  EXPECT_EQ(two.to_json().dump(),
            R"([{"channel":"e","level":-1,"coeff":"1"},{"channel":"h","level":-1,"coeff":"1"}])");
}

TEST(Tangent, BasePointIsRequired) {
  EXPECT_THROW(tangent_of_dual_point(dual_mat("[[t^-1, 0], [0, t]]")), NotAtBasePoint);
  EXPECT_THROW(tangent_of_dual_point(LoopMatrix::identity(rings::polynomial())), PreconditionViolated);
  EXPECT_THROW(tangent_of_dual_point(LoopMatrix::identity(D()), "lam"), PreconditionViolated);
}

TEST(Tangent, Translation) {
  const LoopMatrix rep = matrix_parse("[[t^-2, 0], [0, t^2]]", Q());
  const LoopMatrix g = dual_mat("[[1, 0], [eps*t^-3, 1]]");
  const LoopMatrix moved = mat_mul(mat_embed(rep, D()), g);
  EXPECT_EQ(translate_tangent(rep, moved), tangent_of_dual_point(g));
  EXPECT_THROW(translate_tangent(rep, g), NotAtExpectedPoint);
}

TEST(Tangent, Preconditions) {
  EXPECT_THROW(LieElement(LoopMatrix::identity(Q())), PreconditionViolated);
  TangentVector v(Q());
  EXPECT_THROW(v.add(Channel::h, 0, RingElement::one(Q())), PreconditionViolated);
  EXPECT_THROW(v.add(Channel::e, 1, RingElement::one(Q())), PreconditionViolated);
  EXPECT_NO_THROW(v.add(Channel::f, 0, RingElement::one(Q())));
  EXPECT_THROW(project_nminus(LieElement(LoopMatrix(grid_parse("[[O(t^-1), 0], [0, O(t^-1)]]", Q())))),
               IndeterminateValuation);
  EXPECT_TRUE(project_nminus(LieElement(LoopMatrix(grid_parse("[[O(t^0), O(t^0)], [O(t^1), O(t^0)]]", Q())))).is_zero());
}

TEST(TangentProperty, ProjectionIsLinearAndIdempotent) {
  Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    const LoopMatrix x = random_lie(rng);
    const LoopMatrix y = random_lie(rng);
    const Rational s = gen::random_rational(rng);
    const TangentVector px = project_nminus(LieElement(x));
    const TangentVector py = project_nminus(LieElement(y));
    SeriesGrid combo = x.entries();
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) combo[r][c] = x(r, c) + y(r, c).scaled(RingElement(Q(), s));
    ASSERT_EQ(project_nminus(LieElement(LoopMatrix(combo))), linear(px, py, s));
    ASSERT_EQ(project_nminus(LieElement(matrix_of(px))), px);
  }
}

TEST(TangentProperty, KernelIsLieIwahori) {
  Rng rng(42);
  int inside = 0;
  for (int i = 0; i < 400; ++i) {
    LoopMatrix x = random_lie(rng);
    if (i % 2 == 0) {
      // Bias half the samples towards Lie I.
      const LaurentSeries a = gen::random_series(rng, Q(), 0, 3);
      x = LoopMatrix(SeriesGrid{{{a, gen::random_series(rng, Q(), 0, 3)}, {gen::random_series(rng, Q(), 1, 4), -a}}});
    }
    const bool zero = project_nminus(LieElement(x)).is_zero();
    ASSERT_EQ(zero, in_lie_iwahori(x)) << matrix_print(x);
    inside += zero;
  }
  EXPECT_GT(inside, 100);
  EXPECT_LT(inside, 390);
}

TEST(TangentProperty, WellDefinedOnCosets) {
  Rng rng(43);
  for (int i = 0; i < 200; ++i) {
    const LoopMatrix x = random_lie(rng);
    const LoopMatrix g = exponential(x);
    const TangentVector v = tangent_of_dual_point(g);
    ASSERT_EQ(v, project_nminus(LieElement(x)));
    const LoopMatrix moved = mat_mul(g, gen::random_iwahori(rng, D(), 4));
    ASSERT_EQ(tangent_of_dual_point(moved), v) << matrix_print(moved);
  }
}

TEST(TangentProperty, RotationScalesByWeight) {
  Rng rng(44);
  const Ring rot = rings::make({{"lam", true, std::nullopt}, {"eps", false, 2}});
  for (int i = 0; i < 100; ++i) {
    const LoopMatrix g = exponential(random_lie(rng));
    const Rational lam = gen::random_rational(rng, true);
    const LoopMatrix rotated = mat_substitute(mat_rotate(g, rot), Substitution(D()).set("lam", RingElement(D(), lam)));
    const TangentVector v = tangent_of_dual_point(g);
    const TangentVector w = tangent_of_dual_point(rotated);
    ASSERT_EQ(w.components().size(), v.components().size());
    for (const auto& [key, c] : v.components()) {
      RingElement weight = RingElement::one(Q());
      for (std::int64_t k = 0; k < std::abs(key.first); ++k)
        weight = weight * RingElement(Q(), key.first < 0 ? lam.inverse() : lam);
      ASSERT_EQ(w.coefficient(key.second, key.first), c * weight);
    }
  }
}
