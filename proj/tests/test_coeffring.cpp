#include <gtest/gtest.h>

#include "flagcert/errors.hpp"
#include "flagcert/text.hpp"
#include "support.hpp"

using namespace flagcert;
using gen::Rng;

namespace {

struct NamedRing {
  const char* label;
  Ring ring;
};

std::vector<NamedRing> all_rings() {
  return {
      {"Q", rings::rationals()},
      {"dual", rings::dual()},
      {"truncated3", rings::truncated("eps", 3)},
      {"poly", rings::polynomial()},
      {"laurent", rings::laurent()},
      {"frac", rings::rational_functions()},
      {"rot", rings::make({{"lam", true, std::nullopt}, {"eps", false, std::nullopt}})},
      {"rot_dual", rings::make({{"lam", true, std::nullopt}, {"eps", false, 2}})},
  };
}

RingElement el(std::string_view text, const Ring& r) { return ring_parse(text, r); }

}  // namespace

TEST(Rational, ArithmeticAndParse) {
  EXPECT_EQ(Rational(6, -4), Rational(-3, 2));
  EXPECT_EQ(Rational::parse("5/7") + Rational(2, 7), Rational(1));
  EXPECT_EQ(Rational(3, 4).inverse(), Rational(4, 3));
  EXPECT_THROW(Rational(0).inverse(), NotAUnit);
  EXPECT_EQ(Rational(-10, 4).to_string(), "-5/2");
}

TEST(CoeffRing, DualNumbers) {
  const Ring d = rings::dual();
  EXPECT_EQ(d->name(), "Q[eps]/(eps^2)");
  const RingElement eps = RingElement::generator(d, "eps");
  EXPECT_TRUE((eps * eps).is_zero());
  EXPECT_EQ(el("1 + eps", d).inverse(), el("1 - eps", d));
  EXPECT_FALSE(eps.is_unit());
  EXPECT_THROW(eps.inverse(), NotAUnit);
  EXPECT_EQ(el("3 + 2*eps", d).inverse(), el("1/3 - 2/9*eps", d));
}

TEST(CoeffRing, LaurentAndPolynomial) {
  const Ring l = rings::laurent();
  EXPECT_TRUE((RingElement::generator(l, "eps") * RingElement::generator(l, "eps", -1)).is_one());
  EXPECT_TRUE(el("-2*eps^3", l).is_unit());
  EXPECT_FALSE(el("1 + eps", l).is_unit());
  const Ring p = rings::polynomial();
  EXPECT_FALSE(RingElement::generator(p, "eps").is_unit());
  EXPECT_THROW(RingElement::generator(p, "eps", -1), NotInTargetRing);
}

TEST(CoeffRing, FractionFieldNormalizes) {
  const Ring f = rings::rational_functions();
  const RingElement a = el("(eps^2 - 1)/(eps - 1)", f);
  EXPECT_EQ(a, el("eps + 1", f));
  const RingElement b = el("(2)/(2*eps + 4)", f);
  EXPECT_EQ(b * el("eps + 2", f), RingElement::one(f));
  EXPECT_TRUE(b.is_unit());
  EXPECT_THROW(RingElement::zero(f).inverse(), NotAUnit);
}

TEST(CoeffRing, MixingRingsIsRejected) {
  EXPECT_THROW(RingElement::one(rings::dual()) + RingElement::one(rings::polynomial()), DescriptorMismatch);
}

TEST(CoeffRing, InvalidDescriptors) {
  EXPECT_THROW(rings::make({{"eps", false, std::nullopt}, {"eps", false, std::nullopt}}), InvalidDescriptor);
  EXPECT_THROW(rings::make({{"eps", true, 2}}), InvalidDescriptor);
}

TEST(CoeffRing, SubstitutionReciprocal) {
  const Ring l = rings::laurent();
  const Ring u = rings::polynomial("u");
  Substitution s(u);
  s.set_reciprocal("eps", "u");
  EXPECT_EQ(ring_substitute(el("eps^-2 + 3*eps^-1", l), s), el("u^2 + 3*u", u));
  EXPECT_THROW(ring_substitute(el("eps", l), s), NotInTargetRing);
}

TEST(CoeffRing, SubstitutionIntoDual) {
  const Ring p = rings::polynomial();
  const Ring d = rings::dual();
  EXPECT_EQ(ring_substitute(el("eps^3 + eps + 2", p), Substitution::embedding(d)), el("eps + 2", d));
}

TEST(CoeffRingProperty, RingAxioms) {
  Rng rng(20240611);
  for (const auto& [label, ring] : all_rings()) {
    SCOPED_TRACE(label);
    const RingElement zero = RingElement::zero(ring), one = RingElement::one(ring);
    for (int i = 0; i < 150; ++i) {
      const RingElement a = gen::random_element(rng, ring);
      const RingElement b = gen::random_element(rng, ring);
      const RingElement c = gen::random_element(rng, ring);
      ASSERT_EQ((a + b) + c, a + (b + c));
      ASSERT_EQ((a * b) * c, a * (b * c));
      ASSERT_EQ(a + b, b + a);
      ASSERT_EQ(a * b, b * a);
      ASSERT_EQ(a * (b + c), a * b + a * c);
      ASSERT_EQ(a + zero, a);
      ASSERT_EQ(a * one, a);
      ASSERT_TRUE((a - a).is_zero());
      ASSERT_EQ(ring_add(a, b), a + b);
      ASSERT_EQ(ring_mul(a, b), a * b);
    }
  }
}

TEST(CoeffRingProperty, UnitsInvert) {
  Rng rng(7);
  for (const auto& [label, ring] : all_rings()) {
    SCOPED_TRACE(label);
    int units = 0;
    for (int i = 0; i < 300; ++i) {
      const RingElement a = gen::random_element(rng, ring);
      if (!ring_is_unit(a)) continue;
      ++units;
      ASSERT_TRUE(ring_mul(a, ring_inverse(a)).is_one()) << ring_print(a);
    }
    EXPECT_GT(units, 0);
  }
}

TEST(CoeffRingProperty, SubstitutionIsHomomorphism) {
  Rng rng(99);
  const Ring poly = rings::polynomial();
  const Ring laur = rings::laurent();
  const Ring frac = rings::rational_functions();
  const Ring dual = rings::dual();
  const Ring rot = rings::make({{"lam", true, std::nullopt}, {"eps", false, std::nullopt}});
  const Ring q = rings::rationals();

  struct Case {
    const char* label;
    Ring source;
    Substitution sub;
  };
  std::vector<Case> cases;
  cases.push_back({"poly->Q", poly, Substitution(q).set("eps", RingElement(q, Rational(3, 2)))});
  cases.push_back({"poly->dual", poly, Substitution::embedding(dual)});
  cases.push_back({"laurent->frac", laur, Substitution::embedding(frac)});
  cases.push_back({"laurent->Q", laur, Substitution(q).set("eps", RingElement(q, Rational(-2)))});
  cases.push_back({"rot->poly", rot, Substitution(poly).set("lam", RingElement(poly, Rational(3)))});
  cases.push_back({"frac->Q", frac, Substitution(q).set("eps", RingElement(q, Rational(1, 7)))});
  for (auto& [label, source, sub] : cases) {
    SCOPED_TRACE(label);
    for (int i = 0; i < 150; ++i) {
      const RingElement a = gen::random_element(rng, source);
      const RingElement b = gen::random_element(rng, source);
      RingElement sa(sub.target()), sb(sub.target()), sab(sub.target()), sapb(sub.target());
      try {
        sa = ring_substitute(a, sub);
        sb = ring_substitute(b, sub);
        sab = ring_substitute(a * b, sub);
        sapb = ring_substitute(a + b, sub);
      } catch (const NotAUnit&) {
        continue;  // a pole of the specialization
      }
      ASSERT_EQ(sab, sa * sb);
      ASSERT_EQ(sapb, sa + sb);
    }
  }
}

TEST(CoeffRingProperty, NormalizationIsIdempotent) {
  Rng rng(5);
  for (const auto& [label, ring] : all_rings()) {
    SCOPED_TRACE(label);
    for (int i = 0; i < 200; ++i) {
      const RingElement a = gen::random_element(rng, ring) * gen::random_element(rng, ring);
      const RingElement again = ring->is_fraction_field() ? RingElement::fraction(ring, a.terms(), a.denominator())
                                                          : RingElement(ring, a.terms());
      ASSERT_EQ(again, a);
      ASSERT_EQ(ring_parse(ring_print(a), ring), a);
    }
  }
}
