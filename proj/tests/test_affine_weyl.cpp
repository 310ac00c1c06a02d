#include <gtest/gtest.h>

#include <deque>
#include <map>
#include <set>

#include "flagcert/affine_weyl.hpp"
#include "flagcert/errors.hpp"
#include "oracles.hpp"

using namespace flagcert;
using namespace oracle;

namespace {

// Reflection of affine roots in simple roots, type A_r, coordinates (beta, level).
AffineRoot oracle_simple_reflect(int i, const AffineRoot& a, const IntMatrix& cartan) {
  const std::size_t r = cartan.size();
  auto pair_simple = [&](std::size_t s) {
    std::int64_t p = 0;
    for (std::size_t j = 0; j < r; ++j) p += cartan[s][j] * a.finite[j];
    return p;
  };
  AffineRoot out = a;
  if (i > 0) {
    const std::int64_t p = pair_simple(static_cast<std::size_t>(i - 1));
    out.finite[static_cast<std::size_t>(i - 1)] -= p;
  } else {
    // alpha_0 = -theta + delta with theta = (1, ..., 1); <a, alpha_0^vee> = -sum_s <a, alpha_s^vee>.
    std::int64_t p = 0;
    for (std::size_t s = 0; s < r; ++s) p -= pair_simple(s);
    for (std::size_t j = 0; j < r; ++j) out.finite[j] += p;
    out.level -= p;
  }
  return out;
}

AffineRoot oracle_act(const std::vector<int>& word, AffineRoot a, const IntMatrix& cartan) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) a = oracle_simple_reflect(*it, a, cartan);
  return a;
}

std::vector<AffineRoot> sample_roots(const AffineWeylGroup& g, std::int64_t max_level) {
  std::vector<AffineRoot> out;
  for (std::int64_t k = -max_level; k <= max_level; ++k) {
    for (const auto& beta : g.cartan().positive_roots()) {
      out.push_back({beta, k});
      IntVector neg = beta;
      for (auto& x : neg) x = -x;
      out.push_back({neg, k});
    }
    if (k != 0) out.push_back({IntVector(g.rank(), 0), k});
  }
  return out;
}

struct TypeCase {
  const char* label;
  CartanData data;
  int max_length;
};

}  // namespace

TEST(AffineWeyl, CartanData) {
  EXPECT_EQ(CartanData::A1().positive_roots().size(), 1u);
  EXPECT_EQ(CartanData::A2().positive_roots().size(), 3u);
  EXPECT_EQ(CartanData::from_type("A3").positive_roots().size(), 6u);
  EXPECT_EQ(CartanData::from_type("A12").positive_roots().size(), 78u);
  EXPECT_EQ(CartanData::A2().highest_root(), (IntVector{1, 1}));
  EXPECT_THROW(CartanData::from_type("B2"), PreconditionViolated);
  EXPECT_THROW(CartanData::from_matrix({{2, -2}, {-2, 2}}, 200), BoundExceeded);
  EXPECT_THROW(CartanData::from_matrix({{2, 0}, {0, 2}}), PreconditionViolated);
}

TEST(AffineWeyl, RankOneExamples) {
  const AffineWeylGroup g(CartanData::A1());
  EXPECT_EQ(g.print(g.simple(0)), "t[-1]*s");
  EXPECT_EQ(g.print(g.simple(1)), "s");
  EXPECT_EQ(g.length(g.parse("t[-3]")), 6);
  EXPECT_EQ(g.length(g.parse("t[2]")), 4);
  EXPECT_EQ(g.length(g.parse("t[-1]*s")), 1);
  EXPECT_EQ(g.length(g.parse("t[1]*s")), 3);
  EXPECT_EQ(g.multiply(g.simple(0), g.simple(1)), g.parse("t[-1]"));
  EXPECT_TRUE(g.bruhat_leq(g.parse("s"), g.parse("t[-1]")));
  EXPECT_FALSE(g.bruhat_leq(g.parse("t[1]"), g.parse("t[-1]")));
  EXPECT_EQ(g.act(g.simple(0), {{1}, 0}), (AffineRoot{{-1}, 2}));
  EXPECT_EQ(g.act(g.parse("t[-3]"), {{-1}, -5}), (AffineRoot{{-1}, 1}));
  EXPECT_EQ(g.reflection_of_root({{-1}, 2}), g.parse("t[-2]*s"));
  EXPECT_EQ(g.print(g.root_of_reflection(g.parse("t[-2]*s"))), "-alpha+2*delta");
  EXPECT_EQ(g.inversions(g.parse("t[-1]")).size(), 2u);
}

TEST(AffineWeyl, ParseAndPrint) {
  const AffineWeylGroup a2(CartanData::A2());
  for (const auto& e : a2.enumerate_up_to_length(6)) ASSERT_EQ(a2.parse(a2.print(e.element)), e.element);
  EXPECT_EQ(a2.parse("s0*s1*s2"), a2.from_word({0, 1, 2}));
  EXPECT_EQ(a2.parse("e"), a2.identity());
  EXPECT_THROW(a2.parse("t[1]"), SyntaxError);
  EXPECT_THROW(a2.parse("s3"), SyntaxError);
  for (const auto& a : sample_roots(a2, 3)) ASSERT_EQ(a2.parse_root(a2.print(a)), a) << a2.print(a);
  EXPECT_EQ(a2.parse_root("alpha1+alpha2-delta"), (AffineRoot{{1, 1}, -1}));
  EXPECT_THROW(a2.parse_root("2*alpha1"), NotARoot);
  EXPECT_THROW(a2.parse_root("alpha1+"), SyntaxError);
}

TEST(AffineWeylOracle, LengthMatchesBreadthFirstSearch) {
  for (const auto& [label, data, max_length] : {TypeCase{"A1", CartanData::A1(), 8}, TypeCase{"A2", CartanData::A2(), 8}}) {
    SCOPED_TRACE(label);
    const AffineWeylGroup g(data, max_length);
    const std::int64_t n = static_cast<std::int64_t>(data.rank()) + 1;
    const auto layers = bfs_layers(n, max_length);
    std::set<AffineWeylElement> distinct;
    std::size_t total = 0;
    for (std::size_t l = 0; l < layers.size(); ++l)
      for (const auto& x : layers[l]) {
        ++total;
        ASSERT_EQ(perm_length(x.perm), static_cast<std::int64_t>(l));
        const AffineWeylElement w = g.from_word(x.word);
        ASSERT_EQ(g.length(w), static_cast<std::int64_t>(l));
        ASSERT_EQ(g.inversions(w).size(), l);
        distinct.insert(w);
      }
    EXPECT_EQ(distinct.size(), total);
    EXPECT_EQ(g.enumerate_up_to_length(max_length).size(), total);
    if (data.rank() == 1) {
      EXPECT_EQ(total, 17u);
    }
    if (data.rank() == 2) {
      EXPECT_EQ(total, 109u);
    }
  }
}

TEST(AffineWeylOracle, BruhatMatchesSubwordProperty) {
  for (const auto& [label, data, max_length] : {TypeCase{"A1", CartanData::A1(), 6}, TypeCase{"A2", CartanData::A2(), 6}}) {
    SCOPED_TRACE(label);
    const AffineWeylGroup g(data, max_length);
    const std::int64_t n = static_cast<std::int64_t>(data.rank()) + 1;
    const auto elements = flatten(bfs_layers(n, max_length));
    std::size_t pairs = 0;
    for (const auto& w : elements) {
      const auto below = subword_products(n, w.word);
      const AffineWeylElement gw = g.from_word(w.word);
      for (const auto& v : elements) {
        ++pairs;
        ASSERT_EQ(g.bruhat_leq(g.from_word(v.word), gw), below.count(v.perm) > 0);
      }
    }
    if (data.rank() == 1) {
      EXPECT_EQ(pairs, 169u);
    }
  }
}

TEST(AffineWeylOracle, ActionMatchesSimpleReflections) {
  for (const auto& [label, data, max_length] : {TypeCase{"A1", CartanData::A1(), 6}, TypeCase{"A2", CartanData::A2(), 4}}) {
    SCOPED_TRACE(label);
    const AffineWeylGroup g(data, max_length);
    const auto roots = sample_roots(g, 3);
    for (const auto& e : g.enumerate_up_to_length(max_length))
      for (const auto& a : roots) ASSERT_EQ(g.act(e.element, a), oracle_act(e.reduced_word, a, data.cartan()));
  }
}

TEST(AffineWeylOracle, PhiWMatchesReflectionEnumeration) {
  for (const auto& [label, data, max_length] : {TypeCase{"A1", CartanData::A1(), 8}, TypeCase{"A2", CartanData::A2(), 4}}) {
    SCOPED_TRACE(label);
    const AffineWeylGroup g(data, max_length);
    const std::int64_t n = static_cast<std::int64_t>(data.rank()) + 1;
    // Every reflection is u s_i u^-1; a reflection of length l has such a form with l(u) <= (l - 1) / 2.
    std::map<AffineRoot, AffinePerm> reflections;
    for (const auto& u : flatten(bfs_layers(n, (max_length + 1) / 2))) {
      for (int i = 0; i < n; ++i) {
        AffineRoot simple{IntVector(data.rank(), 0), 0};
        if (i > 0) {
          simple.finite[static_cast<std::size_t>(i - 1)] = 1;
        } else {
          simple.finite.assign(data.rank(), -1);
          simple.level = 1;
        }
        const AffineRoot beta = oracle_act(u.word, simple, data.cartan());
        const AffinePerm r = compose(compose(u.perm, times_simple(perm_identity(n), i)), perm_inverse(u.perm));
        reflections.emplace(beta, r);
        reflections.emplace(-beta, r);
      }
    }
    for (const auto& w : flatten(bfs_layers(n, max_length))) {
      const auto below = subword_products(n, w.word);
      std::set<AffineRoot> expected;
      for (const auto& [root, r] : reflections)
        if (!g.is_positive(root) && below.count(r)) expected.insert(root);
      const auto phi = g.phi_w(g.from_word(w.word));
      const std::set<AffineRoot> got(phi.begin(), phi.end());
      ASSERT_EQ(got.size(), phi.size());
      ASSERT_EQ(got, expected);
      ASSERT_GE(static_cast<std::int64_t>(phi.size()), static_cast<std::int64_t>(w.word.size()));
    }
    EXPECT_TRUE(g.phi_w(g.identity()).empty());
  }
}

TEST(AffineWeylProperty, LengthSubadditiveAndSimpleSteps) {
  for (const auto& [label, data, max_length] : {TypeCase{"A1", CartanData::A1(), 8}, TypeCase{"A2", CartanData::A2(), 4}}) {
    SCOPED_TRACE(label);
    const AffineWeylGroup g(data, max_length);
    const auto elements = g.enumerate_up_to_length(max_length);
    for (const auto& v : elements) {
      for (const auto& w : elements) ASSERT_LE(g.length(g.multiply(v.element, w.element)), v.length + w.length);
      for (int i = 0; i <= static_cast<int>(data.rank()); ++i) {
        const std::int64_t l = g.length(g.multiply(g.simple(i), v.element));
        ASSERT_EQ(std::abs(l - v.length), 1);
        ASSERT_EQ(g.is_left_descent(i, v.element), l < v.length);
      }
      ASSERT_EQ(g.multiply(v.element, g.inverse(v.element)), g.identity());
      ASSERT_EQ(g.from_word(v.reduced_word), v.element);
    }
  }
}

TEST(AffineWeylProperty, ActionIsGroupActionPreservingRootTypes) {
  const AffineWeylGroup g(CartanData::A2(), 4);
  const auto elements = g.enumerate_up_to_length(3);
  const auto roots = sample_roots(g, 2);
  for (const auto& v : elements)
    for (const auto& w : elements) {
      const AffineWeylElement vw = g.multiply(v.element, w.element);
      for (const auto& a : roots) {
        const AffineRoot image = g.act(vw, a);
        ASSERT_EQ(image, g.act(v.element, g.act(w.element, a)));
        ASSERT_EQ(image.is_real(), a.is_real());
        if (a.is_imaginary()) {
          ASSERT_EQ(image, a);
        }
      }
    }
}

TEST(AffineWeylProperty, Reflections) {
  for (const auto& data : {CartanData::A1(), CartanData::A2()}) {
    const AffineWeylGroup g(data, 12);
    for (const auto& a : sample_roots(g, 3)) {
      if (!a.is_real()) {
        EXPECT_THROW(g.reflection_of_root(a), NotARoot);
        continue;
      }
      const AffineWeylElement r = g.reflection_of_root(a);
      ASSERT_EQ(g.length(r) % 2, 1);
      ASSERT_EQ(g.act(r, a), -a);
      ASSERT_EQ(g.multiply(r, r), g.identity());
      const AffineRoot back = g.root_of_reflection(r);
      ASSERT_TRUE(back == a || back == -a);
    }
    EXPECT_THROW(g.root_of_reflection(g.translation(IntVector(data.rank(), 1))), NotAReflection);
  }
}

TEST(AffineWeylProperty, OmegaEmbedding) {
  const AffineWeylGroup a1(CartanData::A1(), 8);
  const AffineWeylGroup a2(CartanData::A2(), 16);
  const auto elements = a1.enumerate_up_to_length(6);
  for (const IntVector& root : {IntVector{1, 0}, IntVector{0, 1}, IntVector{1, 1}}) {
    std::set<AffineWeylElement> images;
    for (const auto& v : elements) {
      images.insert(omega_embed(a2, root, a1, v.element));
      for (const auto& w : elements)
        ASSERT_EQ(omega_embed(a2, root, a1, a1.multiply(v.element, w.element)),
                  a2.multiply(omega_embed(a2, root, a1, v.element), omega_embed(a2, root, a1, w.element)));
    }
    EXPECT_EQ(images.size(), elements.size());
    EXPECT_EQ(omega_embed(a2, root, a1, a1.simple(1)), a2.reflection_of_root({root, 0}));
  }
}
