#pragma once

// Fixed-seed generators shared by the property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "flagcert/coeffring.hpp"
#include "flagcert/laurent.hpp"
#include "flagcert/loopgroup.hpp"

namespace gen {
using namespace flagcert;

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline Rational random_rational(Rng& rng, bool nonzero = false) {
  for (;;) {
    Rational q(uniform(rng, -9, 9), uniform(rng, 1, 5));
    if (!nonzero || !q.is_zero()) return q;
  }
}

// Exponent vector drawn within the natural range of each generator.
inline Exponents random_exponents(Rng& rng, const Ring& ring, std::int64_t max_power = 2) {
  Exponents e;
  for (const auto& g : ring->generators()) {
    if (g.nilpotency)
      e.push_back(uniform(rng, 0, *g.nilpotency - 1));
    else if (g.invertible)
      e.push_back(uniform(rng, -max_power, max_power));
    else
      e.push_back(uniform(rng, 0, max_power));
  }
  return e;
}

inline TermMap random_terms(Rng& rng, const Ring& ring, int max_terms = 3) {
  TermMap t;
  const int count = static_cast<int>(uniform(rng, 0, max_terms));
  for (int i = 0; i < count; ++i) {
    const Rational c = random_rational(rng);
    if (!c.is_zero()) t[random_exponents(rng, ring)] += c;
  }
  std::erase_if(t, [](const auto& kv) { return kv.second.is_zero(); });
  return t;
}

inline RingElement random_element(Rng& rng, const Ring& ring, int max_terms = 3) {
  if (ring->is_fraction_field()) {
    TermMap den;
    while (den.empty()) den = random_terms(rng, ring, 2);
    return RingElement::fraction(ring, random_terms(rng, ring, max_terms), den);
  }
  return RingElement(ring, random_terms(rng, ring, max_terms));
}

inline RingElement random_nonzero(Rng& rng, const Ring& ring) {
  for (;;) {
    RingElement a = random_element(rng, ring);
    if (!a.is_zero()) return a;
  }
}

// Exact Laurent polynomial with t-exponents in [lo, hi].
inline LaurentSeries random_series(Rng& rng, const Ring& ring, std::int64_t lo = -3, std::int64_t hi = 3,
                                   int max_terms = 4) {
  LaurentSeries a = LaurentSeries::zero(ring);
  const int count = static_cast<int>(uniform(rng, 0, max_terms));
  for (int i = 0; i < count; ++i) a += LaurentSeries::monomial(random_element(rng, ring, 2), uniform(rng, lo, hi));
  return a;
}

inline LaurentSeries constant_series(const Ring& ring, const Rational& q) {
  return LaurentSeries::constant(RingElement(ring, q));
}

// A random exact element of the Iwahori subgroup over `ring`.
inline LoopMatrix random_iwahori(Rng& rng, const Ring& ring, int factors = 3) {
  LoopMatrix g = LoopMatrix::identity(ring);
  for (int i = 0; i < factors; ++i) {
    switch (uniform(rng, 0, 2)) {
      case 0:
        g = mat_mul(g, LoopMatrix::upper(random_series(rng, ring, 0, 2, 2)));
        break;
      case 1:
        g = mat_mul(g, LoopMatrix::lower(random_series(rng, ring, 1, 3, 2)));
        break;
      default: {
        const Rational c = random_rational(rng, true);
        g = mat_mul(g, LoopMatrix::diagonal(constant_series(ring, c), constant_series(ring, c.inverse())));
      }
    }
  }
  return g;
}

}  // namespace gen
