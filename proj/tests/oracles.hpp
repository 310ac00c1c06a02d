#pragma once

// Reference implementations used as independent oracles by the tests.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flagcert/loopgroup.hpp"

namespace oracle {

// Oracle: the affine symmetric group on Z with period n, realizing the affine
// Weyl group of type A_{n-1}. A permutation is its window f(1..n).
struct AffinePerm {
  std::vector<std::int64_t> window;

  std::int64_t n() const { return static_cast<std::int64_t>(window.size()); }
  std::int64_t operator()(std::int64_t i) const {
    const std::int64_t q = (i - 1 >= 0) ? (i - 1) / n() : -((n() - i) / n());
    return window[static_cast<std::size_t>(i - 1 - q * n())] + q * n();
  }
  friend bool operator<(const AffinePerm& a, const AffinePerm& b) { return a.window < b.window; }
  friend bool operator==(const AffinePerm& a, const AffinePerm& b) { return a.window == b.window; }
};

inline AffinePerm perm_identity(std::int64_t n) {
  AffinePerm p;
  for (std::int64_t i = 1; i <= n; ++i) p.window.push_back(i);
  return p;
}

// f * s_j: s_j swaps the residues j and j+1; j = 0 is the affine generator.
inline AffinePerm times_simple(const AffinePerm& f, int j) {
  AffinePerm g;
  for (std::int64_t i = 1; i <= f.n(); ++i) {
    std::int64_t r = ((i - j) % f.n() + f.n()) % f.n();
    std::int64_t image = i;
    if (r == 0) image = i + 1;
    if (r == 1) image = i - 1;
    g.window.push_back(f(image));
  }
  return g;
}

inline AffinePerm compose(const AffinePerm& f, const AffinePerm& g) {
  AffinePerm h;
  for (std::int64_t i = 1; i <= f.n(); ++i) h.window.push_back(f(g(i)));
  return h;
}

inline AffinePerm perm_inverse(const AffinePerm& f) {
  AffinePerm h;
  h.window.assign(f.window.size(), 0);
  for (std::int64_t i = 1; i <= f.n(); ++i) {
    const std::int64_t v = f(i);
    const std::int64_t r = ((v - 1) % f.n() + f.n()) % f.n();
    h.window[static_cast<std::size_t>(r)] = i - (v - 1 - r);
  }
  return h;
}

inline AffinePerm perm_of_word(std::int64_t n, const std::vector<int>& word) {
  AffinePerm p = perm_identity(n);
  for (int j : word) p = times_simple(p, j);
  return p;
}

// Inversions (i, j) with 1 <= i <= n, i < j, f(i) > f(j).
inline std::int64_t perm_length(const AffinePerm& f) {
  std::int64_t count = 0;
  for (std::int64_t i = 1; i <= f.n(); ++i)
    for (std::int64_t jb = 1; jb <= f.n(); ++jb)
      for (std::int64_t k = (jb > i ? 0 : 1);; ++k) {
        if (!(f(i) > f(jb) + k * f.n())) break;
        ++count;
      }
  return count;
}

struct OracleElement {
  AffinePerm perm;
  std::vector<int> word;
};

// Breadth-first search by right multiplication; index = BFS distance.
inline std::vector<std::vector<OracleElement>> bfs_layers(std::int64_t n, int max_length) {
  std::vector<std::vector<OracleElement>> layers{{{perm_identity(n), {}}}};
  std::set<AffinePerm> seen{perm_identity(n)};
  for (int l = 1; l <= max_length; ++l) {
    std::vector<OracleElement> next;
    for (const auto& x : layers.back())
      for (int j = 0; j < n; ++j) {
        AffinePerm y = times_simple(x.perm, j);
        if (!seen.insert(y).second) continue;
        auto w = x.word;
        w.push_back(j);
        next.push_back({y, w});
      }
    layers.push_back(std::move(next));
  }
  return layers;
}

inline std::vector<OracleElement> flatten(const std::vector<std::vector<OracleElement>>& layers) {
  std::vector<OracleElement> out;
  for (const auto& l : layers) out.insert(out.end(), l.begin(), l.end());
  return out;
}

inline std::set<AffinePerm> subword_products(std::int64_t n, const std::vector<int>& word) {
  std::set<AffinePerm> out;
  const std::size_t k = word.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<int> sub;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) sub.push_back(word[i]);
    out.insert(perm_of_word(n, sub));
  }
  return out;
}

// Oracle: integer polynomials in eps^{+-1} and t^{+-1}, keyed by (eps power, t power).
using Poly = std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t>;
using PolyMatrix = std::array<std::array<Poly, 2>, 2>;

inline Poly poly_add(Poly a, const Poly& b) {
  for (const auto& [k, c] : b) a[k] += c;
  std::erase_if(a, [](const auto& kv) { return kv.second == 0; });
  return a;
}

inline Poly poly_mul(const Poly& a, const Poly& b, std::optional<std::int64_t> eps_order = std::nullopt) {
  Poly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      const std::int64_t e = ka.first + kb.first;
      if (eps_order && e >= *eps_order) continue;
      out[{e, ka.second + kb.second}] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline PolyMatrix pm_mul(const PolyMatrix& a, const PolyMatrix& b, std::optional<std::int64_t> eps_order = std::nullopt) {
  PolyMatrix c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      c[i][j] = poly_add(poly_mul(a[i][0], b[0][j], eps_order), poly_mul(a[i][1], b[1][j], eps_order));
  return c;
}

inline Poly mono(std::int64_t c, std::int64_t e, std::int64_t k) { return c == 0 ? Poly{} : Poly{{{e, k}, c}}; }

// Entries written as (coefficient, eps power, t power in units of n), as displayed.
using Display = std::array<std::array<std::vector<std::array<std::int64_t, 3>>, 2>, 2>;

inline PolyMatrix from_display(const Display& d, std::int64_t n) {
  PolyMatrix m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (const auto& [c, e, k] : d[i][j]) m[i][j] = poly_add(m[i][j], mono(c, e, k * n));
  return m;
}

inline const Display kM1{{{{{{1, 0, 0}, {1, 1, -1}, {1, 2, -2}, {1, 3, -3}}, {{-1, 2, -2}}}},
                   {{{{1, 2, -2}}, {{1, 0, 0}, {-1, 1, -1}}}}}};
inline const Display kM2{{{{{{1, -2, 0}, {1, -1, -1}, {1, 0, -2}, {1, 1, -3}}, {{1, 0, 2}}}},
                   {{{{-1, 0, -2}}, {}}}}};
inline const Display kM3{{{{{{1, -3, 0}, {1, -2, -1}, {1, -1, -2}, {1, 0, -3}}, {{-1, -2, 5}, {-1, -1, 4}, {-1, 0, 3}}}},
                   {{{{-1, -1, -2}}, {{1, 0, 3}}}}}};

// Integer coefficients only; nullopt for anything else.
inline std::optional<Poly> to_poly(const flagcert::LaurentSeries& s) {
  Poly p;
  if (!s.is_exact()) return std::nullopt;
  for (const auto& [k, c] : s.terms()) {
    if (c.denominator().size() != 1) return std::nullopt;
    for (const auto& [e, q] : c.terms()) {
      if (!q.is_integer()) return std::nullopt;
      p[{e.empty() ? 0 : e[0], k}] += std::stoll(q.numerator_string());
    }
  }
  std::erase_if(p, [](const auto& kv) { return kv.second == 0; });
  return p;
}

inline std::optional<PolyMatrix> to_poly(const flagcert::LoopMatrix& m) {
  PolyMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto p = to_poly(m(i, j));
      if (!p) return std::nullopt;
      out[i][j] = std::move(*p);
    }
  return out;
}

// U(c) L(d) U(c) S with c = 1 + eps t^-n, d = -1 + eps t^-n.
inline PolyMatrix oracle_product(std::int64_t n, std::optional<std::int64_t> eps_order = std::nullopt) {
  const Poly one = mono(1, 0, 0);
  const Poly c = poly_add(one, mono(1, 1, -n));
  const Poly d = poly_add(mono(-1, 0, 0), mono(1, 1, -n));
  const PolyMatrix U{{{one, c}, {Poly{}, one}}};
  const PolyMatrix L{{{one, Poly{}}, {d, one}}};
  const PolyMatrix S{{{Poly{}, mono(-1, 0, 0)}, {one, Poly{}}}};
  return pm_mul(pm_mul(pm_mul(U, L, eps_order), U, eps_order), S, eps_order);
}

}  // namespace oracle
