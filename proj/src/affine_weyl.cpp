#include "flagcert/affine_weyl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <set>
#include <stdexcept>

#include "flagcert/errors.hpp"

namespace flagcert {

namespace {

IntMatrix identity_matrix(std::size_t r) {
  IntMatrix m(r, IntVector(r, 0));
  for (std::size_t i = 0; i < r; ++i) m[i][i] = 1;
  return m;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t r = a.size();
  IntMatrix c(r, IntVector(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < r; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < r; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

IntVector mat_apply(const IntMatrix& m, const IntVector& v) {
  IntVector out(v.size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

IntVector unit_vector(std::size_t r, std::size_t i) {
  IntVector v(r, 0);
  v[i] = 1;
  return v;
}

IntVector negated(IntVector v) {
  for (auto& x : v) x = -x;
  return v;
}

IntVector add_scaled(IntVector a, const IntVector& b, std::int64_t s) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
  return a;
}

bool is_zero_vector(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

bool all_nonnegative(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x >= 0; });
}

std::int64_t height(const IntVector& v) {
  std::int64_t h = 0;
  for (auto x : v) h += x;
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// CartanData

CartanData CartanData::from_matrix(IntMatrix cartan, std::size_t max_roots) {
  const std::size_t r = cartan.size();
  if (r == 0) throw PreconditionViolated("Cartan matrix must have positive rank");
  for (std::size_t i = 0; i < r; ++i) {
    if (cartan[i].size() != r) throw PreconditionViolated("Cartan matrix must be square");
    if (cartan[i][i] != 2) throw PreconditionViolated("Cartan matrix diagonal must be 2");
    for (std::size_t j = 0; j < r; ++j) {
      if (i == j) continue;
      if (cartan[i][j] > 0) throw PreconditionViolated("Cartan matrix off-diagonal must be <= 0");
      if ((cartan[i][j] == 0) != (cartan[j][i] == 0))
        throw PreconditionViolated("Cartan matrix zero pattern must be symmetric");
    }
  }
  CartanData d;
  d.cartan_ = std::move(cartan);

  // <alpha_j^vee, beta> and <gamma, alpha_j>
  auto coroot_on = [&](std::size_t j, const IntVector& beta) {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < r; ++k) s += d.cartan_[j][k] * beta[k];
    return s;
  };
  auto on_root = [&](const IntVector& gamma, std::size_t j) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < r; ++i) s += gamma[i] * d.cartan_[i][j];
    return s;
  };

  std::deque<IntVector> queue;
  for (std::size_t i = 0; i < r; ++i) {
    d.coroots_.emplace(unit_vector(r, i), unit_vector(r, i));
    queue.push_back(unit_vector(r, i));
  }
  while (!queue.empty()) {
    const IntVector beta = queue.front();
    queue.pop_front();
    const IntVector beta_vee = d.coroots_.at(beta);
    for (std::size_t j = 0; j < r; ++j) {
      IntVector image = add_scaled(beta, unit_vector(r, j), -coroot_on(j, beta));
      if (!all_nonnegative(image) || is_zero_vector(image)) continue;
      if (d.coroots_.count(image)) continue;
      IntVector image_vee = add_scaled(beta_vee, unit_vector(r, j), -on_root(beta_vee, j));
      d.coroots_.emplace(image, std::move(image_vee));
      queue.push_back(std::move(image));
      if (d.coroots_.size() > max_roots)
        throw BoundExceeded("positive-root closure exceeded " + std::to_string(max_roots) +
                            " roots; Cartan matrix is not of finite type");
    }
  }
  for (const auto& [beta, vee] : d.coroots_) d.positive_roots_.push_back(beta);
  std::sort(d.positive_roots_.begin(), d.positive_roots_.end(), [](const IntVector& a, const IntVector& b) {
    if (height(a) != height(b)) return height(a) < height(b);
    return a < b;
  });
  if (d.positive_roots_.size() > 1 && height(d.positive_roots_.back()) ==
                                          height(d.positive_roots_[d.positive_roots_.size() - 2]))
    throw PreconditionViolated("Cartan matrix has no unique highest root (not irreducible)");
  return d;
}

CartanData CartanData::A1() { return from_matrix({{2}}); }

CartanData CartanData::A2() { return from_matrix({{2, -1}, {-1, 2}}); }

CartanData CartanData::from_type(std::string_view name) {
  if (name.size() >= 2 && (name[0] == 'A' || name[0] == 'a')) {
    std::size_t r = 0;
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) r = 0, i = name.size();
      else r = r * 10 + static_cast<std::size_t>(name[i] - '0');
    }
    if (r >= 1 && r <= 12) {
      IntMatrix m(r, IntVector(r, 0));
      for (std::size_t i = 0; i < r; ++i) {
        m[i][i] = 2;
        if (i + 1 < r) m[i][i + 1] = m[i + 1][i] = -1;
      }
      return from_matrix(std::move(m));
    }
  }
  throw PreconditionViolated("unsupported Cartan type '" + std::string(name) + "'");
}

bool CartanData::is_positive_root(const IntVector& beta) const { return coroots_.count(beta) > 0; }

bool CartanData::is_root(const IntVector& beta) const {
  return is_positive_root(beta) || is_positive_root(negated(beta));
}

IntVector CartanData::coroot(const IntVector& beta) const {
  if (auto it = coroots_.find(beta); it != coroots_.end()) return it->second;
  if (auto it = coroots_.find(negated(beta)); it != coroots_.end()) return negated(it->second);
  throw NotARoot("not a root of the finite root system");
}

std::int64_t CartanData::pairing(const IntVector& coroot, const IntVector& root) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j) s += coroot[i] * cartan_[i][j] * root[j];
  return s;
}

// ---------------------------------------------------------------------------

IntVector FiniteWeylElement::apply_to_root(const IntVector& beta) const { return mat_apply(on_roots_, beta); }

IntVector FiniteWeylElement::apply_to_coroot(const IntVector& gamma) const {
  return mat_apply(on_coroots_, gamma);
}

bool AffineWeylElement::is_identity() const { return is_zero_vector(translation_) && finite_.is_identity(); }

bool AffineRoot::is_real() const { return !is_zero_vector(finite); }

AffineRoot AffineRoot::operator-() const { return AffineRoot{negated(finite), -level}; }

// ---------------------------------------------------------------------------
// AffineWeylGroup

AffineWeylGroup::AffineWeylGroup(CartanData data, std::int64_t max_enumeration_length)
    : data_(std::move(data)), max_length_(max_enumeration_length), memo_(std::make_shared<Memo>()) {
  const std::size_t r = data_.rank();
  for (std::size_t i = 0; i < r; ++i) {
    IntMatrix roots = identity_matrix(r);
    IntMatrix coroots = identity_matrix(r);
    for (std::size_t j = 0; j < r; ++j) {
      roots[i][j] -= data_.cartan()[i][j];    // s_i(alpha_j) = alpha_j - A_ij alpha_i
      coroots[i][j] -= data_.cartan()[j][i];  // s_i(alpha_j^vee) = alpha_j^vee - A_ji alpha_i^vee
    }
    finite_simple_.emplace_back(std::move(roots), std::move(coroots), std::vector<int>{static_cast<int>(i + 1)});
  }
}

FiniteWeylElement AffineWeylGroup::make_finite(IntMatrix on_roots, IntMatrix on_coroots) const {
  const std::size_t r = rank();
  // A reduced word from right descents: u(alpha_i) < 0 iff l(u s_i) < l(u).
  std::vector<int> right_word;  // u = s_{right_word[k-1]} ... read right to left
  {
    IntMatrix u = on_roots;
    while (true) {
      int descent = -1;
      for (std::size_t i = 0; i < r && descent < 0; ++i) {
        IntVector col(r);
        for (std::size_t k = 0; k < r; ++k) col[k] = u[k][i];
        if (!all_nonnegative(col)) descent = static_cast<int>(i);
      }
      if (descent < 0) break;
      u = mat_mul(u, finite_simple_[descent].on_roots());
      right_word.push_back(descent);
    }
    if (u != identity_matrix(r)) throw std::logic_error("finite Weyl element failed to reduce");
  }
  // u = s_{a_k} ... s_{a_1} where right_word = (a_1, ..., a_k) peeled from the right,
  // so u^{-1} = s_{a_1} ... s_{a_k}.
  IntMatrix inv = identity_matrix(r);
  for (int a : right_word) inv = mat_mul(inv, finite_simple_[a].on_roots());
  // Greedy smallest left descent gives the lexicographically least reduced word:
  // l(s_i u) < l(u) iff u^{-1}(alpha_i) < 0.
  std::vector<int> word;
  while (inv != identity_matrix(r)) {
    int descent = -1;
    for (std::size_t i = 0; i < r && descent < 0; ++i) {
      IntVector col(r);
      for (std::size_t k = 0; k < r; ++k) col[k] = inv[k][i];
      if (!all_nonnegative(col)) descent = static_cast<int>(i);
    }
    word.push_back(descent + 1);
    inv = mat_mul(inv, finite_simple_[descent].on_roots());
  }
  return FiniteWeylElement(std::move(on_roots), std::move(on_coroots), std::move(word));
}

FiniteWeylElement AffineWeylGroup::finite_multiply(const FiniteWeylElement& a, const FiniteWeylElement& b) const {
  return make_finite(mat_mul(a.on_roots(), b.on_roots()), mat_mul(a.on_coroots(), b.on_coroots()));
}

FiniteWeylElement AffineWeylGroup::finite_inverse(const FiniteWeylElement& a) const {
  IntMatrix roots = identity_matrix(rank());
  IntMatrix coroots = identity_matrix(rank());
  for (auto it = a.word().rbegin(); it != a.word().rend(); ++it) {
    roots = mat_mul(roots, finite_simple_[*it - 1].on_roots());
    coroots = mat_mul(coroots, finite_simple_[*it - 1].on_coroots());
  }
  return make_finite(std::move(roots), std::move(coroots));
}

FiniteWeylElement AffineWeylGroup::finite_reflection(const IntVector& beta) const {
  if (!data_.is_root(beta)) throw NotARoot("not a finite root");
  const std::size_t r = rank();
  const IntVector vee = data_.coroot(beta);
  IntMatrix roots(r, IntVector(r, 0));
  IntMatrix coroots(r, IntVector(r, 0));
  for (std::size_t j = 0; j < r; ++j) {
    const IntVector ej = unit_vector(r, j);
    const IntVector img = add_scaled(ej, beta, -data_.pairing(vee, ej));
    const IntVector img_vee = add_scaled(ej, vee, -data_.pairing(ej, beta));
    for (std::size_t i = 0; i < r; ++i) {
      roots[i][j] = img[i];
      coroots[i][j] = img_vee[i];
    }
  }
  return make_finite(std::move(roots), std::move(coroots));
}

AffineWeylElement AffineWeylGroup::identity() const {
  return AffineWeylElement(IntVector(rank(), 0), make_finite(identity_matrix(rank()), identity_matrix(rank())));
}

AffineWeylElement AffineWeylGroup::translation(IntVector gamma) const {
  if (gamma.size() != rank()) throw PreconditionViolated("translation vector has wrong rank");
  return AffineWeylElement(std::move(gamma), make_finite(identity_matrix(rank()), identity_matrix(rank())));
}

AffineWeylElement AffineWeylGroup::simple(int i) const {
  if (i < 0 || static_cast<std::size_t>(i) > rank()) throw PreconditionViolated("no simple generator s" + std::to_string(i));
  if (i > 0) return AffineWeylElement(IntVector(rank(), 0), finite_simple_[i - 1]);
  const IntVector& theta = data_.highest_root();
  return AffineWeylElement(negated(data_.coroot(theta)), finite_reflection(theta));
}

AffineWeylElement AffineWeylGroup::from_word(const std::vector<int>& word) const {
  AffineWeylElement w = identity();
  for (int i : word) w = multiply(w, simple(i));
  return w;
}

AffineWeylElement AffineWeylGroup::multiply(const AffineWeylElement& v, const AffineWeylElement& w) const {
  IntVector gamma = v.translation();
  const IntVector moved = v.finite().apply_to_coroot(w.translation());
  for (std::size_t i = 0; i < gamma.size(); ++i) gamma[i] += moved[i];
  return AffineWeylElement(std::move(gamma), finite_multiply(v.finite(), w.finite()));
}

AffineWeylElement AffineWeylGroup::inverse(const AffineWeylElement& v) const {
  FiniteWeylElement u_inv = finite_inverse(v.finite());
  IntVector gamma = negated(u_inv.apply_to_coroot(v.translation()));
  return AffineWeylElement(std::move(gamma), std::move(u_inv));
}

std::int64_t AffineWeylGroup::finite_length(const FiniteWeylElement& u) const {
  std::int64_t n = 0;
  for (const auto& beta : data_.positive_roots())
    if (!data_.is_positive_root(u.apply_to_root(beta))) ++n;
  return n;
}

namespace {

// Count of k with beta + k delta > 0 and w(beta + k delta) < 0, where
// w(beta + k delta) = u beta + (k + c) delta.
std::int64_t inverted_levels(bool beta_positive, bool image_positive, std::int64_t c, std::int64_t* k_min_out = nullptr,
                             std::int64_t* k_max_out = nullptr) {
  const std::int64_t k_min = beta_positive ? 0 : 1;
  const std::int64_t k_max = image_positive ? -c - 1 : -c;
  if (k_min_out) *k_min_out = k_min;
  if (k_max_out) *k_max_out = k_max;
  return std::max<std::int64_t>(0, k_max - k_min + 1);
}

}  // namespace

std::int64_t AffineWeylGroup::length(const AffineWeylElement& w) const {
  std::int64_t total = 0;
  for (const auto& pos : data_.positive_roots()) {
    for (const IntVector& beta : {pos, negated(pos)}) {
      const IntVector img = w.finite().apply_to_root(beta);
      const std::int64_t c = data_.pairing(w.translation(), img);
      total += inverted_levels(data_.is_positive_root(beta), data_.is_positive_root(img), c);
    }
  }
  return total;
}

std::vector<AffineRoot> AffineWeylGroup::inversions(const AffineWeylElement& w) const {
  std::vector<AffineRoot> out;
  for (const auto& pos : data_.positive_roots()) {
    for (const IntVector& beta : {pos, negated(pos)}) {
      const IntVector img = w.finite().apply_to_root(beta);
      const std::int64_t c = data_.pairing(w.translation(), img);
      std::int64_t lo = 0;
      std::int64_t hi = -1;
      inverted_levels(data_.is_positive_root(beta), data_.is_positive_root(img), c, &lo, &hi);
      for (std::int64_t k = lo; k <= hi; ++k) out.push_back(AffineRoot{beta, k});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool AffineWeylGroup::is_left_descent(int i, const AffineWeylElement& w) const {
  return length(multiply(simple(i), w)) < length(w);
}

bool AffineWeylGroup::bruhat_leq(const AffineWeylElement& v, const AffineWeylElement& w) const {
  if (v == w) return true;
  const auto key = std::make_pair(v, w);
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    if (auto it = memo_->table.find(key); it != memo_->table.end()) return it->second;
  }
  const bool result = bruhat_leq_uncached(v, w);
  std::lock_guard<std::mutex> lock(memo_->mutex);
  memo_->table.emplace(key, result);
  return result;
}

bool AffineWeylGroup::bruhat_leq_uncached(const AffineWeylElement& v, const AffineWeylElement& w) const {
  const std::int64_t lv = length(v);
  const std::int64_t lw = length(w);
  if (lv >= lw) return v == w;
  if (lv == 0) return true;
  // Lifting property: with s w < w, v <= w iff min(v, s v) <= s w.
  for (int i = 0; i <= static_cast<int>(rank()); ++i) {
    const AffineWeylElement sw = multiply(simple(i), w);
    if (length(sw) >= lw) continue;
    const AffineWeylElement sv = multiply(simple(i), v);
    return length(sv) < lv ? bruhat_leq(sv, sw) : bruhat_leq(v, sw);
  }
  throw std::logic_error("element of positive length without a left descent");
}

bool AffineWeylGroup::is_root(const AffineRoot& a) const {
  if (a.finite.size() != rank()) return false;
  if (!a.is_real()) return a.level != 0;
  return data_.is_root(a.finite);
}

bool AffineWeylGroup::is_positive(const AffineRoot& a) const {
  if (!is_root(a)) throw NotARoot("not an affine root");
  return a.level > 0 || (a.level == 0 && data_.is_positive_root(a.finite));
}

AffineRoot AffineWeylGroup::act(const AffineWeylElement& w, const AffineRoot& a) const {
  if (!is_root(a)) throw NotARoot("not an affine root");
  if (!a.is_real()) return a;
  IntVector img = w.finite().apply_to_root(a.finite);
  const std::int64_t shift = data_.pairing(w.translation(), img);
  return AffineRoot{std::move(img), a.level + shift};
}

AffineWeylElement AffineWeylGroup::reflection_of_root(const AffineRoot& a) const {
  if (!is_root(a) || !a.is_real()) throw NotARoot("reflections exist only for real affine roots");
  // s_{beta + k delta} = t_{k beta^vee} s_beta
  IntVector gamma = data_.coroot(a.finite);
  for (auto& x : gamma) x *= a.level;
  return AffineWeylElement(std::move(gamma), finite_reflection(a.finite));
}

AffineRoot AffineWeylGroup::root_of_reflection(const AffineWeylElement& w) const {
  if (w.is_identity() || !multiply(w, w).is_identity()) throw NotAReflection("element is not an involution");
  for (const auto& beta : data_.positive_roots()) {
    if (!(finite_reflection(beta) == w.finite())) continue;
    const IntVector vee = data_.coroot(beta);
    std::optional<std::int64_t> k;
    bool ok = true;
    for (std::size_t i = 0; i < rank() && ok; ++i) {
      if (vee[i] == 0) {
        ok = w.translation()[i] == 0;
      } else if (w.translation()[i] % vee[i] != 0) {
        ok = false;
      } else {
        const std::int64_t q = w.translation()[i] / vee[i];
        if (k && *k != q) ok = false;
        k = q;
      }
    }
    if (!ok || !k) continue;
    AffineRoot a{beta, *k};
    return is_positive(a) ? a : -a;
  }
  throw NotAReflection("element is not a reflection");
}

std::vector<AffineRoot> AffineWeylGroup::phi_w(const AffineWeylElement& w) const {
  const std::int64_t lw = length(w);
  const std::int64_t bound = lw + 2;
  std::vector<AffineRoot> out;
  for (const auto& pos : data_.positive_roots()) {
    for (const IntVector& beta : {pos, negated(pos)}) {
      for (std::int64_t k = -bound; k <= bound; ++k) {
        const AffineRoot a{beta, k};
        if (is_positive(a)) continue;
        const AffineWeylElement r = reflection_of_root(-a);
        if (length(r) > lw) continue;
        if (std::llabs(k) > lw)
          throw std::logic_error("Phi_w level bound insufficient: reflection at level " +
                                 std::to_string(k) + " passes the length cutoff");
        if (bruhat_leq(r, w)) out.push_back(a);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EnumeratedElement> AffineWeylGroup::enumerate_up_to_length(std::int64_t max_length) const {
  if (max_length < 0) throw PreconditionViolated("length bound must be non-negative");
  if (max_length > max_length_)
    throw BoundExceeded("enumeration length " + std::to_string(max_length) + " exceeds configured bound " +
                        std::to_string(max_length_));
  std::vector<EnumeratedElement> out;
  std::set<AffineWeylElement> seen;
  out.push_back({identity(), {}, 0});
  seen.insert(identity());
  std::size_t begin = 0;
  for (std::int64_t len = 0; len < max_length; ++len) {
    const std::size_t end = out.size();
    for (std::size_t idx = begin; idx < end; ++idx) {
      for (int i = 0; i <= static_cast<int>(rank()); ++i) {
        AffineWeylElement next = multiply(out[idx].element, simple(i));
        if (!seen.insert(next).second) continue;
        std::vector<int> word = out[idx].reduced_word;
        word.push_back(i);
        out.push_back({std::move(next), std::move(word), len + 1});
      }
    }
    begin = end;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text

AffineWeylElement AffineWeylGroup::parse(std::string_view text) const {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto parse_int = [&]() -> std::int64_t {
    skip();
    bool neg = false;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw SyntaxError("expected integer", pos);
    std::int64_t v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, text[pos] - '0', &v))
        throw SyntaxError("integer out of range", pos);
      ++pos;
    }
    return neg ? -v : v;
  };

  AffineWeylElement w = identity();
  while (true) {
    skip();
    const std::size_t start = pos;
    if (pos >= text.size()) throw SyntaxError("expected Weyl group factor", pos);
    const char c = text[pos];
    if (c == 'e') {
      ++pos;
    } else if (c == 't') {
      ++pos;
      skip();
      if (pos >= text.size() || text[pos] != '[') throw SyntaxError("expected '['", pos);
      ++pos;
      IntVector gamma;
      while (true) {
        gamma.push_back(parse_int());
        skip();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ']') {
          ++pos;
          break;
        }
        throw SyntaxError("expected ',' or ']'", pos);
      }
      if (gamma.size() != rank())
        throw SyntaxError("translation needs " + std::to_string(rank()) + " coordinates", start);
      w = multiply(w, translation(std::move(gamma)));
    } else if (c == 's') {
      ++pos;
      int index = 1;
      if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        index = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
          index = index * 10 + (text[pos] - '0');
          if (index > 1000) throw SyntaxError("generator index out of range", start);
          ++pos;
        }
      } else if (rank() != 1) {
        throw SyntaxError("bare 's' is only defined in rank 1", start);
      }
      if (static_cast<std::size_t>(index) > rank()) throw SyntaxError("no generator s" + std::to_string(index), start);
      w = multiply(w, simple(index));
    } else {
      throw SyntaxError("expected 'e', 't[...]' or 's<i>'", pos);
    }
    skip();
    if (pos >= text.size()) break;
    if (text[pos] != '*') throw SyntaxError("expected '*'", pos);
    ++pos;
  }
  return w;
}

std::string AffineWeylGroup::print(const AffineWeylElement& w) const {
  std::vector<std::string> parts;
  if (!is_zero_vector(w.translation())) {
    std::string t = "t[";
    for (std::size_t i = 0; i < rank(); ++i) t += (i ? "," : "") + std::to_string(w.translation()[i]);
    parts.push_back(t + "]");
  }
  for (int i : w.finite().word()) parts.push_back(rank() == 1 ? "s" : "s" + std::to_string(i));
  if (parts.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
  return out;
}

std::string AffineWeylGroup::print(const AffineRoot& a) const {
  std::string out;
  for (std::size_t i = 0; i < a.finite.size(); ++i) {
    const std::int64_t c = a.finite[i];
    if (c == 0) continue;
    const std::string name = rank() == 1 ? "alpha" : "alpha" + std::to_string(i + 1);
    if (c < 0) out += "-";
    else if (!out.empty()) out += "+";
    if (std::llabs(c) != 1) out += std::to_string(std::llabs(c)) + "*";
    out += name;
  }
  if (a.level != 0) {
    if (a.level < 0) out += "-";
    else if (!out.empty()) out += "+";
    if (std::llabs(a.level) != 1) out += std::to_string(std::llabs(a.level)) + "*";
    out += "delta";
  }
  return out.empty() ? "0" : out;
}

AffineRoot AffineWeylGroup::parse_root(std::string_view text) const {
  AffineRoot a{IntVector(rank(), 0), 0};
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto digits = [&]() -> std::optional<std::int64_t> {
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) return std::nullopt;
    std::int64_t v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, text[pos] - '0', &v))
        throw SyntaxError("integer out of range", pos);
      ++pos;
    }
    return v;
  };
  bool first = true;
  while (true) {
    skip();
    if (pos >= text.size()) {
      if (first) throw SyntaxError("expected affine root", pos);
      break;
    }
    std::int64_t sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip();
    } else if (!first) {
      throw SyntaxError("expected '+' or '-'", pos);
    }
    first = false;
    std::int64_t coeff = 1;
    if (auto c = digits()) {
      coeff = *c;
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip();
      } else {
        if (coeff != 0) throw SyntaxError("expected '*' after coefficient", pos);
        continue;  // a literal 0
      }
    }
    if (text.substr(pos, 5) == "delta") {
      pos += 5;
      a.level += sign * coeff;
    } else if (text.substr(pos, 5) == "alpha") {
      pos += 5;
      const std::size_t at = pos;
      std::int64_t index = 1;
      if (auto i = digits()) index = *i;
      else if (rank() != 1) throw SyntaxError("alpha needs an index in rank " + std::to_string(rank()), at);
      if (index < 1 || static_cast<std::size_t>(index) > rank()) throw SyntaxError("no simple root alpha" + std::to_string(index), at);
      a.finite[index - 1] += sign * coeff;
    } else {
      throw SyntaxError("expected 'alpha' or 'delta'", pos);
    }
  }
  if (!is_root(a)) throw NotARoot(std::string(text) + " is not an affine root");
  return a;
}

AffineWeylElement omega_embed(const AffineWeylGroup& target, const IntVector& positive_root,
                              const AffineWeylGroup& a1, const AffineWeylElement& v) {
  if (a1.rank() != 1) throw PreconditionViolated("omega_embed source must be the A1 group");
  if (!target.cartan().is_positive_root(positive_root)) throw NotARoot("omega_embed needs a positive root");
  IntVector gamma = target.cartan().coroot(positive_root);
  for (auto& x : gamma) x *= v.translation()[0];
  AffineWeylElement image = target.translation(std::move(gamma));
  if (!v.finite().is_identity()) {
    image = target.multiply(image, AffineWeylElement(IntVector(target.rank(), 0), target.finite_reflection(positive_root)));
  }
  return image;
}

}  // namespace flagcert
