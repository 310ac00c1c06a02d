#pragma once

// Affine Weyl group W = W_fin |x Q^vee of a finite Cartan matrix: group law,
// length, Bruhat order, action on affine roots, reflections, Phi_w and the
// rank-one embedding.
//
// Conventions (all validated by the test-suite rather than assumed):
//   * an element t_gamma * u acts on affine roots by
//       (t_gamma u)(beta + k delta) = u(beta) + (k + <gamma, u(beta)>) delta,
//     matching conjugation by the loop-group representatives
//     t_{m alpha^vee} -> diag(t^m, t^-m) with the upper-triangular Iwahori;
//   * the affine simple reflection is s_0 = s_{-theta + delta} = t_{-theta^vee} s_theta;
//   * length counts positive affine roots sent to negative ones.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flagcert {

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;

class CartanData {
 public:
  // Computes the positive roots by closure under simple reflections; throws
  // BoundExceeded if more than `max_roots` appear (not of finite type).
  static CartanData from_matrix(IntMatrix cartan, std::size_t max_roots = 2000);
  static CartanData A1();
  static CartanData A2();
  // "A1", "A2", or "A<r>".
  static CartanData from_type(std::string_view name);

  std::size_t rank() const { return cartan_.size(); }
  const IntMatrix& cartan() const { return cartan_; }
  const std::vector<IntVector>& positive_roots() const { return positive_roots_; }
  const IntVector& highest_root() const { return positive_roots_.back(); }

  bool is_root(const IntVector& beta) const;
  bool is_positive_root(const IntVector& beta) const;
  // Coroot of a (positive or negative) root, in simple-coroot coordinates.
  IntVector coroot(const IntVector& beta) const;
  // <gamma, beta> for gamma in the coroot lattice and beta in the root lattice.
  std::int64_t pairing(const IntVector& coroot, const IntVector& root) const;

 private:
  IntMatrix cartan_;
  std::vector<IntVector> positive_roots_;  // sorted by height, then lexicographically
  std::map<IntVector, IntVector> coroots_; // positive root -> coroot
};

class FiniteWeylElement {
 public:
  // Matrix of the action on the root lattice (column j = image of alpha_j)
  // and on the coroot lattice, plus the lexicographically least reduced word.
  FiniteWeylElement(IntMatrix on_roots, IntMatrix on_coroots, std::vector<int> word)
      : on_roots_(std::move(on_roots)), on_coroots_(std::move(on_coroots)), word_(std::move(word)) {}

  const IntMatrix& on_roots() const { return on_roots_; }
  const IntMatrix& on_coroots() const { return on_coroots_; }
  const std::vector<int>& word() const { return word_; }
  bool is_identity() const { return word_.empty(); }

  IntVector apply_to_root(const IntVector& beta) const;
  IntVector apply_to_coroot(const IntVector& gamma) const;

  friend bool operator==(const FiniteWeylElement& a, const FiniteWeylElement& b) {
    return a.on_roots_ == b.on_roots_;
  }
  friend bool operator<(const FiniteWeylElement& a, const FiniteWeylElement& b) {
    return a.on_roots_ < b.on_roots_;
  }

 private:
  IntMatrix on_roots_;
  IntMatrix on_coroots_;
  std::vector<int> word_;
};

// t_translation * finite
class AffineWeylElement {
 public:
  AffineWeylElement(IntVector translation, FiniteWeylElement finite)
      : translation_(std::move(translation)), finite_(std::move(finite)) {}

  const IntVector& translation() const { return translation_; }
  const FiniteWeylElement& finite() const { return finite_; }
  bool is_identity() const;

  friend bool operator==(const AffineWeylElement& a, const AffineWeylElement& b) {
    return a.translation_ == b.translation_ && a.finite_ == b.finite_;
  }
  friend bool operator!=(const AffineWeylElement& a, const AffineWeylElement& b) { return !(a == b); }
  friend bool operator<(const AffineWeylElement& a, const AffineWeylElement& b) {
    if (a.translation_ != b.translation_) return a.translation_ < b.translation_;
    return a.finite_ < b.finite_;
  }

 private:
  IntVector translation_;
  FiniteWeylElement finite_;
};

// beta + level * delta; beta = 0 for imaginary roots.
struct AffineRoot {
  IntVector finite;
  std::int64_t level = 0;

  bool is_real() const;
  bool is_imaginary() const { return !is_real() && level != 0; }
  AffineRoot operator-() const;
  friend bool operator==(const AffineRoot& a, const AffineRoot& b) {
    return a.finite == b.finite && a.level == b.level;
  }
  friend bool operator<(const AffineRoot& a, const AffineRoot& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.finite < b.finite;
  }
};

struct EnumeratedElement {
  AffineWeylElement element;
  std::vector<int> reduced_word;  // generator indices, 0 = affine
  std::int64_t length;
};

class AffineWeylGroup {
 public:
  explicit AffineWeylGroup(CartanData data, std::int64_t max_enumeration_length = 10);

  const CartanData& cartan() const { return data_; }
  std::size_t rank() const { return data_.rank(); }
  std::int64_t max_enumeration_length() const { return max_length_; }

  AffineWeylElement identity() const;
  AffineWeylElement translation(IntVector gamma) const;
  // Simple generator: 0 = affine s_0, 1..rank = finite simple reflections.
  AffineWeylElement simple(int i) const;
  AffineWeylElement from_word(const std::vector<int>& word) const;
  FiniteWeylElement finite_reflection(const IntVector& beta) const;

  AffineWeylElement multiply(const AffineWeylElement& v, const AffineWeylElement& w) const;
  AffineWeylElement inverse(const AffineWeylElement& v) const;

  std::int64_t length(const AffineWeylElement& w) const;
  std::int64_t finite_length(const FiniteWeylElement& u) const;
  bool is_left_descent(int i, const AffineWeylElement& w) const;
  bool bruhat_leq(const AffineWeylElement& v, const AffineWeylElement& w) const;

  bool is_root(const AffineRoot& a) const;
  bool is_positive(const AffineRoot& a) const;  // a must be a root
  AffineRoot act(const AffineWeylElement& w, const AffineRoot& a) const;
  // Positive roots a with w(a) < 0; has length(w) elements.
  std::vector<AffineRoot> inversions(const AffineWeylElement& w) const;

  AffineWeylElement reflection_of_root(const AffineRoot& a) const;
  AffineRoot root_of_reflection(const AffineWeylElement& w) const;  // returns the positive root

  std::vector<AffineRoot> phi_w(const AffineWeylElement& w) const;
  std::vector<EnumeratedElement> enumerate_up_to_length(std::int64_t max_length) const;

  // Text form: "e", "t[c1,...,cr]", "s", "s<i>", joined by "*".
  AffineWeylElement parse(std::string_view text) const;
  std::string print(const AffineWeylElement& w) const;
  std::string print(const AffineRoot& a) const;
  // Inverse of print(AffineRoot): "-alpha-5*delta", "alpha1+2*alpha2+delta", "-2*delta".
  AffineRoot parse_root(std::string_view text) const;

 private:
  FiniteWeylElement make_finite(IntMatrix on_roots, IntMatrix on_coroots) const;
  FiniteWeylElement finite_multiply(const FiniteWeylElement& a, const FiniteWeylElement& b) const;
  FiniteWeylElement finite_inverse(const FiniteWeylElement& a) const;
  bool bruhat_leq_uncached(const AffineWeylElement& v, const AffineWeylElement& w) const;

  CartanData data_;
  std::int64_t max_length_;
  std::vector<FiniteWeylElement> finite_simple_;

  // Memo for the Bruhat recursion; idempotent fill guarded by a mutex.
  struct Memo {
    std::mutex mutex;
    std::map<std::pair<AffineWeylElement, AffineWeylElement>, bool> table;
  };
  std::shared_ptr<Memo> memo_;
};

// The A1 group is the home of the loop-group representatives; omega sends its
// positive coroot to the coroot of `positive_root` and its reflection to
// s_{positive_root}.
AffineWeylElement omega_embed(const AffineWeylGroup& target, const IntVector& positive_root,
                              const AffineWeylGroup& a1, const AffineWeylElement& v);

}  // namespace flagcert
