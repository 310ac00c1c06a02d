#include "flagcert/tangent.hpp"

#include "flagcert/errors.hpp"
#include "flagcert/text.hpp"

namespace flagcert {

namespace {

// Coefficient of generator^power (power 0 or 1) in c, as an element of `into`.
RingElement generator_part(const RingElement& c, std::size_t index, std::int64_t power, const Ring& into) {
  TermMap out;
  for (const auto& [e, v] : c.terms()) {
    if (e[index] != power) continue;
    Exponents rest;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != index) rest.push_back(e[i]);
    out.emplace(std::move(rest), v);
  }
  return RingElement(into, std::move(out));
}

LaurentSeries series_generator_part(const LaurentSeries& a, std::size_t index, const Ring& into) {
  LaurentSeries::TermTable t;
  for (const auto& [k, c] : a.terms()) t.emplace(k, generator_part(c, index, 1, into));
  return LaurentSeries(into, std::move(t), a.precision());
}

std::size_t dual_index(const Ring& ring, std::string_view eps) {
  const auto idx = ring->index_of(eps);
  if (!idx || ring->generator(*idx).nilpotency != 2)
    throw PreconditionViolated("tangent extraction needs a generator " + std::string(eps) +
                               " with square zero; got " + ring->name());
  return *idx;
}

LoopMatrix evaluate_at_zero(const LoopMatrix& g, std::string_view eps, const Ring& reduced) {
  Substitution ev(reduced);
  ev.set(std::string(eps), RingElement::zero(reduced));
  return mat_substitute(g, ev);
}

TangentVector extract(const LoopMatrix& g, std::size_t index, const Ring& reduced, const LoopMatrix& ev) {
  const LoopMatrix p = mat_mul(g, mat_embed(mat_inv(ev), g.ring()));
  auto part = [&](int i, int j) { return series_generator_part(p(i, j), index, reduced); };
  SeriesGrid x{{{part(0, 0), part(0, 1)}, {part(1, 0), part(1, 1)}}};
  return project_nminus(LieElement(LoopMatrix(std::move(x))));
}

void require_known_below(const LaurentSeries& a, std::int64_t bound) {
  if (a.precision() && *a.precision() < bound)
    throw IndeterminateValuation("entry known only to O(t^" + std::to_string(*a.precision()) +
                                 "), need coefficients below t^" + std::to_string(bound));
}

}  // namespace

std::string channel_name(Channel c) {
  switch (c) {
    case Channel::e:
      return "e";
    case Channel::f:
      return "f";
    case Channel::h:
      return "h";
  }
  return "?";
}

LieElement::LieElement(LoopMatrix m) : m_(std::move(m)) {
  const LaurentSeries trace = m_(0, 0) + m_(1, 1);
  if (series_compare(trace, LaurentSeries::zero(trace.ring())).kind == SeriesEquality::unequal)
    throw PreconditionViolated("Lie algebra element must have trace zero, got " + series_print(trace));
}

bool is_nminus_basis(Channel c, std::int64_t level) { return c == Channel::f ? level <= 0 : level < 0; }

RingElement TangentVector::coefficient(Channel c, std::int64_t level) const {
  auto it = components_.find({level, c});
  return it == components_.end() ? RingElement::zero(ring_) : it->second;
}

void TangentVector::add(Channel c, std::int64_t level, const RingElement& value) {
  if (!is_nminus_basis(c, level))
    throw PreconditionViolated("(" + channel_name(c) + "," + std::to_string(level) + ") is not in n^-");
  require_same_ring(ring_, value.ring(), "tangent coefficient");
  const Key key{level, c};
  RingElement sum = coefficient(c, level) + value;
  if (sum.is_zero())
    components_.erase(key);
  else
    components_.insert_or_assign(key, std::move(sum));
}

bool operator==(const TangentVector& a, const TangentVector& b) {
  return same_ring(a.ring_, b.ring_) && a.components_ == b.components_;
}

nlohmann::ordered_json TangentVector::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [key, c] : components_) {
    nlohmann::ordered_json item;
    item["channel"] = channel_name(key.second);
    item["level"] = key.first;
    item["coeff"] = ring_print(c);
    out.push_back(std::move(item));
  }
  return out;
}

std::string TangentVector::to_string() const {
  if (components_.empty()) return "0";
  std::string out;
  for (const auto& [key, c] : components_) {
    if (!out.empty()) out += "; ";
    std::string coeff = ring_print(c);
    if (coeff.find(' ') != std::string::npos) coeff = "(" + coeff + ")";
    out += "(" + channel_name(key.second) + "," + std::to_string(key.first) + "): " + coeff;
  }
  return out;
}

TangentVector project_nminus(const LieElement& x) {
  const LoopMatrix& m = x.matrix();
  require_known_below(m(0, 0), 0);
  require_known_below(m(0, 1), 0);
  require_known_below(m(1, 0), 1);
  TangentVector v(m.ring());
  for (const auto& [k, c] : m(0, 0).terms())
    if (k < 0) v.add(Channel::h, k, c);
  for (const auto& [k, c] : m(0, 1).terms())
    if (k < 0) v.add(Channel::e, k, c);
  for (const auto& [k, c] : m(1, 0).terms())
    if (k <= 0) v.add(Channel::f, k, c);
  return v;
}

TangentVector tangent_of_dual_point(const LoopMatrix& g, std::string_view eps) {
  const std::size_t index = dual_index(g.ring(), eps);
  const Ring reduced = ring_without(g.ring(), eps);
  const LoopMatrix ev = evaluate_at_zero(g, eps, reduced);
  if (!is_in_iwahori(ev)) throw NotAtBasePoint("the point does not reduce to the base point: ev = " + matrix_print(ev));
  return extract(g, index, reduced, ev);
}

TangentVector translate_tangent(const LoopMatrix& rep, const LoopMatrix& g, std::string_view eps) {
  const std::size_t index = dual_index(g.ring(), eps);
  const LoopMatrix h = mat_mul(mat_inv(mat_embed(rep, g.ring())), g);
  const Ring reduced = ring_without(g.ring(), eps);
  const LoopMatrix ev = evaluate_at_zero(h, eps, reduced);
  if (!is_in_iwahori(ev))
    throw NotAtExpectedPoint("the point does not reduce to " + matrix_print(rep) + " I");
  return extract(h, index, reduced, ev);
}

std::optional<AffineRoot> root_label(const TangentVector& v) {
  if (v.components().size() != 1) return std::nullopt;
  const auto& [key, c] = *v.components().begin();
  switch (key.second) {
    case Channel::e:
      return AffineRoot{{1}, key.first};
    case Channel::f:
      return AffineRoot{{-1}, key.first};
    case Channel::h:
      return AffineRoot{{0}, key.first};
  }
  return std::nullopt;
}

Ring ring_without(const Ring& ring, std::string_view generator) {
  std::vector<Generator> rest;
  for (const auto& g : ring->generators())
    if (g.name != generator) rest.push_back(g);
  if (rest.empty()) return rings::rationals();
  const bool fraction = ring->is_fraction_field() && rest.size() == ring->rank();
  return rings::make(std::move(rest), fraction);
}

}  // namespace flagcert
