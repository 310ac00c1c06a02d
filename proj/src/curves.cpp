#include "flagcert/curves.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "flagcert/errors.hpp"
#include "flagcert/text.hpp"

namespace flagcert {

namespace curve_rings {

Ring polynomial() {
  static const Ring r = rings::polynomial("eps");
  return r;
}

Ring laurent() {
  static const Ring r = rings::laurent("eps");
  return r;
}

Ring dual() {
  static const Ring r = rings::dual("eps");
  return r;
}

Ring rational() {
  static const Ring r = rings::rational_functions("eps");
  return r;
}

Ring chart() {
  static const Ring r = rings::polynomial("u");
  return r;
}

Ring rotation() {
  static const Ring r = rings::make({Generator{"lam", true, {}}, Generator{"eps", false, {}}});
  return r;
}

}  // namespace curve_rings

namespace {

// Replaces every "N" in the template by the integer k*n given as "<k>N" or "N".
std::string with_n(std::string_view tmpl, std::int64_t n) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != 'N') {
      out += tmpl[i];
      continue;
    }
    // The multiplier, if any, was already copied; pull it back off.
    std::size_t j = out.size();
    while (j > 0 && std::isdigit(static_cast<unsigned char>(out[j - 1]))) --j;
    std::int64_t k = 1;
    if (j < out.size()) {
      k = std::stoll(out.substr(j));
      out.erase(j);
    }
    out += std::to_string(k * n);
  }
  return out;
}

LaurentSeries eps_t(const Ring& ring, std::int64_t t_power) {
  return LaurentSeries::monomial(RingElement::generator(ring, "eps"), t_power);
}

LoopMatrix specialize(const LoopMatrix& m, const Ring& target, std::string_view name, const RingElement& value) {
  Substitution s(target);
  s.set(std::string(name), value);
  return mat_substitute(m, s);
}

LoopMatrix at_rational(const LoopMatrix& m, std::int64_t value) {
  return specialize(m, rings::rationals(), "eps", RingElement(rings::rationals(), Rational(value)));
}

AffineWeylGroup a1_group(std::int64_t n) {
  // phi_w of t[-3n] needs Bruhat comparisons up to length 6n.
  return AffineWeylGroup(CartanData::A1(), std::max<std::int64_t>(10, 6 * n + 2));
}

LinkOutcome run_link(std::string label, const LoopMatrix& g, const LoopMatrix& h, bool lower) {
  LinkOutcome out;
  out.label = std::move(label);
  try {
    CosetResult r = lower ? coset_equal_lower_borel(g, h) : coset_equal(g, h);
    out.equal = r.equal;
    out.detail = r.equal ? "pass" : "fail";
    out.witness = std::move(r.witness);
  } catch (const IndeterminateMembership& e) {
    out.detail = std::string("indeterminate: ") + e.what();
  }
  return out;
}

LinkOutcome skipped_link(std::string label, const std::string& why) {
  LinkOutcome out;
  out.label = std::move(label);
  out.detail = "skipped: " + why;
  return out;
}

bool passes(const LinkOutcome& l) { return l.equal.value_or(false); }

std::string witness_text(const std::optional<IwahoriWitness>& w) {
  return w ? matrix_print(w->factor) : std::string();
}

nlohmann::ordered_json links_json(const std::vector<LinkOutcome>& links) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& l : links) j[l.label] = l.detail;
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------

LoopMatrix displayed_m1(std::int64_t n) {
  return matrix_parse(with_n("[[1 + eps*t^-N + eps^2*t^-2N + eps^3*t^-3N, -eps^2*t^-2N],"
                             " [eps^2*t^-2N, 1 - eps*t^-N]]",
                             n),
                      curve_rings::polynomial());
}

LoopMatrix displayed_m2(std::int64_t n) {
  return matrix_parse(with_n("[[eps^-2 + eps^-1*t^-N + t^-2N + eps*t^-3N, t^2N], [-t^-2N, 0]]", n),
                      curve_rings::laurent());
}

LoopMatrix displayed_m3(std::int64_t n) {
  return matrix_parse(with_n("[[eps^-3 + eps^-2*t^-N + eps^-1*t^-2N + t^-3N, -eps^-2*t^5N - eps^-1*t^4N - t^3N],"
                             " [-eps^-1*t^-2N, t^3N]]",
                             n),
                      curve_rings::laurent());
}

LoopMatrix product(const Factors& factors) {
  LoopMatrix acc = factors.at(0);
  for (std::size_t i = 1; i < factors.size(); ++i) acc = mat_mul(acc, factors[i]);
  return acc;
}

namespace {

Factors factors_over(const Ring& ring, std::int64_t n) {
  const LaurentSeries one = LaurentSeries::one(ring);
  const LaurentSeries c = one + eps_t(ring, -n);
  const LaurentSeries d = -one + eps_t(ring, -n);
  return {LoopMatrix::upper(c), LoopMatrix::lower(d), LoopMatrix::upper(c), LoopMatrix::from_ints(ring, 0, -1, 1, 0)};
}

}  // namespace

CurveFamily build_family(std::int64_t n) {
  if (n < 1) throw PreconditionViolated("the curve family needs n >= 1");
  Factors factors = factors_over(curve_rings::polynomial(), n);
  LoopMatrix m1 = product(factors);
  return CurveFamily{n, std::move(factors), std::move(m1), displayed_m2(n), displayed_m3(n)};
}

const std::array<SignVariant, 4>& all_sign_variants() {
  static const std::array<SignVariant, 4> v{SignVariant::displayed, SignVariant::flip12, SignVariant::flip21,
                                            SignVariant::flip_both};
  return v;
}

std::string variant_name(SignVariant v) {
  switch (v) {
    case SignVariant::displayed:
      return "displayed";
    case SignVariant::flip12:
      return "flip12";
    case SignVariant::flip21:
      return "flip21";
    case SignVariant::flip_both:
      return "flip_both";
  }
  return "?";
}

LoopMatrix sign_variant(const LoopMatrix& m, SignVariant v) {
  const bool f12 = v == SignVariant::flip12 || v == SignVariant::flip_both;
  const bool f21 = v == SignVariant::flip21 || v == SignVariant::flip_both;
  return LoopMatrix(SeriesGrid{{{m(0, 0), f12 ? -m(0, 1) : m(0, 1)}, {f21 ? -m(1, 0) : m(1, 0), m(1, 1)}}});
}

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::indeterminate:
      return "indeterminate";
  }
  return "?";
}

// ---------------------------------------------------------------------------

LoopMatrix infinity_limit(const LoopMatrix& m3_variant) {
  Substitution to_u(curve_rings::chart());
  to_u.set("eps", GeneratorImage{std::nullopt, RingElement::generator(curve_rings::chart(), "u")});
  return specialize(mat_substitute(m3_variant, to_u), rings::rationals(), "u", RingElement::zero(rings::rationals()));
}

LoopMatrix infinity_first_order(const LoopMatrix& m3_variant) {
  Substitution to_u(curve_rings::chart());
  to_u.set("eps", GeneratorImage{std::nullopt, RingElement::generator(curve_rings::chart(), "u")});
  return specialize(mat_substitute(m3_variant, to_u), curve_rings::dual(), "u",
                    RingElement::generator(curve_rings::dual(), "eps"));
}

ChainReport check_coset_chain(const CurveFamily& fam) {
  ChainReport rep;
  const Ring L = curve_rings::laurent();
  const LoopMatrix m1 = mat_embed(fam.m1, L);
  const auto& variants = all_sign_variants();
  std::array<LoopMatrix, 4> m2v{fam.m2, fam.m2, fam.m2, fam.m2};
  std::array<LoopMatrix, 4> m3v{fam.m3, fam.m3, fam.m3, fam.m3};
  std::array<bool, 4> m2_ok{}, m3_ok{};
  for (std::size_t i = 0; i < 4; ++i) {
    m2v[i] = sign_variant(fam.m2, variants[i]);
    m3v[i] = sign_variant(fam.m3, variants[i]);
    const LaurentSeries d2 = mat_det(m2v[i]);
    const LaurentSeries d3 = mat_det(m3v[i]);
    m2_ok[i] = d2.is_exact_one();
    m3_ok[i] = d3.is_exact_one();
    rep.m2_determinants.emplace_back(variants[i], d2);
    rep.m3_determinants.emplace_back(variants[i], d3);
  }

  for (int lower = 0; lower < 2; ++lower) {
    auto& m1_m2 = lower ? rep.lower_m1_m2 : rep.m1_m2;
    auto& m2_m3 = lower ? rep.lower_m2_m3 : rep.m2_m3;
    auto& m1_m3 = lower ? rep.lower_m1_m3 : rep.m1_m3;
    for (std::size_t i = 0; i < 4; ++i) {
      const std::string label = "m1->m2[" + variant_name(variants[i]) + "]";
      m1_m2.push_back(m2_ok[i] ? run_link(label, m1, m2v[i], lower) : skipped_link(label, "determinant is not 1"));
    }
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        const std::string label = "m2[" + variant_name(variants[i]) + "]->m3[" + variant_name(variants[j]) + "]";
        m2_m3.push_back(m2_ok[i] && m3_ok[j] ? run_link(label, m2v[i], m3v[j], lower)
                                             : skipped_link(label, "determinant is not 1"));
      }
    for (std::size_t j = 0; j < 4; ++j) {
      const std::string label = "m1->m3[" + variant_name(variants[j]) + "]";
      m1_m3.push_back(m3_ok[j] ? run_link(label, m1, m3v[j], lower) : skipped_link(label, "determinant is not 1"));
    }
  }

  const LoopMatrix target = weyl_representative(AffineWeylGroup(CartanData::A1()).translation({-3 * fam.n}));
  for (std::size_t i = 0; i < 4 && !rep.certified; ++i) {
    if (!passes(rep.m1_m2[i])) continue;
    std::vector<std::size_t> order{i};
    for (std::size_t j = 0; j < 4; ++j)
      if (j != i) order.push_back(j);
    for (std::size_t j : order) {
      if (!passes(rep.m2_m3[4 * i + j]) || !passes(rep.m1_m3[j])) continue;
      LoopMatrix limit = fam.m3;
      try {
        limit = infinity_limit(m3v[j]);
      } catch (const NotInTargetRing&) {
        continue;
      }
      CosetResult at_inf = coset_equal(limit, target);
      if (!at_inf.equal) continue;
      rep.certified = true;
      rep.m2_variant = variants[i];
      rep.m3_variant = variants[j];
      rep.m1_m2_witness = rep.m1_m2[i].witness;
      rep.m2_m3_witness = rep.m2_m3[4 * i + j].witness;
      rep.infinity_limit = limit;
      rep.infinity_witness = at_inf.witness;
      break;
    }
  }
  return rep;
}

InfinityReport check_infinity(const CurveFamily& fam, const ChainReport& chain) {
  if (!chain.certified) throw PreconditionViolated("the coset chain is not certified");
  const AffineWeylGroup group(CartanData::A1());
  const LoopMatrix rep = weyl_representative(group.translation({-3 * fam.n}));
  const LoopMatrix m3v = sign_variant(fam.m3, *chain.m3_variant);
  const LoopMatrix limit = infinity_limit(m3v);
  CosetResult coset = coset_equal(limit, rep);
  TangentVector v = translate_tangent(rep, infinity_first_order(m3v));
  auto label = root_label(v);
  return {limit, std::move(coset), std::move(v), label};
}

TangentZeroReport check_tangent_zero(const CurveFamily& fam) {
  const Ring D = curve_rings::dual();
  Substitution to_dual(D);
  to_dual.set("eps", RingElement::generator(D, "eps"));
  TangentVector from_curve = tangent_of_dual_point(mat_substitute(fam.m1, to_dual));
  const LaurentSeries c = LaurentSeries::one(D) + eps_t(D, -fam.n);
  TangentVector from_lhs = tangent_of_dual_point(LoopMatrix::diagonal(c, series_invert(c, std::nullopt)));
  return {std::move(from_curve), std::move(from_lhs)};
}

SchubertReport check_schubert_membership(const AffineWeylGroup& group, const CurveFamily& fam,
                                         const ChainReport& chain) {
  if (!chain.certified) throw PreconditionViolated("the coset chain is not certified");
  const LoopMatrix m2v = sign_variant(fam.m2, *chain.m2_variant);
  const Ring K = curve_rings::rational();
  Substitution to_field(K);
  to_field.set("eps", RingElement::generator(K, "eps"));
  std::vector<LoopMatrix> inputs{mat_substitute(m2v, to_field), at_rational(m2v, 1), at_rational(m2v, 2),
                                 at_rational(fam.m1, 0)};
  return {bruhat_cell(group, inputs[0]), bruhat_cell(group, inputs[1]), bruhat_cell(group, inputs[2]),
          bruhat_cell(group, inputs[3]), std::move(inputs)};
}

RotationReport check_rot_equivariance(const CurveFamily& fam) {
  const Ring R = curve_rings::rotation();
  LoopMatrix rotated = mat_rotate(fam.m1, R, "lam");
  const RingElement scaled = RingElement::generator(R, "lam", -fam.n) * RingElement::generator(R, "eps");
  LoopMatrix reparam = specialize(fam.m1, R, "eps", scaled);
  CosetResult coset = coset_equal(rotated, reparam);
  const RingElement three(curve_rings::polynomial(), Rational(3));
  CosetResult specialized = coset_equal(specialize(rotated, curve_rings::polynomial(), "lam", three),
                                 specialize(reparam, curve_rings::polynomial(), "lam", three));
  return {std::move(rotated), std::move(reparam), std::move(coset), std::move(specialized)};
}

EndpointReport check_endpoints(const CurveFamily& fam) {
  const Ring Q = rings::rationals();
  const AffineWeylGroup group(CartanData::A1());
  const LoopMatrix rep = weyl_representative(group.translation({-3 * fam.n}));
  const LoopMatrix one = LoopMatrix::identity(Q);
  EndpointReport out;
  out.zero = coset_equal(at_rational(fam.m1, 0), one);
  out.infinity_vs_base = coset_equal(rep, one);
  for (int e0 : {1, 2}) {
    const LoopMatrix f = at_rational(fam.m1, e0);
    out.generic_vs_base.emplace_back(e0, coset_equal(f, one));
    out.generic_vs_infinity.emplace_back(e0, coset_equal(f, rep));
  }
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& certificate_check_names() {
  static const std::vector<std::string> names{
      "eq1_expansion",          "eq1_dual_identity",      "determinants",
      "coset_m1_m2",            "coset_m2_m3",            "coset_chain",
      "infinity_limit",         "infinity_tangent",       "tangent_zero",
      "tangent_zero_lhs",       "schubert_generic",       "schubert_eps1",
      "schubert_eps2",          "schubert_base_point",    "rotation_equivariance",
      "rotation_specialization", "endpoint_zero",         "endpoint_infinity_distinct",
      "endpoint_generic_eps1",  "endpoint_generic_eps2",  "phi_w_bound",
      "representative_coherence", "witness_reverification"};
  return names;
}

bool CurveCertificate::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == CheckStatus::pass; });
}

bool CurveCertificate::any_indeterminate() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const CheckRecord& c) { return c.status == CheckStatus::indeterminate; });
}

const CheckRecord* CurveCertificate::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::ordered_json CurveCertificate::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["signResolution"] = sign_resolution;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json item;
    item["name"] = c.name;
    item["status"] = status_name(c.status);
    if (c.witness) item["witness"] = *c.witness;
    item["note"] = c.note;
    j["checks"].push_back(std::move(item));
  }
  return j;
}

std::string CurveCertificate::to_text() const {
  std::ostringstream os;
  os << "certificate n=" << n << (all_pass() ? " (all checks pass)" : " (FAILED)") << '\n';
  for (const auto& c : checks) {
    os << "  " << status_name(c.status) << "  " << c.name;
    if (!c.note.empty()) os << ": " << c.note;
    os << '\n';
    if (c.witness) os << "      witness " << *c.witness << '\n';
  }
  if (sign_resolution.contains("chain")) os << "  sign resolution: " << sign_resolution["chain"].dump() << '\n';
  return os.str();
}

namespace {

class CertificateBuilder {
 public:
  explicit CertificateBuilder(std::int64_t n) { cert_.n = n; }

  // Runs `body`, converting library errors into check outcomes.
  void run(const std::string& name, const std::function<CheckRecord()>& body) {
    CheckRecord rec;
    try {
      rec = body();
    } catch (const IndeterminateMembership& e) {
      rec = indeterminate(e.what());
    } catch (const IndeterminateValuation& e) {
      rec = indeterminate(e.what());
    } catch (const IndeterminatePivot& e) {
      rec = indeterminate(e.what());
    } catch (const InexactResult& e) {
      rec = indeterminate(e.what());
    } catch (const std::exception& e) {
      rec.status = CheckStatus::fail;
      rec.note = std::string("error: ") + e.what();
    }
    rec.name = name;
    records_[name] = std::move(rec);
  }

  void set_sign_resolution(nlohmann::ordered_json j) { cert_.sign_resolution = std::move(j); }

  CurveCertificate finish() {
    for (const auto& name : certificate_check_names()) {
      auto it = records_.find(name);
      if (it == records_.end()) {
        CheckRecord missing;
        missing.name = name;
        missing.note = "check did not run";
        cert_.checks.push_back(std::move(missing));
      } else {
        cert_.checks.push_back(std::move(it->second));
      }
    }
    return std::move(cert_);
  }

 private:
  static CheckRecord indeterminate(const char* what) {
    CheckRecord r;
    r.status = CheckStatus::indeterminate;
    r.note = what;
    return r;
  }

  CurveCertificate cert_;
  std::map<std::string, CheckRecord> records_;
};

CheckRecord outcome(bool ok, std::string note, std::optional<std::string> witness = std::nullopt) {
  CheckRecord r;
  r.status = ok ? CheckStatus::pass : CheckStatus::fail;
  r.note = std::move(note);
  r.witness = std::move(witness);
  return r;
}

struct Recheck {
  std::string what;
  LoopMatrix g, factor, h;
};

nlohmann::ordered_json sign_resolution_json(const ChainReport& chain) {
  nlohmann::ordered_json j;
  j["convention"] = "upper-triangular Borel";
  nlohmann::ordered_json variants = nlohmann::ordered_json::array();
  for (auto v : all_sign_variants()) variants.push_back(variant_name(v));
  j["variants"] = variants;
  nlohmann::ordered_json dets;
  for (std::size_t i = 0; i < chain.m2_determinants.size(); ++i) {
    const std::string name = variant_name(chain.m2_determinants[i].first);
    dets["m2[" + name + "]"] = series_print(chain.m2_determinants[i].second);
    dets["m3[" + name + "]"] = series_print(chain.m3_determinants[i].second);
  }
  j["determinants"] = dets;
  j["m1_m2"] = links_json(chain.m1_m2);
  j["m2_m3"] = links_json(chain.m2_m3);
  j["m1_m3"] = links_json(chain.m1_m3);
  nlohmann::ordered_json chain_j;
  chain_j["certified"] = chain.certified;
  if (chain.certified) {
    chain_j["m2"] = variant_name(*chain.m2_variant);
    chain_j["m3"] = variant_name(*chain.m3_variant);
  }
  j["chain"] = chain_j;
  nlohmann::ordered_json lower;
  lower["m1_m2"] = links_json(chain.lower_m1_m2);
  lower["m2_m3"] = links_json(chain.lower_m2_m3);
  lower["m1_m3"] = links_json(chain.lower_m1_m3);
  j["lowerBorel"] = lower;
  return j;
}

}  // namespace

CurveCertificate full_certificate(std::int64_t n, const CertifyOptions& options) {
  if (n < 1 || n > options.max_n)
    throw PreconditionViolated("n must satisfy 1 <= n <= " + std::to_string(options.max_n) + ", got " +
                               std::to_string(n));
  CertificateBuilder b(n);
  const CurveFamily fam = build_family(n);
  const AffineWeylGroup group = a1_group(n);
  const AffineWeylElement w_target = group.translation({-3 * n});
  const LoopMatrix rep = weyl_representative(w_target);
  const std::string w_text = group.print(w_target);
  std::vector<Recheck> rechecks;

  b.run("eq1_expansion", [&] {
    const bool ok = exactly_equal(fam.m1, displayed_m1(n));
    return outcome(ok, "U(c) L(d) U(c) S over Q[eps] against the displayed matrix", matrix_print(fam.m1));
  });

  b.run("eq1_dual_identity", [&] {
    const Ring D = curve_rings::dual();
    const Factors f = factors_over(D, n);
    const LaurentSeries c = f[0](0, 1);
    const LaurentSeries d = f[1](1, 0);
    const bool cd = exactly_equal(c * d, -LaurentSeries::one(D));
    const LoopMatrix lhs = LoopMatrix::diagonal(c, series_invert(c, std::nullopt));
    const bool ok = cd && exactly_equal(lhs, product(f));
    return outcome(ok, std::string("over Q[eps]/(eps^2): c*d = -1 ") + (cd ? "holds" : "fails") +
                           ", diag(c, c^-1) = U(c) L(d) U(c) S " + (ok ? "holds" : "fails"),
                   matrix_print(lhs));
  });

  b.run("determinants", [&] {
    const LaurentSeries d1 = mat_det(fam.m1), d2 = mat_det(fam.m2), d3 = mat_det(fam.m3);
    const bool ok = d1.is_exact_one() && d2.is_exact_one() && d3.is_exact_one();
    return outcome(ok, "det m1 = " + series_print(d1) + ", det m2 = " + series_print(d2) +
                           ", det m3 = " + series_print(d3));
  });

  std::optional<ChainReport> chain;
  b.run("coset_chain", [&] {
    chain = check_coset_chain(fam);
    b.set_sign_resolution(sign_resolution_json(*chain));
    if (!chain->certified) return outcome(false, "no sign-variant path connects m1, m2, m3 and the limit at infinity");
    return outcome(true, "m1 -> m2[" + variant_name(*chain->m2_variant) + "] -> m3[" +
                             variant_name(*chain->m3_variant) + "] -> " + w_text + " at eps = infinity");
  });
  if (!chain) b.set_sign_resolution(nlohmann::ordered_json::object());

  const Ring L = curve_rings::laurent();
  b.run("coset_m1_m2", [&] {
    if (!chain) return outcome(false, "coset chain unavailable");
    std::string passing;
    const LinkOutcome* first = nullptr;
    for (const auto& l : chain->m1_m2)
      if (passes(l)) {
        passing += (passing.empty() ? "" : ", ") + l.label;
        if (!first) first = &l;
      }
    const std::string displayed = chain->m1_m2[0].detail;
    if (!first) return outcome(false, "no sign variant of m2 is coset-equal to m1 (displayed signs: " + displayed + ")");
    const std::size_t idx = static_cast<std::size_t>(first - chain->m1_m2.data());
    rechecks.push_back({first->label, mat_embed(fam.m1, L), first->witness->factor,
                        sign_variant(fam.m2, all_sign_variants()[idx])});
    return outcome(true, "displayed signs: " + displayed + "; passing: " + passing, witness_text(first->witness));
  });

  b.run("coset_m2_m3", [&] {
    if (!chain) return outcome(false, "coset chain unavailable");
    const LinkOutcome& displayed = chain->m2_m3[0];
    if (displayed.witness) rechecks.push_back({displayed.label, fam.m2, displayed.witness->factor, fam.m3});
    std::string note = "displayed signs: " + displayed.detail;
    if (chain->certified)
      note += "; certified path uses m2[" + variant_name(*chain->m2_variant) + "]->m3[" +
              variant_name(*chain->m3_variant) + "]";
    if (chain->certified && chain->m2_m3_witness)
      rechecks.push_back({"m2->m3 (chain)", sign_variant(fam.m2, *chain->m2_variant), chain->m2_m3_witness->factor,
                          sign_variant(fam.m3, *chain->m3_variant)});
    return outcome(passes(displayed), note, witness_text(displayed.witness));
  });

  std::optional<InfinityReport> inf;
  b.run("infinity_limit", [&] {
    if (!chain || !chain->certified) return outcome(false, "coset chain not certified");
    inf = check_infinity(fam, *chain);
    if (inf->limit_coset.witness) rechecks.push_back({"infinity limit", inf->limit, inf->limit_coset.witness->factor, rep});
    return outcome(inf->limit_coset.equal, "eps := 1/u, u := 0 gives " + matrix_print(inf->limit) + " ~ " + w_text,
                   witness_text(inf->limit_coset.witness));
  });

  b.run("infinity_tangent", [&] {
    if (!inf) return outcome(false, "limit at infinity unavailable");
    const AffineRoot expected{{-1}, -5 * n};
    const bool single = inf->tangent.components().size() == 1;
    const bool ok = single && inf->label && *inf->label == expected &&
                    !inf->tangent.coefficient(Channel::f, -5 * n).is_zero();
    std::string note = "translated by " + w_text + "^-1: " + inf->tangent.to_string() + ", label " +
                       (inf->label ? group.print(*inf->label) : std::string("none"));
    if (chain && chain->m3_variant != SignVariant::displayed) {
      try {
        const TangentVector displayed = translate_tangent(rep, infinity_first_order(fam.m3));
        note += "; displayed signs give " + displayed.to_string();
      } catch (const Error& e) {
        note += std::string("; displayed signs: ") + e.what();
      }
    }
    return outcome(ok, note);
  });

  std::optional<TangentZeroReport> tz;
  b.run("tangent_zero", [&] {
    tz = check_tangent_zero(fam);
    TangentVector expected(rings::rationals());
    expected.add(Channel::h, -n, RingElement::one(rings::rationals()));
    const auto label = root_label(tz->from_curve);
    const bool ok = tz->from_curve == expected && label && *label == AffineRoot{{0}, -n};
    return outcome(ok, tz->from_curve.to_string() + ", label " + (label ? group.print(*label) : std::string("none")));
  });

  b.run("tangent_zero_lhs", [&] {
    if (!tz) return outcome(false, "tangent at 0 unavailable");
    return outcome(tz->from_lhs == tz->from_curve, "diag(c, c^-1) gives " + tz->from_lhs.to_string());
  });

  std::optional<SchubertReport> sch;
  b.run("schubert_generic", [&] {
    if (!chain || !chain->certified) return outcome(false, "coset chain not certified");
    sch = check_schubert_membership(group, fam, *chain);
    const bool ok = group.bruhat_leq(sch->generic.w, w_target);
    return outcome(ok, "m2[" + variant_name(*chain->m2_variant) + "] over Q(eps) lies in the cell of " +
                           group.print(sch->generic.w) + (sch->generic.w == w_target ? " = " : " vs ") + w_text);
  });

  auto specialization = [&](const BruhatCellResult* cell, int e0) {
    if (!sch || !cell) return outcome(false, "generic cell unavailable");
    const bool below_target = group.bruhat_leq(cell->w, w_target);
    const bool below_generic = group.bruhat_leq(cell->w, sch->generic.w);
    return outcome(below_target && below_generic, "eps := " + std::to_string(e0) + " lies in the cell of " +
                                                      group.print(cell->w) + (below_generic ? " <= " : " not <= ") +
                                                      group.print(sch->generic.w));
  };
  b.run("schubert_eps1", [&] { return specialization(sch ? &sch->eps1 : nullptr, 1); });
  b.run("schubert_eps2", [&] { return specialization(sch ? &sch->eps2 : nullptr, 2); });
  b.run("schubert_base_point", [&] {
    if (!sch) return outcome(false, "generic cell unavailable");
    return outcome(sch->eps0.w.is_identity(), "m1 at eps := 0 lies in the cell of " + group.print(sch->eps0.w));
  });

  b.run("rotation_equivariance", [&] {
    RotationReport r = check_rot_equivariance(fam);
    if (r.coset.witness) rechecks.push_back({"rotation", r.rotated, r.coset.witness->factor, r.reparam});
    const bool identical = exactly_equal(r.rotated, r.reparam);
    return outcome(r.coset.equal,
                   std::string("rotate(m1) ~ m1[eps -> lam^-") + std::to_string(n) + " eps] over Q[lam,lam^-1,eps]" +
                       (identical ? " (identical matrices)" : ""),
                   witness_text(r.coset.witness));
  });

  b.run("rotation_specialization", [&] {
    RotationReport r = check_rot_equivariance(fam);
    return outcome(r.specialized.equal, "lam := 3 over Q[eps]", witness_text(r.specialized.witness));
  });

  std::optional<EndpointReport> ends;
  b.run("endpoint_zero", [&] {
    ends = check_endpoints(fam);
    if (ends->zero.witness)
      rechecks.push_back({"f(0)", at_rational(fam.m1, 0), ends->zero.witness->factor, LoopMatrix::identity(rings::rationals())});
    return outcome(ends->zero.equal, "m1 at eps := 0 is in the base coset", witness_text(ends->zero.witness));
  });

  b.run("endpoint_infinity_distinct", [&] {
    if (!ends) return outcome(false, "endpoints unavailable");
    return outcome(!ends->infinity_vs_base.equal, w_text + " is not in the base coset");
  });

  auto generic_endpoint = [&](std::size_t i) {
    if (!ends) return outcome(false, "endpoints unavailable");
    const bool ok = !ends->generic_vs_base[i].second.equal && !ends->generic_vs_infinity[i].second.equal;
    return outcome(ok, "f(" + std::to_string(ends->generic_vs_base[i].first) + ") is in neither endpoint coset");
  };
  b.run("endpoint_generic_eps1", [&] { return generic_endpoint(0); });
  b.run("endpoint_generic_eps2", [&] { return generic_endpoint(1); });

  b.run("phi_w_bound", [&] {
    const auto phi = group.phi_w(w_target);
    const std::int64_t len = group.length(w_target);
    return outcome(static_cast<std::int64_t>(phi.size()) >= len,
                   "|Phi_w| = " + std::to_string(phi.size()) + ", l(w) = " + std::to_string(len) + " for w = " + w_text);
  });

  b.run("representative_coherence", [&] {
    const auto elems = group.enumerate_up_to_length(3);
    std::size_t bad = 0;
    for (const auto& v : elems)
      for (const auto& w : elems)
        if (!representative_coherence(group, v.element, w.element)) ++bad;
    const std::size_t pairs = elems.size() * elems.size();
    return outcome(bad == 0, std::to_string(pairs - bad) + "/" + std::to_string(pairs) + " pairs of length <= 3 agree");
  });

  b.run("witness_reverification", [&] {
    std::size_t ok = 0;
    std::string failed;
    for (const auto& r : rechecks) {
      const bool good = exactly_equal(mat_mul(r.g, r.factor), r.h) && is_in_iwahori(r.factor);
      if (good)
        ++ok;
      else
        failed += (failed.empty() ? "" : ", ") + r.what;
    }
    std::size_t cells = 0, cells_ok = 0;
    if (sch) {
      const std::array<const BruhatCellResult*, 4> results{&sch->generic, &sch->eps1, &sch->eps2, &sch->eps0};
      for (std::size_t i = 0; i < results.size(); ++i) {
        const BruhatCellResult* c = results[i];
        ++cells;
        const LoopMatrix recon = mat_mul(mat_mul(c->left, weyl_representative(c->w, c->left.ring())), c->right);
        if (is_in_iwahori(c->left) && is_in_iwahori(c->right) && exactly_equal(recon, sch->inputs[i])) ++cells_ok;
      }
    }
    const bool pass = failed.empty() && !rechecks.empty() && cells_ok == cells;
    std::string note = std::to_string(ok) + "/" + std::to_string(rechecks.size()) + " coset witnesses and " +
                       std::to_string(cells_ok) + "/" + std::to_string(cells) + " Bruhat factorizations re-verified";
    if (!failed.empty()) note += "; failed: " + failed;
    return outcome(pass, note);
  });

  return b.finish();
}

std::vector<CurveCertificate> certify_all(const std::vector<std::int64_t>& ns, unsigned parallelism,
                                          const CertifyOptions& options) {
  for (auto n : ns)
    if (n < 1 || n > options.max_n)
      throw PreconditionViolated("n must satisfy 1 <= n <= " + std::to_string(options.max_n) + ", got " +
                                 std::to_string(n));
  std::vector<std::optional<CurveCertificate>> slots(ns.size());
  std::vector<std::exception_ptr> errors(ns.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ns.size(); i = next++) {
      try {
        slots[i] = full_certificate(ns[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(ns.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<CurveCertificate> out;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace flagcert
