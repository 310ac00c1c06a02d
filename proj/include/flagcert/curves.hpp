#pragma once

// The one-parameter family of loop-group matrices through the base point
// whose closure is a projective line tangent to the imaginary root vector of
// -n delta, and the checks that certify its properties for a given n.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "flagcert/affine_weyl.hpp"
#include "flagcert/loopgroup.hpp"
#include "flagcert/tangent.hpp"

namespace flagcert {

namespace curve_rings {
Ring polynomial();     // Q[eps]
Ring laurent();        // Q[eps, eps^-1]
Ring dual();           // Q[eps]/(eps^2)
Ring rational();       // Q(eps)
Ring chart();          // Q[u]
Ring rotation();       // Q[lam, lam^-1, eps]
}  // namespace curve_rings

struct CurveFamily {
  std::int64_t n = 0;
  // U(c), L(d), U(c), S over Q[eps] with c = 1 + eps t^-n, d = -1 + eps t^-n.
  std::vector<LoopMatrix> factors;
  LoopMatrix m1;  // product of the factors, over Q[eps]
  LoopMatrix m2;  // over Q[eps, eps^-1]
  LoopMatrix m3;  // over Q[eps, eps^-1]
};

// Transcriptions of the displayed matrices.
LoopMatrix displayed_m1(std::int64_t n);
LoopMatrix displayed_m2(std::int64_t n);
LoopMatrix displayed_m3(std::int64_t n);

CurveFamily build_family(std::int64_t n);

using Factors = std::vector<LoopMatrix>;
LoopMatrix product(const Factors& factors);

// Independent sign flips of the off-diagonal entries.
enum class SignVariant { displayed, flip12, flip21, flip_both };
const std::array<SignVariant, 4>& all_sign_variants();
std::string variant_name(SignVariant v);
LoopMatrix sign_variant(const LoopMatrix& m, SignVariant v);

enum class CheckStatus { pass, fail, indeterminate };
std::string status_name(CheckStatus s);

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::fail;
  std::optional<std::string> witness;
  std::string note;
};

// Outcome of one coset comparison in the chain.
struct LinkOutcome {
  std::string label;            // e.g. "m1->m2[flip_both]"
  std::optional<bool> equal;    // nullopt: skipped (determinant not 1) or indeterminate
  std::string detail;           // "pass", "fail", "skipped: ...", "indeterminate: ..."
  std::optional<IwahoriWitness> witness;
};

struct ChainReport {
  std::vector<std::pair<SignVariant, LaurentSeries>> m2_determinants;
  std::vector<std::pair<SignVariant, LaurentSeries>> m3_determinants;
  std::vector<LinkOutcome> m1_m2;   // per M2 variant
  std::vector<LinkOutcome> m2_m3;   // per (M2 variant, M3 variant)
  std::vector<LinkOutcome> m1_m3;   // per M3 variant
  std::vector<LinkOutcome> lower_m1_m2, lower_m2_m3, lower_m1_m3;  // lower-Borel convention
  bool certified = false;
  std::optional<SignVariant> m2_variant, m3_variant;
  std::optional<IwahoriWitness> m1_m2_witness, m2_m3_witness;
  std::optional<LoopMatrix> infinity_limit;
  std::optional<IwahoriWitness> infinity_witness;
};

// eps := u^-1 then u := 0.
LoopMatrix infinity_limit(const LoopMatrix& m3_variant);
// eps := u^-1 and u := eps' over the dual numbers: the first-order curve at infinity.
LoopMatrix infinity_first_order(const LoopMatrix& m3_variant);

ChainReport check_coset_chain(const CurveFamily& fam);

struct InfinityReport {
  LoopMatrix limit;
  CosetResult limit_coset;
  TangentVector tangent;
  std::optional<AffineRoot> label;
};
InfinityReport check_infinity(const CurveFamily& fam, const ChainReport& chain);

struct TangentZeroReport {
  TangentVector from_curve;
  TangentVector from_lhs;
};
TangentZeroReport check_tangent_zero(const CurveFamily& fam);

struct SchubertReport {
  BruhatCellResult generic;
  BruhatCellResult eps1;
  BruhatCellResult eps2;
  BruhatCellResult eps0;  // base point, from M1 at eps = 0
  std::vector<LoopMatrix> inputs;  // the four matrices decomposed, in the order above
};
SchubertReport check_schubert_membership(const AffineWeylGroup& group, const CurveFamily& fam,
                                         const ChainReport& chain);

struct RotationReport {
  LoopMatrix rotated;      // rotate(M1)
  LoopMatrix reparam;      // M1 with eps -> lam^-n eps
  CosetResult coset;
  CosetResult specialized;  // lam := 3 over Q[eps]
};
RotationReport check_rot_equivariance(const CurveFamily& fam);

struct EndpointReport {
  CosetResult zero;                    // f(0) ~ 1
  CosetResult infinity_vs_base;        // rep(t[-3n]) ~ 1 (expected false)
  std::vector<std::pair<int, CosetResult>> generic_vs_base;      // f(e0) ~ 1 (expected false)
  std::vector<std::pair<int, CosetResult>> generic_vs_infinity;  // f(e0) ~ rep (expected false)
};
EndpointReport check_endpoints(const CurveFamily& fam);

struct CurveCertificate {
  std::int64_t n = 0;
  nlohmann::ordered_json sign_resolution;
  std::vector<CheckRecord> checks;

  bool all_pass() const;
  bool any_indeterminate() const;
  const CheckRecord* find(std::string_view name) const;
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

// Every certificate carries exactly these checks, in this order.
const std::vector<std::string>& certificate_check_names();

struct CertifyOptions {
  std::int64_t max_n = 20;
};

// PreconditionViolated unless 1 <= n <= options.max_n. Check failures are
// recorded in the certificate, never thrown.
CurveCertificate full_certificate(std::int64_t n, const CertifyOptions& options = {});

// Certificates for each n in order; up to `parallelism` computed concurrently.
std::vector<CurveCertificate> certify_all(const std::vector<std::int64_t>& ns, unsigned parallelism,
                                          const CertifyOptions& options = {});

}  // namespace flagcert
