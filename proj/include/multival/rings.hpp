#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multival/valuation.hpp"

namespace multival {

/// A finitely described subring of Q or Q(i):
///  - MultiValuation: the intersection of the valuation rings of distinct valuations;
///  - Glued: {x in O_1 ∩ O_2 : res_1(x) = res_2(x)} for two valuations whose residue
///    fields are identified by the identity on the prime field.
class RingSpec {
 public:
  enum class Kind { MultiValuation, Glued };

  static RingSpec multi_valuation(std::vector<Valuation> vals);
  static RingSpec glued(const Valuation& v1, const Valuation& v2);

  Kind kind() const noexcept { return kind_; }
  bool is_glued() const noexcept { return kind_ == Kind::Glued; }
  FieldId field() const noexcept { return vals_.front().field(); }
  /// The defining valuations (the two glued ones for Glued).
  const std::vector<Valuation>& valuations() const noexcept { return vals_; }

  /// `mv(Q:2,Q:3)` or `glued(Qi:2+1*i,Qi:2-1*i,id)`.
  std::string to_string() const;

  friend bool operator==(const RingSpec& a, const RingSpec& b) { return a.kind_ == b.kind_ && a.vals_ == b.vals_; }

 private:
  RingSpec(Kind kind, std::vector<Valuation> vals) : kind_(kind), vals_(std::move(vals)) {}

  Kind kind_;
  std::vector<Valuation> vals_;
};

RingSpec parse_ring_spec(std::string_view text);

/// The glued ring over the conjugate primes 2+i, 2-i (residue fields both F_5).
RingSpec ww_ring();
/// O_1 ∩ O_2 for the same two valuations: the integral closure of ww_ring().
RingSpec ww_closure();
/// The multi-valuation ring over all defining valuations of R (R itself for MultiValuation).
RingSpec closure_of(const RingSpec& r);

bool contains(const RingSpec& r, const FieldElem& x);
bool is_unit(const RingSpec& r, const FieldElem& x);
bool in_jacobson(const RingSpec& r, const FieldElem& x);

struct LocalityVerdict {
  bool local = false;
  std::string certificate;           // case-analysis tag when local
  std::optional<FieldElem> witness;  // x with x, 1 - x both non-units when not local
};

LocalityVerdict is_local_ring(const RingSpec& r);
bool verify_locality(const RingSpec& r, const LocalityVerdict& verdict);

/// x = sum r_j * y_j with every r_j in R.
struct ModuleCertificate {
  std::vector<FieldElem> generators;
  FieldElem target;
  std::vector<FieldElem> coefficients;
};

bool verify_certificate(const RingSpec& r, const ModuleCertificate& cert);

struct ModuleGenerator {
  FieldElem generator;
  ModuleCertificate certificate;
};

/// g with val_i(g) = min_j val_i(y_j) and a certificate g in sum R*y_j. MultiValuation only.
ModuleGenerator module_generator(std::span<const FieldElem> ys, const RingSpec& r);

struct MembershipResult {
  bool member = false;
  std::optional<ModuleCertificate> certificate;
  std::string justification;
};

/// Whether x lies in the R-module generated by ys. Glued rings support at most two generators.
MembershipResult module_membership(const FieldElem& x, std::span<const FieldElem> ys, const RingSpec& r);

/// No y_i lies in the R-module generated by the others.
bool independent(std::span<const FieldElem> ys, const RingSpec& r);

std::vector<RingSpec> key_localizations(const RingSpec& r);

/// Monic t^2 - sum*t + product with coefficients in R vanishing at x.
struct IntegralityWitness {
  FieldElem sum;
  FieldElem product;
};

IntegralityWitness integrality_witness(const FieldElem& x, const RingSpec& r);
bool verify_integrality(const FieldElem& x, const RingSpec& r, const IntegralityWitness& w);

/// Outcome of the embeddability catalogue for c*A ⊆ B.
struct Embedding {
  RingSpec from;
  RingSpec to;
  std::optional<FieldElem> scale;           // c when A embeds into B
  std::optional<Valuation> escape_valuation;  // a valuation of B that A does not control

  bool embeds() const { return scale.has_value(); }
  /// For a refutation: some x in A with c*x outside B.
  FieldElem escape(const FieldElem& c) const;
};

Embedding embeddability_witness(const RingSpec& a, const RingSpec& b);

/// Checks a claimed c*A ⊆ B structurally, by value thresholds and residues.
bool verify_embedding(const RingSpec& a, const RingSpec& b, const FieldElem& c);

bool re_slide_verify(std::span<const FieldElem> ys, const FieldElem& a, const RingSpec& r,
                     std::span<const Valuation> vals);

/// Builds a tuple passing re_slide_verify for a nonzero a in R, on the instances where one
/// exists in this catalogue: single-valuation rings (n = 1) and Glued rings with a a unit (n = 2).
std::vector<FieldElem> re_slide_construct(const FieldElem& a, const RingSpec& r);

}  // namespace multival
