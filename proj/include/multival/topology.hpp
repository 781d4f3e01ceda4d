#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multival/rings.hpp"
#include "multival/witness.hpp"

namespace multival {

/// The field topology with neighborhood basis {c*R : c != 0}.
struct TopologySpec {
  RingSpec ring;

  std::string to_string() const { return "tau(" + ring.to_string() + ")"; }
  friend bool operator==(const TopologySpec& a, const TopologySpec& b) { return a.ring == b.ring; }
};

/// c*R.
struct Ball {
  FieldElem scale;
  RingSpec ring;

  bool contains(const FieldElem& x) const;
  std::string to_string() const;
};

/// Product of the uniformizers of the defining valuations. Powers t^m * R form a chain
/// basis of the topology.
FieldElem chain_generator(const RingSpec& r);

/// Some c with c*R2 ⊆ R1, i.e. tau(R1) is coarser than tau(R2); empty when refuted.
std::optional<FieldElem> coarsening_scale(const TopologySpec& coarse, const TopologySpec& fine);
bool is_coarser(const TopologySpec& coarse, const TopologySpec& fine);

/// c'' with c''*R ⊆ c*R ∩ c'*R.
FieldElem refine_scale(const TopologySpec& t, const FieldElem& c1, const FieldElem& c2);

struct TopologyLocality {
  bool local = false;
  std::string certificate;       // case-analysis tag when local
  std::vector<Valuation> pair;   // the two valuations driving the escape family when not local
};

/// Local iff there is a single underlying valuation. Otherwise the bounded set B = O_1 ∩ ... ∩ O_n
/// has no bounded C: nonlocality_element gives, for any scale e, an x in B with 1/x and
/// 1/(1-x) outside e*B.
TopologyLocality is_local_topology(const TopologySpec& t);

/// x_k with val_1(x_k) = k, val_2(1 - x_k) = k, and x_k integral at the remaining valuations.
FieldElem nonlocality_element(const TopologySpec& t, long k);
/// Least k >= 1 for which x_k escapes the candidate bound e*B.
long escape_exponent(const TopologySpec& t, const FieldElem& e);
/// x in B, and neither 1/x nor 1/(1-x) in e*B.
bool verify_nonlocality(const TopologySpec& t, const FieldElem& e, const FieldElem& x);

std::vector<Valuation> v_coarsenings(const TopologySpec& t);

struct LocalComponents {
  std::vector<TopologySpec> components;
  bool local_ring_nonlocal_topology = false;
};

LocalComponents local_components(const TopologySpec& t);

struct SumReport {
  bool verified = false;
  bool refuted = false;
  std::string note;
  std::vector<Witness> witnesses;
};

/// The parts' valuation sets are disjoint and cover those of t, and every part is a
/// MultiValuation ring; parts sharing a valuation are refuted by disjoint balls.
SumReport independent_sum_check(const TopologySpec& t, const std::vector<TopologySpec>& parts, int trials,
                                std::uint64_t seed);

/// For random triples of distinct primes, both groupings of tau(Z_(p) ∩ Z_(q) ∩ Z_(r)) pass.
SumReport associativity_check(std::uint64_t seed, int trials);

/// A point of the intersection of the balls a_i + t_i^{r_i} * R_i.
FieldElem density_point(const std::vector<TopologySpec>& parts, const std::vector<FieldElem>& centers,
                        const std::vector<long>& radii);

bool verify_fine_basis(const TopologySpec& t, const std::vector<TopologySpec>& parts,
                       const std::vector<FieldElem>& part_scales, const FieldElem& c);
bool verify_coarse_basis(const TopologySpec& t, const std::vector<TopologySpec>& parts,
                         const std::vector<FieldElem>& part_scales, const FieldElem& c);
bool verify_density(const std::vector<TopologySpec>& parts, const std::vector<FieldElem>& centers,
                    const std::vector<long>& radii, const FieldElem& x);

}  // namespace multival
