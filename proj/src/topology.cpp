#include "multival/topology.hpp"

#include <algorithm>
#include <set>

#include "multival/approx.hpp"
#include "multival/error.hpp"
#include "multival/random.hpp"

namespace multival {

bool Ball::contains(const FieldElem& x) const { return multival::contains(ring, x / scale); }

std::string Ball::to_string() const { return "(" + scale.to_string() + ")*" + ring.to_string(); }

FieldElem chain_generator(const RingSpec& r) {
  FieldElem t = FieldElem::from_int(r.field(), 1);
  for (const auto& v : r.valuations()) t *= uniformizer(v);
  return t;
}

std::optional<FieldElem> coarsening_scale(const TopologySpec& coarse, const TopologySpec& fine) {
  return embeddability_witness(fine.ring, coarse.ring).scale;
}

bool is_coarser(const TopologySpec& coarse, const TopologySpec& fine) {
  return coarsening_scale(coarse, fine).has_value();
}

FieldElem refine_scale(const TopologySpec& t, const FieldElem& c1, const FieldElem& c2) {
  if (c1.is_zero() || c2.is_zero()) throw Error(ErrorKind::ZeroInput, "ball scales must be nonzero");
  // Glued balls need one extra power so the quotient lands in m_1 ∩ m_2 ⊆ R.
  const long extra = t.ring.is_glued() ? 1 : 0;
  std::vector<ValueTarget> targets;
  for (const auto& v : t.ring.valuations()) {
    targets.push_back(ValueTarget::at_least(v, std::max(val(v, c1).finite(), val(v, c2).finite()) + extra));
  }
  FieldElem c = approximate(targets);
  if (!contains(t.ring, c / c1) || !contains(t.ring, c / c2)) {
    throw Error(ErrorKind::ConstructionFailed, "refined ball is not inside both balls");
  }
  return c;
}

TopologyLocality is_local_topology(const TopologySpec& t) {
  const auto& vals = t.ring.valuations();
  if (vals.size() == 1) {
    return {true, "V-topology: val(x)<=0 => 1/x in R; val(x)>0 => 1/(1-x) in R", {}};
  }
  return {false, "", {vals[0], vals[1]}};
}

FieldElem nonlocality_element(const TopologySpec& t, long k) {
  const auto& vals = t.ring.valuations();
  if (vals.size() < 2) throw Error(ErrorKind::InvalidSpec, t.to_string() + " is local; there is no escaping family");
  if (k < 1) throw Error(ErrorKind::InvalidSpec, "escape exponent must be at least 1");
  const FieldId f = t.ring.field();
  const FieldElem one = FieldElem::from_int(f, 1);
  auto power = [](const FieldElem& base, long n) {
    FieldElem out = FieldElem::from_int(base.field(), 1);
    for (long j = 0; j < n; ++j) out *= base;
    return out;
  };
  std::vector<ValueTarget> targets{
      ValueTarget::congruence(vals[0], power(uniformizer(vals[0]), k), k + 1),
      ValueTarget::congruence(vals[1], one - power(uniformizer(vals[1]), k), k + 1)};
  for (std::size_t j = 2; j < vals.size(); ++j) targets.push_back(ValueTarget::at_least(vals[j], 0));
  return approximate(targets);
}

long escape_exponent(const TopologySpec& t, const FieldElem& e) {
  if (e.is_zero()) throw Error(ErrorKind::ZeroInput, "candidate bound scale must be nonzero");
  const auto& vals = t.ring.valuations();
  if (vals.size() < 2) throw Error(ErrorKind::InvalidSpec, t.to_string() + " is local; there is no escaping family");
  return std::max({1L, 1 - val(vals[0], e).finite(), 1 - val(vals[1], e).finite()});
}

bool verify_nonlocality(const TopologySpec& t, const FieldElem& e, const FieldElem& x) {
  const FieldId f = t.ring.field();
  const FieldElem one = FieldElem::from_int(f, 1);
  if (e.is_zero() || x.is_zero() || x == one) return false;
  const RingSpec bounded = closure_of(t.ring);
  return contains(bounded, x) && !contains(bounded, one / (x * e)) && !contains(bounded, one / ((one - x) * e));
}

std::vector<Valuation> v_coarsenings(const TopologySpec& t) {
  std::vector<Valuation> out = t.ring.valuations();
  for (const auto& v : out) {
    if (!is_coarser(TopologySpec{RingSpec::multi_valuation({v})}, t)) {
      throw Error(ErrorKind::ConstructionFailed, v.to_string() + " does not coarsen " + t.to_string());
    }
  }
  return out;
}

LocalComponents local_components(const TopologySpec& t) {
  LocalComponents out;
  for (const auto& r : key_localizations(t.ring)) out.components.push_back(TopologySpec{r});
  out.local_ring_nonlocal_topology = t.ring.is_glued();
  return out;
}

// ---------------------------------------------------------------------------
// Independent sums

namespace {

std::string join_parts(const std::vector<TopologySpec>& parts) {
  std::string out;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (j) out += "|";
    out += parts[j].ring.to_string();
  }
  return out;
}

std::string join_longs(const std::vector<long>& xs) {
  std::string out;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(xs[j]);
  }
  return out;
}

}  // namespace

bool verify_fine_basis(const TopologySpec& t, const std::vector<TopologySpec>& parts,
                       const std::vector<FieldElem>& part_scales, const FieldElem& c) {
  if (t.ring.is_glued() || parts.size() != part_scales.size() || c.is_zero()) return false;
  // ⋂ c_i R_i ⊆ c R iff val_v(c_i) >= val_v(c) at every valuation v of part i.
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].ring.is_glued() || part_scales[i].is_zero()) return false;
    for (const auto& v : parts[i].ring.valuations()) {
      if (val(v, part_scales[i]) < val(v, c)) return false;
    }
  }
  return true;
}

bool verify_coarse_basis(const TopologySpec& t, const std::vector<TopologySpec>& parts,
                         const std::vector<FieldElem>& part_scales, const FieldElem& c) {
  if (t.ring.is_glued() || parts.size() != part_scales.size() || c.is_zero()) return false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].ring.is_glued() || part_scales[i].is_zero()) return false;
    for (const auto& v : parts[i].ring.valuations()) {
      if (val(v, c) < val(v, part_scales[i])) return false;
    }
  }
  return true;
}

FieldElem density_point(const std::vector<TopologySpec>& parts, const std::vector<FieldElem>& centers,
                        const std::vector<long>& radii) {
  if (parts.size() != centers.size() || parts.size() != radii.size()) {
    throw Error(ErrorKind::SpecMismatch, "one center and one radius per part");
  }
  std::vector<ValueTarget> targets;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (const auto& v : parts[i].ring.valuations()) targets.push_back(ValueTarget::congruence(v, centers[i], radii[i]));
  }
  return approximate(targets);
}

bool verify_density(const std::vector<TopologySpec>& parts, const std::vector<FieldElem>& centers,
                    const std::vector<long>& radii, const FieldElem& x) {
  if (parts.size() != centers.size() || parts.size() != radii.size()) return false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].ring.is_glued()) return false;
    for (const auto& v : parts[i].ring.valuations()) {
      if (val(v, x - centers[i]) < Value(radii[i])) return false;
    }
  }
  return true;
}

SumReport independent_sum_check(const TopologySpec& t, const std::vector<TopologySpec>& parts, int trials,
                                std::uint64_t seed) {
  if (t.ring.is_glued()) throw Error(ErrorKind::SpecMismatch, "independent sums are checked over multi-valuation topologies");
  if (parts.empty()) throw Error(ErrorKind::SpecMismatch, "no parts given");
  const auto& vals = t.ring.valuations();
  const FieldId f = t.ring.field();
  std::set<Valuation> covered;
  for (const auto& part : parts) {
    if (part.ring.is_glued()) throw Error(ErrorKind::SpecMismatch, "parts must be multi-valuation topologies");
    if (part.ring.field() != f) throw Error(ErrorKind::FieldMismatch, "parts live over a different field");
    for (const auto& v : part.ring.valuations()) {
      if (std::find(vals.begin(), vals.end(), v) == vals.end()) {
        throw Error(ErrorKind::SpecMismatch, v.to_string() + " is not a valuation of " + t.to_string());
      }
      covered.insert(v);
    }
  }
  if (covered.size() != vals.size()) throw Error(ErrorKind::SpecMismatch, "parts do not cover every valuation of " + t.to_string());

  SumReport report;
  const std::string spec = t.ring.to_string();
  const std::string part_text = join_parts(parts);

  // A valuation shared by two parts makes the balls 0 + m and 1 + m disjoint.
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      for (const auto& v : parts[i].ring.valuations()) {
        const auto& vj = parts[j].ring.valuations();
        if (std::find(vj.begin(), vj.end(), v) == vj.end()) continue;
        report.refuted = true;
        report.note = "parts " + std::to_string(i) + " and " + std::to_string(j) + " share " + v.to_string() +
                      "; the balls 0+m and 1+m there are disjoint";
        report.witnesses.push_back(Witness("density-refuted")
                                       .add("spec", spec)
                                       .add("parts", part_text)
                                       .add("first", std::to_string(i))
                                       .add("second", std::to_string(j))
                                       .add("valuation", v.to_string()));
        return report;
      }
    }
  }

  const long height = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(Rng::sub_seed(seed, static_cast<std::uint64_t>(trial)));
    // ⋂ c R_i ⊆ c R.
    FieldElem c = rng.nonzero_element(f, height);
    std::vector<FieldElem> same(parts.size(), c);
    if (!verify_fine_basis(t, parts, same, c)) throw Error(ErrorKind::ConstructionFailed, "fine basis inclusion failed");
    report.witnesses.push_back(Witness("filter-fine")
                                   .add("spec", spec)
                                   .add("parts", part_text)
                                   .add("scales", format_tuple(same))
                                   .add("c", c.to_string()));
    // c R ⊆ ⋂ c_i R_i.
    std::vector<FieldElem> scales;
    std::vector<ValueTarget> targets;
    for (const auto& part : parts) {
      scales.push_back(rng.nonzero_element(f, height));
      for (const auto& v : part.ring.valuations()) targets.push_back(ValueTarget::at_least(v, val(v, scales.back()).finite()));
    }
    FieldElem coarse = approximate(targets);
    if (!verify_coarse_basis(t, parts, scales, coarse)) throw Error(ErrorKind::ConstructionFailed, "coarse basis inclusion failed");
    report.witnesses.push_back(Witness("filter-coarse")
                                   .add("spec", spec)
                                   .add("parts", part_text)
                                   .add("scales", format_tuple(scales))
                                   .add("c", coarse.to_string()));
    // ⋂ (a_i + t_i^{r_i} R_i) is nonempty.
    std::vector<FieldElem> centers;
    std::vector<long> radii;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      centers.push_back(rng.element(f, height));
      radii.push_back(rng.uniform(0, 4));
    }
    FieldElem x = density_point(parts, centers, radii);
    if (!verify_density(parts, centers, radii, x)) throw Error(ErrorKind::ConstructionFailed, "density point failed");
    report.witnesses.push_back(Witness("density")
                                   .add("spec", spec)
                                   .add("parts", part_text)
                                   .add("centers", format_tuple(centers))
                                   .add("radii", join_longs(radii))
                                   .add("x", x.to_string()));
  }
  report.verified = true;
  report.note = std::to_string(trials) + " trials of both basis inclusions and density";
  return report;
}

SumReport associativity_check(std::uint64_t seed, int trials) {
  static const long primes[] = {2, 3, 5, 7, 11, 13};
  SumReport report;
  auto mv = [](std::initializer_list<long> ps) {
    std::vector<Valuation> vals;
    for (long p : ps) vals.push_back(Valuation::rational(p));
    return TopologySpec{RingSpec::multi_valuation(vals)};
  };
  auto absorb = [&](const SumReport& part) {
    report.witnesses.insert(report.witnesses.end(), part.witnesses.begin(), part.witnesses.end());
    return part.verified;
  };
  const int inner_trials = 5;
  bool ok = true;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t sub = Rng::sub_seed(seed, static_cast<std::uint64_t>(trial));
    Rng rng(sub);
    std::vector<long> pool(std::begin(primes), std::end(primes));
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    const long p = pool[0], q = pool[1], r = pool[2];
    const TopologySpec whole = mv({p, q, r});
    // ((p, q), r)
    ok = absorb(independent_sum_check(mv({p, q}), {mv({p}), mv({q})}, inner_trials, Rng::sub_seed(sub, 1))) && ok;
    ok = absorb(independent_sum_check(whole, {mv({p, q}), mv({r})}, inner_trials, Rng::sub_seed(sub, 2))) && ok;
    // (p, (q, r))
    ok = absorb(independent_sum_check(mv({q, r}), {mv({q}), mv({r})}, inner_trials, Rng::sub_seed(sub, 3))) && ok;
    ok = absorb(independent_sum_check(whole, {mv({p}), mv({q, r})}, inner_trials, Rng::sub_seed(sub, 4))) && ok;
    // flat three-part sum
    ok = absorb(independent_sum_check(whole, {mv({p}), mv({q}), mv({r})}, inner_trials, Rng::sub_seed(sub, 5))) && ok;
  }
  report.verified = ok;
  report.note = std::to_string(trials) + " prime triples, both groupings and the flat sum";
  return report;
}

}  // namespace multival
