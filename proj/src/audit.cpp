#include <algorithm>
#include <sstream>

#include "multival/approx.hpp"
#include "multival/error.hpp"
#include "multival/locsent.hpp"
#include "multival/rings.hpp"
#include "multival/scramble.hpp"
#include "multival/topology.hpp"
#include "multival/witness.hpp"

namespace multival {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<TopologySpec> parse_parts(const std::string& text) {
  std::vector<TopologySpec> out;
  for (const auto& s : split(text, '|')) out.push_back(TopologySpec{parse_ring_spec(s)});
  return out;
}

std::vector<long> parse_longs(const std::string& text) {
  std::vector<long> out;
  for (const auto& s : split(text, ',')) out.push_back(std::stol(s));
  return out;
}

bool parse_bool(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw Error(ErrorKind::ParseError, "expected true or false, got '" + text + "'");
}

bool check(const Witness& w) {
  const std::string& kind = w.kind;
  if (kind == "val") {
    Valuation v = parse_valuation(w.get("v"));
    return val(v, parse_elem(w.get("x"), v.field())) == parse_value(w.get("value"));
  }
  if (kind == "residue") {
    Valuation v = parse_valuation(w.get("v"));
    return residue(v, parse_elem(w.get("x"), v.field())).to_string() == w.get("residue");
  }
  if (kind == "approx") {
    const FieldId f = parse_field_id(w.get("field"));
    FieldElem x = parse_elem(w.get("x"), f);
    if (x.is_zero()) return false;
    for (const auto& t : split(w.get("targets"), ';')) {
      if (!parse_target(t, f).satisfied_by(x)) return false;
    }
    return true;
  }
  if (kind == "scramble") {
    auto vals = parse_valuation_list(w.get("vals"));
    const FieldId f = vals.front().field();
    auto tuple = parse_tuple(w.get("tuple"), f);
    auto final = parse_tuple(w.get("final"), f);
    auto m = PrimeFieldMatrix::parse(w.get("matrix"));
    const Rational& det = m.determinant();
    return m.is_integral() && (det == 1 || det == -1) && m.apply(tuple) == final && is_scrambled(final, vals);
  }
  if (kind == "step") {
    auto vals = parse_valuation_list(w.get("vals"));
    const FieldId f = vals.front().field();
    FieldElem z = parse_elem(w.get("z"), f), wv = parse_elem(w.get("w"), f);
    FieldElem c = FieldElem::from_integer(f, Integer(w.get("c")));
    return std::all_of(vals.begin(), vals.end(),
                       [&](const Valuation& v) { return val(v, z - c * wv) == std::min(val(v, z), val(v, wv)); });
  }
  if (kind == "ring") {
    RingSpec r = parse_ring_spec(w.get("spec"));
    FieldElem x = parse_elem(w.get("x"), r.field());
    const std::string& pred = w.get("pred");
    bool value;
    if (pred == "contains") {
      value = contains(r, x);
    } else if (pred == "unit") {
      value = is_unit(r, x);
    } else if (pred == "jacobson") {
      value = in_jacobson(r, x);
    } else {
      return false;
    }
    return value == parse_bool(w.get("holds"));
  }
  if (kind == "local-ring") {
    RingSpec r = parse_ring_spec(w.get("spec"));
    return verify_locality(r, LocalityVerdict{true, w.get("certificate"), std::nullopt});
  }
  if (kind == "nonlocal-ring") {
    RingSpec r = parse_ring_spec(w.get("spec"));
    return verify_locality(r, LocalityVerdict{false, "", parse_elem(w.get("x"), r.field())});
  }
  if (kind == "module") {
    RingSpec r = parse_ring_spec(w.get("spec"));
    ModuleCertificate cert{parse_tuple(w.get("generators"), r.field()), parse_elem(w.get("target"), r.field()),
                           parse_tuple(w.get("coefficients"), r.field())};
    return verify_certificate(r, cert);
  }
  if (kind == "nonmodule") {
    RingSpec r = parse_ring_spec(w.get("spec"));
    auto gens = parse_tuple(w.get("generators"), r.field());
    return !module_membership(parse_elem(w.get("target"), r.field()), gens, r).member;
  }
  if (kind == "independent") {
    RingSpec r = parse_ring_spec(w.get("spec"));
    auto ys = parse_tuple(w.get("tuple"), r.field());
    return independent(ys, r) == parse_bool(w.get("holds"));
  }
  if (kind == "integral") {
    RingSpec r = parse_ring_spec(w.get("spec"));
    const FieldId f = r.field();
    return verify_integrality(parse_elem(w.get("x"), f), r,
                              IntegralityWitness{parse_elem(w.get("sum"), f), parse_elem(w.get("product"), f)});
  }
  if (kind == "embed") {
    RingSpec a = parse_ring_spec(w.get("from")), b = parse_ring_spec(w.get("to"));
    return verify_embedding(a, b, parse_elem(w.get("scale"), a.field()));
  }
  if (kind == "escape") {
    RingSpec a = parse_ring_spec(w.get("from")), b = parse_ring_spec(w.get("to"));
    FieldElem c = parse_elem(w.get("scale"), a.field()), x = parse_elem(w.get("x"), a.field());
    return !c.is_zero() && contains(a, x) && !contains(b, c * x);
  }
  if (kind == "key-localization") {
    RingSpec r = parse_ring_spec(w.get("spec"));
    RingSpec k = parse_ring_spec(w.get("component"));
    auto all = key_localizations(r);
    return std::find(all.begin(), all.end(), k) != all.end();
  }
  if (kind == "re-slide") {
    RingSpec r = parse_ring_spec(w.get("spec"));
    auto ys = parse_tuple(w.get("tuple"), r.field());
    return re_slide_verify(ys, parse_elem(w.get("a"), r.field()), r, r.valuations());
  }
  if (kind == "local-top") {
    TopologySpec t{parse_ring_spec(w.get("spec"))};
    return t.ring.valuations().size() == 1 && is_local_topology(t).local;
  }
  if (kind == "nonlocal-top") {
    TopologySpec t{parse_ring_spec(w.get("spec"))};
    const FieldId f = t.ring.field();
    return verify_nonlocality(t, parse_elem(w.get("e"), f), parse_elem(w.get("x"), f));
  }
  if (kind == "coarser") {
    RingSpec coarse = parse_ring_spec(w.get("coarse")), fine = parse_ring_spec(w.get("fine"));
    return verify_embedding(fine, coarse, parse_elem(w.get("scale"), fine.field()));
  }
  if (kind == "v-coarsening") {
    TopologySpec t{parse_ring_spec(w.get("spec"))};
    Valuation v = parse_valuation(w.get("v"));
    auto all = v_coarsenings(t);
    return std::find(all.begin(), all.end(), v) != all.end() && is_coarser(TopologySpec{RingSpec::multi_valuation({v})}, t);
  }
  if (kind == "filter-fine" || kind == "filter-coarse") {
    TopologySpec t{parse_ring_spec(w.get("spec"))};
    auto parts = parse_parts(w.get("parts"));
    auto scales = parse_tuple(w.get("scales"), t.ring.field());
    FieldElem c = parse_elem(w.get("c"), t.ring.field());
    return kind == "filter-fine" ? verify_fine_basis(t, parts, scales, c) : verify_coarse_basis(t, parts, scales, c);
  }
  if (kind == "density") {
    TopologySpec t{parse_ring_spec(w.get("spec"))};
    auto parts = parse_parts(w.get("parts"));
    return verify_density(parts, parse_tuple(w.get("centers"), t.ring.field()), parse_longs(w.get("radii")),
                          parse_elem(w.get("x"), t.ring.field()));
  }
  if (kind == "density-refuted") {
    auto parts = parse_parts(w.get("parts"));
    std::size_t i = std::stoul(w.get("first")), j = std::stoul(w.get("second"));
    Valuation v = parse_valuation(w.get("valuation"));
    if (i >= parts.size() || j >= parts.size() || i == j) return false;
    auto has = [&](const TopologySpec& p) {
      const auto& vs = p.ring.valuations();
      return std::find(vs.begin(), vs.end(), v) != vs.end();
    };
    // Balls 0 + m_v and 1 + m_v are disjoint because val(0 - 1) = 0 < 1.
    const FieldId f = v.field();
    return has(parts[i]) && has(parts[j]) && val(v, FieldElem(f) - FieldElem::from_int(f, 1)) < Value(1);
  }
  if (kind == "locsent") {
    LocalSentence s = parse_sentence(w.get("sentence"));
    auto tops = parse_parts(w.get("topologies"));
    SearchBounds b;
    b.scale_bound = std::stol(w.get("k"));
    b.height = std::stol(w.get("height"));
    b.samples = std::stoi(w.get("samples"));
    b.seed = std::stoull(w.get("seed"));
    b.collapse = w.get("collapse") == "yes";
    if (w.has("seeds")) b.seeds = parse_tuple(w.get("seeds"), tops.front().ring.field());
    std::vector<std::pair<std::string, std::string>> bindings;
    for (const auto& item : split(w.get("bindings"), ';')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "binding '" + item + "' has no '='");
      bindings.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    auto value = evaluate_under(s, tops, b, bindings);
    return value.has_value() && *value == parse_bool(w.get("expect"));
  }
  throw Error(ErrorKind::ParseError, "unknown witness kind '" + kind + "'");
}

}  // namespace

AuditResult audit(const Witness& w) {
  try {
    bool ok = check(w);
    return {ok, ok ? "verified" : "claim does not hold"};
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
}

}  // namespace multival
