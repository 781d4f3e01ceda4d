#include "multival/rings.hpp"

#include <algorithm>
#include <cctype>

#include "multival/approx.hpp"
#include "multival/error.hpp"
#include "multival/random.hpp"

namespace multival {

RingSpec RingSpec::multi_valuation(std::vector<Valuation> vals) {
  if (vals.empty()) throw Error(ErrorKind::InvalidSpec, "mv(...) needs at least one valuation");
  for (std::size_t a = 0; a < vals.size(); ++a) {
    if (vals[a].field() != vals.front().field()) throw Error(ErrorKind::FieldMismatch, "mixed fields in mv(...)");
    for (std::size_t b = 0; b < a; ++b) {
      if (vals[a] == vals[b]) throw Error(ErrorKind::InvalidSpec, "repeated valuation " + vals[a].to_string());
    }
  }
  return RingSpec(Kind::MultiValuation, std::move(vals));
}

RingSpec RingSpec::glued(const Valuation& v1, const Valuation& v2) {
  if (v1 == v2) throw Error(ErrorKind::InvalidSpec, "glued(...) needs two distinct valuations");
  if (v1.field() != v2.field()) throw Error(ErrorKind::FieldMismatch, "glued valuations on different fields");
  if (v1.p() != v2.p() || v1.residue_degree() != v2.residue_degree()) {
    throw Error(ErrorKind::InvalidSpec, "residue fields of " + v1.to_string() + " and " + v2.to_string() +
                                            " have different sizes");
  }
  return RingSpec(Kind::Glued, {v1, v2});
}

std::string RingSpec::to_string() const {
  if (kind_ == Kind::Glued) return "glued(" + vals_[0].to_string() + "," + vals_[1].to_string() + ",id)";
  return "mv(" + format_valuation_list(vals_) + ")";
}

RingSpec parse_ring_spec(std::string_view text_in) {
  std::string text;
  for (char c : text_in) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    throw Error(ErrorKind::ParseError, "ring spec '" + text + "' must look like mv(...) or glued(...)");
  }
  std::string head = text.substr(0, open);
  std::string body = text.substr(open + 1, text.size() - open - 2);
  if (head == "mv") return RingSpec::multi_valuation(parse_valuation_list(body));
  if (head == "glued") {
    auto last = body.rfind(',');
    if (last == std::string::npos) throw Error(ErrorKind::ParseError, "glued(...) needs v1, v2, iso");
    std::string iso = body.substr(last + 1);
    if (iso != "id") throw Error(ErrorKind::InvalidSpec, "only the identity residue identification 'id' is supported");
    auto vals = parse_valuation_list(body.substr(0, last));
    if (vals.size() != 2) throw Error(ErrorKind::ParseError, "glued(...) needs exactly two valuations");
    return RingSpec::glued(vals[0], vals[1]);
  }
  throw Error(ErrorKind::ParseError, "unknown ring constructor '" + head + "'");
}

RingSpec ww_ring() {
  return RingSpec::glued(Valuation::gaussian(GaussianInt(2, 1)), Valuation::gaussian(GaussianInt(2, -1)));
}

RingSpec ww_closure() {
  return RingSpec::multi_valuation({Valuation::gaussian(GaussianInt(2, 1)), Valuation::gaussian(GaussianInt(2, -1))});
}

RingSpec closure_of(const RingSpec& r) { return r.is_glued() ? RingSpec::multi_valuation(r.valuations()) : r; }

namespace {

void check_field(const RingSpec& r, const FieldElem& x) {
  if (r.field() != x.field()) throw Error(ErrorKind::FieldMismatch, x.to_string() + " is not in the field of " + r.to_string());
}

FieldElem one(FieldId f) { return FieldElem::from_int(f, 1); }

// Product of the uniformizers of the glued valuations: generates the maximal ideal of
// the closure's Jacobson radical (the rational prime p for conjugate pairs).
FieldElem glue_modulus(const RingSpec& r) {
  return uniformizer(r.valuations()[0]) * uniformizer(r.valuations()[1]);
}

}  // namespace

bool contains(const RingSpec& r, const FieldElem& x) {
  check_field(r, x);
  for (const auto& v : r.valuations()) {
    if (val(v, x) < Value(0)) return false;
  }
  if (r.is_glued()) return residue(r.valuations()[0], x) == residue(r.valuations()[1], x);
  return true;
}

bool is_unit(const RingSpec& r, const FieldElem& x) {
  check_field(r, x);
  return !x.is_zero() && contains(r, x) && contains(r, x.inverse());
}

bool in_jacobson(const RingSpec& r, const FieldElem& x) {
  check_field(r, x);
  if (r.is_glued()) return contains(r, x) && residue(r.valuations()[0], x).is_zero();
  for (const auto& v : r.valuations()) {
    if (val(v, x) <= Value(0)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Locality

LocalityVerdict is_local_ring(const RingSpec& r) {
  if (r.is_glued()) {
    return {true, "glued: res(x)!=0 => x unit; res(x)=0 => res(1-x)=1 => 1-x unit", std::nullopt};
  }
  if (r.valuations().size() == 1) return {true, "valuation-ring: val(x)=0 => x unit; val(x)>0 => 1-x unit", std::nullopt};
  const auto& vals = r.valuations();
  const FieldId f = r.field();
  std::vector<ValueTarget> targets{ValueTarget::congruence(vals[0], FieldElem(f), 1),
                                   ValueTarget::congruence(vals[1], one(f), 1)};
  for (std::size_t k = 2; k < vals.size(); ++k) targets.push_back(ValueTarget::at_least(vals[k], 0));
  return {false, "", approximate(targets)};
}

bool verify_locality(const RingSpec& r, const LocalityVerdict& verdict) {
  if (!verdict.local) {
    if (!verdict.witness) return false;
    const FieldElem& x = *verdict.witness;
    return contains(r, x) && !is_unit(r, x) && !is_unit(r, one(r.field()) - x);
  }
  if (!r.is_glued() && r.valuations().size() != 1) return false;
  // Replay the case analysis on a deterministic sample of members.
  Rng rng(0x10ca1);
  for (int trial = 0, checked = 0; trial < 5000 && checked < 100; ++trial) {
    FieldElem x = rng.element(r.field(), 50);
    if (!contains(r, x)) continue;
    ++checked;
    if (!is_unit(r, x) && !is_unit(r, one(r.field()) - x)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Modules

bool verify_certificate(const RingSpec& r, const ModuleCertificate& cert) {
  if (cert.generators.size() != cert.coefficients.size()) return false;
  FieldElem sum(cert.target.field());
  for (std::size_t j = 0; j < cert.generators.size(); ++j) {
    if (!contains(r, cert.coefficients[j])) return false;
    sum += cert.coefficients[j] * cert.generators[j];
  }
  return sum == cert.target;
}

namespace {

// min_j val_i(y_j) per valuation; +inf when every y_j is zero.
std::vector<Value> module_thresholds(std::span<const FieldElem> ys, const std::vector<Valuation>& vals) {
  std::vector<Value> out;
  for (const auto& v : vals) {
    Value lo = Value::infinity();
    for (const auto& y : ys) lo = std::min(lo, val(v, y));
    out.push_back(lo);
  }
  return out;
}

bool all_zero(std::span<const FieldElem> ys) {
  return std::all_of(ys.begin(), ys.end(), [](const FieldElem& y) { return y.is_zero(); });
}

ModuleCertificate zero_certificate(const FieldElem& x, std::span<const FieldElem> ys) {
  return {std::vector<FieldElem>(ys.begin(), ys.end()), x, std::vector<FieldElem>(ys.size(), FieldElem(x.field()))};
}

}  // namespace

ModuleGenerator module_generator(std::span<const FieldElem> ys, const RingSpec& r) {
  if (r.is_glued()) throw Error(ErrorKind::UnsupportedRing, "module_generator needs a multi-valuation ring");
  if (ys.empty() || all_zero(ys)) throw Error(ErrorKind::AllZero, "module_generator needs a nonzero generator");
  for (const auto& y : ys) check_field(r, y);
  const FieldId f = r.field();
  const auto& vals = r.valuations();

  if (ys.size() == 1) {
    return {ys[0], {{ys[0]}, ys[0], {one(f)}}};
  }

  // For each valuation, the least generator attaining the minimum; coefficient r_j is
  // near 1 there when j is that generator and near 0 otherwise.
  std::vector<std::size_t> argmin(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    Value lo = Value::infinity();
    for (std::size_t j = 0; j < ys.size(); ++j) {
      Value vj = val(vals[i], ys[j]);
      if (vj < lo) {
        lo = vj;
        argmin[i] = j;
      }
    }
  }
  ModuleCertificate cert{std::vector<FieldElem>(ys.begin(), ys.end()), FieldElem(f), {}};
  FieldElem g(f);
  for (std::size_t j = 0; j < ys.size(); ++j) {
    std::vector<ValueTarget> targets;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      targets.push_back(ValueTarget::congruence(vals[i], argmin[i] == j ? one(f) : FieldElem(f), 1));
    }
    FieldElem rj = approximate(targets);
    cert.coefficients.push_back(rj);
    g += rj * ys[j];
  }
  cert.target = g;
  auto expected = module_thresholds(ys, vals);
  if (value_vector(vals, g) != expected || !verify_certificate(r, cert)) {
    throw Error(ErrorKind::ConstructionFailed, "module generator failed verification");
  }
  return {g, cert};
}

namespace {

MembershipResult multi_valuation_membership(const FieldElem& x, std::span<const FieldElem> ys, const RingSpec& r) {
  const auto& vals = r.valuations();
  if (x.is_zero()) return {true, zero_certificate(x, ys), "zero lies in every module"};
  if (ys.empty() || all_zero(ys)) return {false, std::nullopt, "the module generated is {0}"};
  auto thresholds = module_thresholds(ys, vals);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    Value vx = val(vals[i], x);
    if (vx < thresholds[i]) {
      return {false, std::nullopt,
              "val at " + vals[i].to_string() + " is " + vx.to_string() + " < " + thresholds[i].to_string()};
    }
  }
  ModuleGenerator gen = module_generator(ys, r);
  FieldElem t = x / gen.generator;
  ModuleCertificate cert{std::vector<FieldElem>(ys.begin(), ys.end()), x, {}};
  for (const auto& c : gen.certificate.coefficients) cert.coefficients.push_back(t * c);
  if (!verify_certificate(r, cert)) throw Error(ErrorKind::ConstructionFailed, "membership certificate failed verification");
  return {true, cert, "val_i(x) >= min_j val_i(y_j) at every valuation"};
}

MembershipResult glued_membership(const FieldElem& x, std::span<const FieldElem> ys, const RingSpec& r) {
  const FieldId f = r.field();
  if (x.is_zero()) return {true, zero_certificate(x, ys), "zero lies in every module"};
  if (ys.empty() || all_zero(ys)) return {false, std::nullopt, "the module generated is {0}"};
  if (ys.size() == 1) {
    FieldElem ratio = x / ys[0];
    if (contains(r, ratio)) return {true, ModuleCertificate{{ys[0]}, x, {ratio}}, "x/y lies in R"};
    return {false, std::nullopt, "x/y = " + ratio.to_string() + " is not in R"};
  }

  // M = R*y1 + R*y2 sits between S*g and p*S*g (S the closure, S*g = S*y1 + S*y2), so it is
  // determined by its image in S*g / p*S*g = F_p x F_p, an F_p-span of the images of y1, y2.
  const RingSpec closure = closure_of(r);
  const auto& vals = r.valuations();
  auto thresholds = module_thresholds(ys, vals);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    Value vx = val(vals[i], x);
    if (vx < thresholds[i]) {
      return {false, std::nullopt,
              "val at " + vals[i].to_string() + " is " + vx.to_string() + " < " + thresholds[i].to_string()};
    }
  }
  ModuleGenerator gen = module_generator(ys, closure);
  const FieldElem& g = gen.generator;
  auto image = [&](const FieldElem& z) {
    return std::pair{residue(vals[0], z / g), residue(vals[1], z / g)};
  };
  auto u1 = image(ys[0]);
  auto u2 = image(ys[1]);
  auto ux = image(x);
  const Integer& p = vals[0].p();
  for (Integer a = 0; a < p; ++a) {
    for (Integer b = 0; b < p; ++b) {
      ResidueElem ra = residue_of_integer(vals[0], a), rb = residue_of_integer(vals[0], b);
      if (!(ra * u1.first + rb * u2.first == ux.first && ra * u1.second + rb * u2.second == ux.second)) continue;
      const FieldElem fa = FieldElem::from_integer(f, a), fb = FieldElem::from_integer(f, b);
      const FieldElem pg = glue_modulus(r) * g;
      const FieldElem t = (x - fa * ys[0] - fb * ys[1]) / pg;
      if (!contains(closure, t)) throw Error(ErrorKind::ConstructionFailed, "residue correction left the closure");
      const FieldElem tp = t * glue_modulus(r);
      ModuleCertificate cert{{ys[0], ys[1]}, x,
                             {fa + tp * gen.certificate.coefficients[0], fb + tp * gen.certificate.coefficients[1]}};
      if (!verify_certificate(r, cert)) throw Error(ErrorKind::ConstructionFailed, "glued certificate failed verification");
      return {true, cert, "residue correction (" + a.get_str() + "," + b.get_str() + ")"};
    }
  }
  return {false, std::nullopt,
          "image (" + ux.first.to_string() + "," + ux.second.to_string() + ") is outside the span of (" +
              u1.first.to_string() + "," + u1.second.to_string() + ") and (" + u2.first.to_string() + "," +
              u2.second.to_string() + "); searched " + Integer(p * p).get_str() + " combinations"};
}

}  // namespace

MembershipResult module_membership(const FieldElem& x, std::span<const FieldElem> ys, const RingSpec& r) {
  check_field(r, x);
  for (const auto& y : ys) check_field(r, y);
  if (r.is_glued()) {
    if (ys.size() > 2) throw Error(ErrorKind::UnsupportedArity, "glued module membership supports at most 2 generators");
    return glued_membership(x, ys, r);
  }
  return multi_valuation_membership(x, ys, r);
}

bool independent(std::span<const FieldElem> ys, const RingSpec& r) {
  for (std::size_t i = 0; i < ys.size(); ++i) {
    std::vector<FieldElem> others;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      if (j != i) others.push_back(ys[j]);
    }
    if (module_membership(ys[i], others, r).member) return false;
  }
  return true;
}

std::vector<RingSpec> key_localizations(const RingSpec& r) {
  if (r.is_glued()) return {r};
  std::vector<RingSpec> out;
  for (const auto& v : r.valuations()) out.push_back(RingSpec::multi_valuation({v}));
  return out;
}

// ---------------------------------------------------------------------------
// Integrality

IntegralityWitness integrality_witness(const FieldElem& x, const RingSpec& r) {
  if (!r.is_glued()) throw Error(ErrorKind::UnsupportedRing, "integrality witnesses are for glued rings");
  check_field(r, x);
  const auto& vals = r.valuations();
  if (!contains(closure_of(r), x)) throw Error(ErrorKind::NotInClosure, x.to_string() + " has a negative valuation");
  IntegralityWitness w;
  if (contains(r, x)) {
    w = {x + x, x * x};
  } else {
    // x' with swapped residues makes x + x' and x*x' have equal residues.
    const ValueTarget targets[] = {
        ValueTarget::congruence(vals[0], lift_residue(vals[0], residue(vals[1], x)).to_field(), 1),
        ValueTarget::congruence(vals[1], lift_residue(vals[1], residue(vals[0], x)).to_field(), 1)};
    FieldElem other = approximate(targets);
    w = {x + other, x * other};
  }
  if (!verify_integrality(x, r, w)) throw Error(ErrorKind::ConstructionFailed, "integrality witness failed verification");
  return w;
}

bool verify_integrality(const FieldElem& x, const RingSpec& r, const IntegralityWitness& w) {
  return contains(r, w.sum) && contains(r, w.product) && (x * x - w.sum * x + w.product).is_zero();
}

// ---------------------------------------------------------------------------
// Embeddability

FieldElem Embedding::escape(const FieldElem& c) const {
  if (!escape_valuation) throw Error(ErrorKind::InvalidSpec, "embedding holds; there is no escape");
  if (c.is_zero()) throw Error(ErrorKind::ZeroInput, "scale must be nonzero");
  const Valuation& w = *escape_valuation;
  const FieldId f = from.field();
  std::vector<ValueTarget> targets{ValueTarget::exact(w, -(val(w, c).finite() + 1))};
  if (from.is_glued()) {
    for (const auto& v : from.valuations()) targets.push_back(ValueTarget::congruence(v, one(f), 1));
  } else {
    for (const auto& v : from.valuations()) targets.push_back(ValueTarget::at_least(v, 0));
  }
  return approximate(targets);
}

Embedding embeddability_witness(const RingSpec& a, const RingSpec& b) {
  if (a.field() != b.field()) throw Error(ErrorKind::FieldMismatch, "rings over different fields");
  const auto& va = a.valuations();
  Embedding e{a, b, std::nullopt, std::nullopt};
  for (const auto& w : b.valuations()) {
    if (std::find(va.begin(), va.end(), w) == va.end()) {
      e.escape_valuation = w;
      return e;
    }
  }
  if (!b.is_glued() || a == b) {
    e.scale = one(a.field());
  } else {
    e.scale = glue_modulus(b);
  }
  return e;
}

bool verify_embedding(const RingSpec& a, const RingSpec& b, const FieldElem& c) {
  if (c.is_zero() || a.field() != b.field() || c.field() != a.field()) return false;
  const auto& va = a.valuations();
  for (const auto& w : b.valuations()) {
    if (std::find(va.begin(), va.end(), w) == va.end()) return false;
  }
  if (!b.is_glued()) {
    return std::all_of(b.valuations().begin(), b.valuations().end(),
                       [&](const Valuation& w) { return val(w, c) >= Value(0); });
  }
  if (a == b) return contains(b, c);
  return val(b.valuations()[0], c) >= Value(1) && val(b.valuations()[1], c) >= Value(1);
}

// ---------------------------------------------------------------------------
// Scrambled independent tuples

bool re_slide_verify(std::span<const FieldElem> ys, const FieldElem& a, const RingSpec& r,
                     std::span<const Valuation> vals) {
  if (a.is_zero()) throw Error(ErrorKind::ZeroInput, "re_slide needs a nonzero scalar");
  std::vector<FieldElem> yv(ys.begin(), ys.end());
  bool scrambled = true;
  for (const auto& v : vals) {
    for (const auto& y : yv) {
      if (y.field() != v.field()) throw Error(ErrorKind::FieldMismatch, "tuple and valuations on different fields");
    }
  }
  {
    std::size_t zeros = 0;
    for (const auto& y : yv) zeros += y.is_zero() ? 1 : 0;
    if (zeros > 0 && zeros < yv.size()) scrambled = false;
    for (const auto& v : vals) {
      for (std::size_t j = 1; j < yv.size() && scrambled; ++j) {
        if (val(v, yv[j]) != val(v, yv[0])) scrambled = false;
      }
    }
  }
  if (!scrambled) return false;
  for (std::size_t i = 0; i < yv.size(); ++i) {
    std::vector<FieldElem> others;
    for (std::size_t j = 0; j < yv.size(); ++j) {
      if (j != i) others.push_back(yv[j]);
    }
    if (module_membership(a * yv[i], others, r).member) return false;
  }
  return true;
}

std::vector<FieldElem> re_slide_construct(const FieldElem& a, const RingSpec& r) {
  check_field(r, a);
  if (a.is_zero() || !contains(r, a)) throw Error(ErrorKind::NoInstance, "re_slide needs a nonzero element of R");
  const FieldId f = r.field();
  if (!r.is_glued()) {
    if (r.valuations().size() == 1) return {one(f)};
    throw Error(ErrorKind::NoInstance,
                "scrambled pairs over a multi-valuation ring always satisfy y_i in R*y_j; no instance exists");
  }
  if (!is_unit(r, a)) {
    throw Error(ErrorKind::NoInstance, "a lies in the maximal ideal, so a*y_1 lies in R*y_2 for any scrambled pair");
  }
  const auto& vals = r.valuations();
  // y = (1, s) with s a unit at both valuations and res_1(s)/res_2(s) outside {rho, 1/rho},
  // rho = res_1(a)/res_2(a).
  ResidueElem rho = residue(vals[0], a) * residue(vals[1], a).inverse();
  ResidueElem rho_inv = rho.inverse();
  for (Integer q = 1; q < vals[0].p(); ++q) {
    ResidueElem rq = residue_of_integer(vals[0], q);
    if (rq == rho || rq == rho_inv) continue;
    const ValueTarget targets[] = {ValueTarget::congruence(vals[0], FieldElem::from_integer(f, q), 1),
                                   ValueTarget::congruence(vals[1], one(f), 1)};
    std::vector<FieldElem> ys{one(f), approximate(targets)};
    if (!re_slide_verify(ys, a, r, vals)) throw Error(ErrorKind::ConstructionFailed, "re_slide tuple failed verification");
    return ys;
  }
  throw Error(ErrorKind::NoInstance, "residue field too small to avoid both ratios");
}

}  // namespace multival
