#include "multival/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <memory>
#include <optional>
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

void emit(std::ostream& out, const Witness& w) { out << w.to_line() << "\n"; }

std::string yes(bool b) { return b ? "true" : "false"; }

/// t^2 - s*t + p with integer-looking coefficients printed with signs.
std::string format_quadratic(const FieldElem& s, const FieldElem& p) {
  std::string out = "t^2";
  auto term = [&](const FieldElem& c, const std::string& monomial) {
    if (c.is_zero()) return;
    if (c.im() == 0) {
      Rational mag = abs(c.re());
      out += c.re() < 0 ? " - " : " + ";
      if (mag == 1 && !monomial.empty()) {
        out += monomial;
      } else {
        out += mag.get_str() + (monomial.empty() ? "" : "*" + monomial);
      }
    } else {
      out += " + (" + c.to_string() + ")" + (monomial.empty() ? "" : "*" + monomial);
    }
  };
  term(-s, "t");
  term(p, "");
  return out;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t j = 0; j < items.size(); ++j) out += (j ? sep : "") + items[j];
  return out;
}

FieldElem power(const FieldElem& base, long n) {
  FieldElem out = FieldElem::from_int(base.field(), 1);
  FieldElem b = n < 0 ? base.inverse() : base;
  for (long j = 0; j < (n < 0 ? -n : n); ++j) out *= b;
  return out;
}

/// Audits every WITNESS line in text; returns (verified, total, failures).
struct AuditSummary {
  std::size_t verified = 0, total = 0;
  std::vector<std::string> failures;
};

AuditSummary audit_text(const std::string& text) {
  AuditSummary s;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("WITNESS:", 0) != 0) continue;
    ++s.total;
    AuditResult r;
    try {
      r = audit(parse_witness(line));
    } catch (const std::exception& e) {
      r = {false, e.what()};
    }
    if (r.ok) {
      ++s.verified;
    } else {
      s.failures.push_back(r.detail + " :: " + line);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Commands

struct Globals {
  std::string field;
  std::uint64_t seed = 0;
  int trials = 100;
};

FieldId field_or(const Globals& g, FieldId fallback) { return g.field.empty() ? fallback : parse_field_id(g.field); }

void require_field(const Globals& g, FieldId actual, const std::string& what) {
  if (!g.field.empty() && parse_field_id(g.field) != actual) {
    throw Error(ErrorKind::FieldMismatch, what + " is over " + std::string(field_name(actual)) + ", not " + g.field);
  }
}

int cmd_val(const Globals& g, const std::string& v_text, const std::string& x_text, bool want_residue,
            std::ostream& out) {
  Valuation v = parse_valuation(v_text);
  require_field(g, v.field(), v.to_string());
  FieldElem x = parse_elem(x_text, v.field());
  if (want_residue) {
    ResidueElem r = residue(v, x);
    out << "RESIDUE: " << r.to_string() << "\n";
    out << "RESIDUE-FIELD: F_" << v.residue_field_size().get_str() << "\n";
    emit(out, Witness("residue").add("v", v.to_string()).add("x", x.to_string()).add("residue", r.to_string()));
  } else {
    Value n = val(v, x);
    out << "VAL: " << n.to_string() << "\n";
    emit(out, Witness("val").add("v", v.to_string()).add("x", x.to_string()).add("value", n.to_string()));
  }
  return kExitOk;
}

int cmd_approx(const Globals& g, const std::vector<std::string>& target_texts, std::ostream& out) {
  if (target_texts.empty()) throw Error(ErrorKind::InvalidSpec, "give at least one --target");
  const FieldId f = field_or(g, FieldId::Rationals);
  std::vector<ValueTarget> targets;
  std::vector<std::string> printed;
  std::vector<Valuation> vals;
  for (const auto& t : target_texts) {
    targets.push_back(parse_target(t, f));
    printed.push_back(targets.back().to_string());
    vals.push_back(targets.back().valuation);
    out << "TARGET: " << printed.back() << "\n";
  }
  FieldElem x = approximate(targets);
  out << "X: " << x.to_string() << "\n";
  out << "VALUES: " << format_value_vector(value_vector(vals, x)) << "\n";
  emit(out, Witness("approx").add("field", std::string(field_name(f))).add("targets", join(printed, ";")).add("x", x.to_string()));
  return kExitOk;
}

int cmd_scramble(const Globals& g, const std::string& vals_text, const std::string& tuple_text, std::ostream& out) {
  auto vals = parse_valuation_list(vals_text);
  if (vals.empty()) throw Error(ErrorKind::InvalidSpec, "give at least one valuation");
  const FieldId f = vals.front().field();
  require_field(g, f, "valuation list");
  auto xs = parse_tuple(tuple_text, f);
  ScrambleTrace trace = scramble(xs, vals);
  out << "VALUATIONS: " << format_valuation_list(vals) << "\n";
  out << "INITIAL: " << format_tuple(trace.initial) << "\n";
  out << "DISCREPANCY: " << trace.initial_discrepancy << "\n";
  std::vector<FieldElem> cur = trace.initial;
  std::size_t k = 0;
  for (const auto& s : trace.steps) {
    const FieldElem c = FieldElem::from_integer(f, s.c);
    out << "STEP " << ++k << ": x" << s.target + 1 << " -= " << s.c.get_str() << "*x" << s.source + 1 << " at "
        << vals[s.valuation_index].to_string() << " discrepancy " << s.discrepancy_after << "\n";
    emit(out, Witness("step")
                  .add("vals", format_valuation_list(vals))
                  .add("z", cur[s.target].to_string())
                  .add("w", cur[s.source].to_string())
                  .add("c", s.c.get_str()));
    cur[s.target] -= c * cur[s.source];
  }
  out << "FINAL: " << format_tuple(trace.final) << "\n";
  out << "MATRIX: " << trace.matrix.to_string() << "\n";
  out << "DETERMINANT: " << trace.matrix.determinant().get_str() << "\n";
  out << "SCRAMBLED: " << yes(is_scrambled(trace.final, vals)) << "\n";
  emit(out, Witness("scramble")
                .add("vals", format_valuation_list(vals))
                .add("tuple", format_tuple(trace.initial))
                .add("matrix", trace.matrix.to_string())
                .add("final", format_tuple(trace.final)));
  return kExitOk;
}

const std::string& need(const std::vector<std::string>& args, std::size_t j, const std::string& what) {
  if (j >= args.size()) throw CLI::ValidationError("missing argument: " + what);
  return args[j];
}

int cmd_ring(const Globals& g, const std::string& spec_text, const std::vector<std::string>& args, std::ostream& out) {
  RingSpec r = parse_ring_spec(spec_text);
  require_field(g, r.field(), r.to_string());
  const FieldId f = r.field();
  const std::string spec = r.to_string();
  const std::string& action = need(args, 0, "ring action");
  out << "RING: " << spec << "\n";
  if (action == "contains" || action == "unit" || action == "jacobson") {
    FieldElem x = parse_elem(need(args, 1, "element"), f);
    bool holds = action == "contains" ? contains(r, x) : action == "unit" ? is_unit(r, x) : in_jacobson(r, x);
    std::string key = action == "contains" ? "CONTAINS" : action == "unit" ? "UNIT" : "JACOBSON";
    out << key << ": " << yes(holds) << "\n";
    emit(out, Witness("ring").add("spec", spec).add("pred", action).add("x", x.to_string()).add("holds", yes(holds)));
    return kExitOk;
  }
  if (action == "local?") {
    LocalityVerdict v = is_local_ring(r);
    out << "LOCAL: " << yes(v.local) << "\n";
    if (v.local) {
      out << "CERTIFICATE: " << v.certificate << "\n";
      emit(out, Witness("local-ring").add("spec", spec).add("certificate", v.certificate));
    } else {
      out << "NONUNIT-PAIR: x = " << v.witness->to_string() << ", 1 - x = "
          << (FieldElem::from_int(f, 1) - *v.witness).to_string() << "\n";
      emit(out, Witness("nonlocal-ring").add("spec", spec).add("x", v.witness->to_string()));
    }
    return kExitOk;
  }
  if (action == "member") {
    FieldElem x = parse_elem(need(args, 1, "element"), f);
    auto ys = parse_tuple(need(args, 2, "generators"), f);
    MembershipResult m = module_membership(x, ys, r);
    out << "MEMBER: " << yes(m.member) << "\n";
    out << "JUSTIFICATION: " << m.justification << "\n";
    if (m.member) {
      out << "COEFFICIENTS: " << format_tuple(m.certificate->coefficients) << "\n";
      emit(out, Witness("module")
                    .add("spec", spec)
                    .add("target", x.to_string())
                    .add("generators", format_tuple(ys))
                    .add("coefficients", format_tuple(m.certificate->coefficients)));
    } else {
      emit(out, Witness("nonmodule").add("spec", spec).add("target", x.to_string()).add("generators", format_tuple(ys)));
    }
    return kExitOk;
  }
  if (action == "independent") {
    auto ys = parse_tuple(need(args, 1, "tuple"), f);
    bool holds = independent(ys, r);
    out << "INDEPENDENT: " << yes(holds) << "\n";
    emit(out, Witness("independent").add("spec", spec).add("tuple", format_tuple(ys)).add("holds", yes(holds)));
    return kExitOk;
  }
  if (action == "integral-witness") {
    FieldElem x = parse_elem(need(args, 1, "element"), f);
    IntegralityWitness w = integrality_witness(x, r);
    out << "POLYNOMIAL: " << format_quadratic(w.sum, w.product) << "\n";
    emit(out, Witness("integral")
                  .add("spec", spec)
                  .add("x", x.to_string())
                  .add("sum", w.sum.to_string())
                  .add("product", w.product.to_string()));
    return kExitOk;
  }
  if (action == "key-localizations") {
    for (const auto& k : key_localizations(r)) {
      out << "KEY-LOCALIZATION: " << k.to_string() << "\n";
      emit(out, Witness("key-localization").add("spec", spec).add("component", k.to_string()));
    }
    return kExitOk;
  }
  if (action == "embed") {
    RingSpec b = parse_ring_spec(need(args, 1, "target ring spec"));
    Embedding e = embeddability_witness(r, b);
    out << "TARGET: " << b.to_string() << "\n";
    out << "EMBEDS: " << yes(e.embeds()) << "\n";
    if (e.embeds()) {
      out << "SCALE: " << e.scale->to_string() << "\n";
      emit(out, Witness("embed").add("from", spec).add("to", b.to_string()).add("scale", e.scale->to_string()));
      return kExitOk;
    }
    out << "ESCAPE-VALUATION: " << e.escape_valuation->to_string() << "\n";
    const FieldElem pi = uniformizer(*e.escape_valuation);
    for (long n : {0L, 2L, 4L}) {
      FieldElem c = power(pi, n);
      FieldElem x = e.escape(c);
      out << "ESCAPE: c = " << c.to_string() << ", x = " << x.to_string() << "\n";
      emit(out, Witness("escape").add("from", spec).add("to", b.to_string()).add("scale", c.to_string()).add("x", x.to_string()));
    }
    return kExitRefuted;
  }
  if (action == "re-slide") {
    FieldElem a = parse_elem(need(args, 1, "scalar"), f);
    auto ys = re_slide_construct(a, r);
    out << "TUPLE: " << format_tuple(ys) << "\n";
    emit(out, Witness("re-slide").add("spec", spec).add("a", a.to_string()).add("tuple", format_tuple(ys)));
    return kExitOk;
  }
  throw CLI::ValidationError("unknown ring action '" + action + "'");
}

std::vector<TopologySpec> default_parts(const TopologySpec& t) {
  std::vector<TopologySpec> parts;
  for (const auto& v : t.ring.valuations()) parts.push_back(TopologySpec{RingSpec::multi_valuation({v})});
  return parts;
}

void print_nonlocality(const TopologySpec& t, std::ostream& out) {
  const FieldElem gen = chain_generator(t.ring);
  for (long k = 1; k <= 4; ++k) {
    FieldElem e = power(gen, 1 - k);
    long need_k = escape_exponent(t, e);
    FieldElem x = nonlocality_element(t, need_k);
    out << "ESCAPE: bound " << e.to_string() << "*B, k = " << need_k << ", x = " << x.to_string() << "\n";
    emit(out, Witness("nonlocal-top").add("spec", t.ring.to_string()).add("e", e.to_string()).add("x", x.to_string()));
  }
}

void print_sum_report(const SumReport& report, std::ostream& out) {
  out << "RESULT: " << (report.verified ? "verified" : report.refuted ? "refuted" : "failed") << "\n";
  out << "NOTE: " << report.note << "\n";
  for (const auto& w : report.witnesses) emit(out, w);
}

int cmd_topo(const Globals& g, const std::string& spec_text, const std::vector<std::string>& args,
             const std::vector<std::string>& part_texts, std::ostream& out) {
  TopologySpec t{parse_ring_spec(spec_text)};
  require_field(g, t.ring.field(), t.ring.to_string());
  const std::string spec = t.ring.to_string();
  const std::string& action = need(args, 0, "topology action");
  out << "TOPOLOGY: " << t.to_string() << "\n";
  if (action == "components") {
    LocalComponents lc = local_components(t);
    auto coarsenings = v_coarsenings(t);
    for (const auto& c : lc.components) {
      out << "COMPONENT: " << c.to_string() << "\n";
      emit(out, Witness("key-localization").add("spec", spec).add("component", c.ring.to_string()));
    }
    if (lc.local_ring_nonlocal_topology) {
      out << "FLAG: local_ring_nonlocal_topology\n";
      out << "MATCH: " << lc.components.front().to_string() << " <-> " << format_valuation_list(coarsenings) << "\n";
    } else {
      for (std::size_t j = 0; j < lc.components.size(); ++j) {
        out << "MATCH: " << lc.components[j].to_string() << " <-> " << coarsenings[j].to_string() << "\n";
      }
    }
    return kExitOk;
  }
  if (action == "v-coarsenings") {
    for (const auto& v : v_coarsenings(t)) {
      out << "V-COARSENING: " << v.to_string() << "\n";
      emit(out, Witness("v-coarsening").add("spec", spec).add("v", v.to_string()));
    }
    return kExitOk;
  }
  if (action == "local?") {
    TopologyLocality l = is_local_topology(t);
    out << "LOCAL: " << yes(l.local) << "\n";
    if (l.local) {
      out << "CERTIFICATE: " << l.certificate << "\n";
      emit(out, Witness("local-top").add("spec", spec));
    } else {
      out << "BOUNDED-SET: B = " << closure_of(t.ring).to_string() << "\n";
      print_nonlocality(t, out);
    }
    return kExitOk;
  }
  if (action == "indep-sum") {
    std::vector<TopologySpec> parts;
    for (const auto& p : part_texts) parts.push_back(TopologySpec{parse_ring_spec(p)});
    if (parts.empty()) parts = default_parts(t);
    std::vector<std::string> names;
    for (const auto& p : parts) names.push_back(p.to_string());
    out << "PARTS: " << join(names, " ") << "\n";
    SumReport report = independent_sum_check(t, parts, g.trials, g.seed);
    print_sum_report(report, out);
    return report.verified ? kExitOk : kExitRefuted;
  }
  if (action == "associativity") {
    SumReport report = associativity_check(g.seed, g.trials);
    print_sum_report(report, out);
    return report.verified ? kExitOk : kExitRefuted;
  }
  if (action == "coarser") {
    TopologySpec fine{parse_ring_spec(need(args, 1, "finer topology spec"))};
    out << "FINER: " << fine.to_string() << "\n";
    auto c = coarsening_scale(t, fine);
    out << "COARSER: " << yes(c.has_value()) << "\n";
    if (c) {
      out << "SCALE: " << c->to_string() << "\n";
      emit(out, Witness("coarser").add("coarse", spec).add("fine", fine.ring.to_string()).add("scale", c->to_string()));
      return kExitOk;
    }
    Embedding e = embeddability_witness(fine.ring, t.ring);
    FieldElem one = FieldElem::from_int(t.ring.field(), 1);
    FieldElem x = e.escape(one);
    out << "ESCAPE: x = " << x.to_string() << " lies in " << fine.ring.to_string() << " but not in "
        << spec << "\n";
    emit(out, Witness("escape").add("from", fine.ring.to_string()).add("to", spec).add("scale", "1").add("x", x.to_string()));
    return kExitRefuted;
  }
  throw CLI::ValidationError("unknown topology action '" + action + "'");
}

struct LocsentOptions {
  std::string spec;
  std::vector<std::string> parts;
  long scale_bound = 2;
  long height = 100;
  int samples = 32;
  std::uint64_t budget = 2'000'000;
  std::string seeds;
  bool no_collapse = false;
  std::string named;
};

std::string read_sentence(const std::vector<std::string>& args, const LocsentOptions& o) {
  if (!o.named.empty()) return named_sentence(o.named);
  const std::string& path = need(args, 1, "sentence file");
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_locsent(const Globals& g, const std::vector<std::string>& args, const LocsentOptions& o, std::ostream& out,
                std::ostream& err) {
  const std::string& action = need(args, 0, "locsent action");
  if (action == "show") {
    if (args.size() < 2) {
      for (const auto& n : named_sentences()) out << "NAME: " << n << "\n";
      return kExitOk;
    }
    out << named_sentence(args[1]) << "\n";
    return kExitOk;
  }
  if (action != "check" && action != "eval") throw CLI::ValidationError("unknown locsent action '" + action + "'");
  const std::string text = read_sentence(args, o);
  LocalSentence s;
  try {
    s = parse_sentence(text);
  } catch (const SyntaxError& e) {
    std::string message = e.what();
    const std::string prefix = "SyntaxError: ";
    if (message.rfind(prefix, 0) == 0) message = message.substr(prefix.size());
    err << "error: " << (o.named.empty() ? args[1] + ":" : "") << message << "\n";
    return kExitUsage;
  }
  out << "SENTENCE: " << s.to_string() << "\n";
  PolarityReport p = check_polarity(s);
  out << "POLARITY: " << (p.ok ? "ok" : "violation") << "\n";
  for (const auto& v : p.violations) out << "VIOLATION: " << v << "\n";
  if (action == "check") return p.ok ? kExitOk : kExitRefuted;
  if (!p.ok) {
    err << "error: only sentences passing the polarity check can be evaluated\n";
    return kExitUsage;
  }
  if (o.spec.empty()) throw CLI::ValidationError("locsent eval needs --spec");
  std::vector<TopologySpec> tops{TopologySpec{parse_ring_spec(o.spec)}};
  for (const auto& part : o.parts) tops.push_back(TopologySpec{parse_ring_spec(part)});
  require_field(g, tops.front().ring.field(), tops.front().ring.to_string());
  SearchBounds b;
  b.scale_bound = o.scale_bound;
  b.height = o.height;
  b.samples = o.samples;
  b.budget = o.budget;
  b.seed = g.seed;
  b.collapse = !o.no_collapse;
  if (!o.seeds.empty()) b.seeds = parse_tuple(o.seeds, tops.front().ring.field());
  std::vector<std::string> names;
  for (std::size_t j = 0; j < tops.size(); ++j) names.push_back((j ? "tau" + std::to_string(j) : "tau") + "=" + tops[j].to_string());
  out << "TOPOLOGIES: " << join(names, " ") << "\n";
  out << "BOUNDS: k=" << b.scale_bound << " scalars=[-" << b.scalar_bound() << "," << b.scalar_bound()
      << "] height=" << b.height << " samples=" << b.samples << " seed=" << b.seed
      << " budget=" << b.budget << " collapse=" << (b.collapse ? "yes" : "no") << "\n";
  SentenceVerdict v = evaluate(s, tops, b);
  out << "VERDICT: " << truth_name(v.truth) << "\n";
  out << "ATOMS: " << v.atoms << "\n";
  for (const auto& w : v.witnesses) emit(out, w);
  return v.truth == Truth::Holds ? kExitOk : v.truth == Truth::Fails ? kExitRefuted : kExitUnknown;
}

std::vector<long> parse_primes(const std::string& text) {
  std::vector<long> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stol(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("bad prime '" + item + "'");
    }
  }
  return out;
}

int finish_demo(std::ostringstream& body, std::ostream& out) {
  AuditSummary s = audit_text(body.str());
  out << body.str();
  out << "VERIFIED: " << s.verified << "/" << s.total << " witnesses\n";
  for (const auto& f : s.failures) out << "AUDIT-FAIL: " << f << "\n";
  return s.failures.empty() ? kExitOk : kExitUsage;
}

}  // namespace

int demo_ww(std::ostream& out) {
  std::ostringstream o;
  const RingSpec r = ww_ring();
  const RingSpec closure = ww_closure();
  const FieldId f = r.field();
  const std::string spec = r.to_string(), cspec = closure.to_string();
  const FieldElem i = FieldElem::imaginary_unit();
  const FieldElem one = FieldElem::from_int(f, 1);
  const auto& vals = r.valuations();

  o << "DEMO: ww\n";
  o << "RING: " << spec << "\n";
  o << "CLOSURE: " << cspec << "\n";
  for (const auto& x : {i, FieldElem(f, 5, 0) * i, FieldElem::from_int(f, 2)}) {
    std::string r1 = residue(vals[0], x).to_string(), r2 = residue(vals[1], x).to_string();
    o << "RESIDUES: " << x.to_string() << " -> (" << r1 << ", " << r2 << ")\n";
    emit(o, Witness("residue").add("v", vals[0].to_string()).add("x", x.to_string()).add("residue", r1));
    emit(o, Witness("residue").add("v", vals[1].to_string()).add("x", x.to_string()).add("residue", r2));
    emit(o, Witness("ring").add("spec", spec).add("pred", "contains").add("x", x.to_string()).add("holds", yes(contains(r, x))));
  }

  LocalityVerdict lv = is_local_ring(r);
  o << "RING-LOCAL: " << yes(lv.local) << "\n";
  o << "CERTIFICATE: " << lv.certificate << "\n";
  emit(o, Witness("local-ring").add("spec", spec).add("certificate", lv.certificate));
  LocalityVerdict cv = is_local_ring(closure);
  o << "CLOSURE-LOCAL: " << yes(cv.local) << "\n";
  o << "NONUNIT-PAIR: x = " << cv.witness->to_string() << ", 1 - x = " << (one - *cv.witness).to_string() << "\n";
  emit(o, Witness("nonlocal-ring").add("spec", cspec).add("x", cv.witness->to_string()));

  Embedding down = embeddability_witness(closure, r);
  Embedding up = embeddability_witness(r, closure);
  o << "CO-EMBEDDING: " << down.scale->to_string() << "*closure in ring, " << up.scale->to_string()
    << "*ring in closure\n";
  emit(o, Witness("embed").add("from", cspec).add("to", spec).add("scale", down.scale->to_string()));
  emit(o, Witness("embed").add("from", spec).add("to", cspec).add("scale", up.scale->to_string()));

  const std::vector<FieldElem> pair{one, i};
  o << "INDEPENDENT: (1; i) over ring " << yes(independent(pair, r)) << ", over closure "
    << yes(independent(pair, closure)) << "\n";
  emit(o, Witness("independent").add("spec", spec).add("tuple", format_tuple(pair)).add("holds", yes(independent(pair, r))));
  emit(o, Witness("independent").add("spec", cspec).add("tuple", format_tuple(pair)).add("holds", yes(independent(pair, closure))));

  for (const auto& x : {i, FieldElem(f, 2, 1)}) {
    IntegralityWitness w = integrality_witness(x, r);
    o << "INTEGRAL: " << x.to_string() << " is a root of " << format_quadratic(w.sum, w.product) << "\n";
    emit(o, Witness("integral").add("spec", spec).add("x", x.to_string()).add("sum", w.sum.to_string()).add("product", w.product.to_string()));
  }

  const TopologySpec t{r};
  o << "TOPOLOGY-LOCAL: " << yes(is_local_topology(t).local) << "\n";
  o << "BOUNDED-SET: B = " << cspec << "\n";
  print_nonlocality(t, o);
  o << "V-COARSENINGS: " << format_valuation_list(v_coarsenings(t)) << "\n";
  for (const auto& v : v_coarsenings(t)) emit(o, Witness("v-coarsening").add("spec", spec).add("v", v.to_string()));
  LocalComponents lc = local_components(t);
  o << "LOCAL-COMPONENTS: " << lc.components.front().to_string() << "\n";
  if (lc.local_ring_nonlocal_topology) o << "FLAG: local_ring_nonlocal_topology\n";
  return finish_demo(o, out);
}

int demo_decompose(const std::vector<long>& primes, int trials, std::uint64_t seed, std::ostream& out) {
  std::vector<Valuation> vals;
  for (long p : primes) vals.push_back(Valuation::rational(p));
  const TopologySpec t{RingSpec::multi_valuation(vals)};
  const std::string spec = t.ring.to_string();
  std::ostringstream o;
  o << "DEMO: decompose\n";
  o << "TOPOLOGY: " << t.to_string() << "\n";
  LocalComponents lc = local_components(t);
  auto coarsenings = v_coarsenings(t);
  for (std::size_t j = 0; j < lc.components.size(); ++j) {
    o << "COMPONENT: " << lc.components[j].to_string() << " <-> " << coarsenings[j].to_string() << "\n";
    emit(o, Witness("key-localization").add("spec", spec).add("component", lc.components[j].ring.to_string()));
    emit(o, Witness("v-coarsening").add("spec", spec).add("v", coarsenings[j].to_string()));
  }
  TopologyLocality l = is_local_topology(t);
  o << "LOCAL: " << yes(l.local) << "\n";
  if (l.local) {
    emit(o, Witness("local-top").add("spec", spec));
  } else {
    print_nonlocality(t, o);
  }

  const auto parts = default_parts(t);
  std::vector<FieldElem> centers;
  std::vector<long> radii;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    centers.push_back(FieldElem::from_int(t.ring.field(), static_cast<long>(j)));
    radii.push_back(2);
  }
  FieldElem x = density_point(parts, centers, radii);
  o << "WORKED-DENSITY: centers " << format_tuple(centers) << ", radius exponent 2 -> " << x.to_string() << "\n";
  std::string part_text, radii_text;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    part_text += (j ? "|" : "") + parts[j].ring.to_string();
    radii_text += (j ? "," : "") + std::to_string(radii[j]);
  }
  emit(o, Witness("density").add("spec", spec).add("parts", part_text).add("centers", format_tuple(centers)).add("radii", radii_text).add("x", x.to_string()));

  SumReport report = independent_sum_check(t, parts, trials, seed);
  o << "INDEPENDENT-SUM: " << (report.verified ? "verified" : "refuted") << "\n";
  o << "NOTE: " << report.note << "\n";
  for (const auto& w : report.witnesses) emit(o, w);
  int code = finish_demo(o, out);
  return code == kExitOk && !report.verified ? kExitRefuted : code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact valuations, weak approximation, scrambling, semilocal rings and field topologies over Q and Q(i)",
               "multival"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  bool audit_flag = false;
  app.add_option("--field", g.field, "Field: Q or Qi")->check(CLI::IsMember({"Q", "Qi"}));
  app.add_option("--seed", g.seed, "Seed for every randomized check (default 0)");
  app.add_option("--trials", g.trials, "Trial count for randomized checks (default 100)")->check(CLI::NonNegativeNumber);
  app.add_flag("--audit", audit_flag, "Re-verify every WITNESS line of the output");

  std::string v_text, x_text;
  auto* val_cmd = app.add_subcommand("val", "Valuation of an element: val V X");
  val_cmd->add_option("valuation", v_text, "Q:p or Qi:a+b*i")->required();
  val_cmd->add_option("x", x_text, "Field element")->required();
  auto* res_cmd = app.add_subcommand("residue", "Residue of an element: residue V X");
  res_cmd->add_option("valuation", v_text)->required();
  res_cmd->add_option("x", x_text)->required();

  std::vector<std::string> targets;
  auto* approx_cmd = app.add_subcommand("approx", "Weak approximation by CRT");
  approx_cmd->add_option("--target", targets, "Q:2=1, Q:2>=1, Q:2>0 or Q:3:x-1>=2 (repeatable)")->required();

  std::string vals_text, tuple_text;
  auto* scramble_cmd = app.add_subcommand("scramble", "Scramble a tuple by integer row operations");
  scramble_cmd->add_option("--vals", vals_text, "Comma-separated valuations")->required();
  scramble_cmd->add_option("--tuple", tuple_text, "Semicolon-separated elements")->required();

  std::string spec_text;
  std::vector<std::string> rest, part_texts;
  auto* ring_cmd = app.add_subcommand("ring", "Ring predicates: contains|unit|jacobson|local?|member|independent|"
                                              "integral-witness|key-localizations|embed|re-slide");
  ring_cmd->add_option("--spec", spec_text, "mv(...) or glued(v1,v2,id)")->required();
  ring_cmd->add_option("action", rest, "Action and its arguments")->required();

  auto* topo_cmd = app.add_subcommand("topo", "Topology checks: components|v-coarsenings|local?|indep-sum|"
                                              "associativity|coarser");
  topo_cmd->add_option("--spec", spec_text, "Defining ring spec")->required();
  topo_cmd->add_option("--part", part_texts, "Part ring spec for indep-sum (repeatable)");
  topo_cmd->add_option("action", rest, "Action and its arguments")->required();

  LocsentOptions lo;
  auto* locsent_cmd = app.add_subcommand("locsent", "Local sentences: check FILE | eval FILE | show [NAME]");
  locsent_cmd->add_option("action", rest, "Action and its arguments")->required();
  locsent_cmd->add_option("--spec", lo.spec, "Topology for tau");
  locsent_cmd->add_option("--part", lo.parts, "Topologies tau1, tau2, ... (repeatable)");
  locsent_cmd->add_option("--scale-bound", lo.scale_bound, "Neighborhood exponent bound k")->check(CLI::NonNegativeNumber);
  locsent_cmd->add_option("--height", lo.height, "Height of sampled elements")->check(CLI::PositiveNumber);
  locsent_cmd->add_option("--samples", lo.samples, "Random field samples")->check(CLI::NonNegativeNumber);
  locsent_cmd->add_option("--budget", lo.budget, "Atom evaluations before the verdict is Unknown");
  locsent_cmd->add_option("--seeds", lo.seeds, "Extra field elements to try, semicolon-separated");
  locsent_cmd->add_option("--named", lo.named, "Use a shipped sentence instead of FILE");
  locsent_cmd->add_flag("--no-collapse", lo.no_collapse, "Enumerate every neighborhood instead of the smallest");

  std::string primes_text = "2,3,5";
  auto* demo_cmd = app.add_subcommand("demo", "Demos: ww | decompose");
  demo_cmd->add_option("name", rest, "ww or decompose")->required();
  demo_cmd->add_option("--primes", primes_text, "Comma-separated primes for decompose");

  std::vector<std::string> argv_store{"multival"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::ostringstream body;
  int code = kExitOk;
  try {
    if (val_cmd->parsed()) {
      code = cmd_val(g, v_text, x_text, false, body);
    } else if (res_cmd->parsed()) {
      code = cmd_val(g, v_text, x_text, true, body);
    } else if (approx_cmd->parsed()) {
      code = cmd_approx(g, targets, body);
    } else if (scramble_cmd->parsed()) {
      code = cmd_scramble(g, vals_text, tuple_text, body);
    } else if (ring_cmd->parsed()) {
      code = cmd_ring(g, spec_text, rest, body);
    } else if (topo_cmd->parsed()) {
      code = cmd_topo(g, spec_text, rest, part_texts, body);
    } else if (locsent_cmd->parsed()) {
      code = cmd_locsent(g, rest, lo, body, err);
    } else if (demo_cmd->parsed()) {
      if (rest.size() != 1) throw CLI::ValidationError("demo takes exactly one name");
      if (rest[0] == "ww") {
        code = demo_ww(body);
      } else if (rest[0] == "decompose") {
        code = demo_decompose(parse_primes(primes_text), g.trials, g.seed, body);
      } else {
        throw CLI::ValidationError("unknown demo '" + rest[0] + "'");
      }
    }
  } catch (const CLI::Error& e) {
    out << body.str();
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    out << body.str();
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  out << body.str();
  if (audit_flag) {
    AuditSummary s = audit_text(body.str());
    out << "AUDIT: " << s.verified << "/" << s.total << " witnesses verified\n";
    for (const auto& f : s.failures) out << "AUDIT-FAIL: " << f << "\n";
    if (!s.failures.empty()) {
      err << "error: audit failed\n";
      return kExitUsage;
    }
  }
  return code;
}

}  // namespace multival
