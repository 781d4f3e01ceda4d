#include "multival/approx.hpp"

#include <algorithm>
#include <cctype>

#include "multival/error.hpp"

namespace multival {

ValueTarget ValueTarget::exact(const Valuation& v, long n) {
  return {v, Mode::ExactValue, n, FieldElem(v.field())};
}

ValueTarget ValueTarget::congruence(const Valuation& v, const FieldElem& center, long min_val) {
  if (center.field() != v.field()) throw Error(ErrorKind::FieldMismatch, "congruence center in the wrong field");
  return {v, Mode::Congruence, min_val, center};
}

ValueTarget ValueTarget::at_least(const Valuation& v, long n) {
  return {v, Mode::AtLeast, n, FieldElem(v.field())};
}

ValueTarget ValueTarget::greater_than(const Valuation& v, long n) {
  return {v, Mode::GreaterThan, n, FieldElem(v.field())};
}

bool ValueTarget::satisfied_by(const FieldElem& x) const {
  switch (mode) {
    case Mode::ExactValue: return val(valuation, x) == Value(n);
    case Mode::Congruence: return val(valuation, x - center) >= Value(n);
    case Mode::AtLeast: return val(valuation, x) >= Value(n);
    case Mode::GreaterThan: return val(valuation, x) > Value(n);
  }
  return false;
}

std::string ValueTarget::to_string() const {
  std::string v = valuation.to_string();
  switch (mode) {
    case Mode::ExactValue: return v + "=" + std::to_string(n);
    case Mode::AtLeast: return v + ">=" + std::to_string(n);
    case Mode::GreaterThan: return v + ">" + std::to_string(n);
    case Mode::Congruence: return v + ":x-(" + center.to_string() + ")>=" + std::to_string(n);
  }
  return v;
}

ValueTarget parse_target(std::string_view text_in, FieldId field) {
  std::string text;
  for (char c : text_in) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  auto fail = [&](const std::string& why) {
    return Error(ErrorKind::ParseError, "bad target '" + text + "': " + why);
  };
  std::size_t op = text.rfind('=');
  std::size_t gt = text.rfind('>');
  std::string lhs, rhs;
  ValueTarget::Mode mode;
  if (op != std::string::npos && gt != std::string::npos && gt + 1 == op) {
    mode = ValueTarget::Mode::AtLeast;
    lhs = text.substr(0, gt);
    rhs = text.substr(op + 1);
  } else if (gt != std::string::npos && (op == std::string::npos || op < gt)) {
    mode = ValueTarget::Mode::GreaterThan;
    lhs = text.substr(0, gt);
    rhs = text.substr(gt + 1);
  } else if (op != std::string::npos) {
    mode = ValueTarget::Mode::ExactValue;
    lhs = text.substr(0, op);
    rhs = text.substr(op + 1);
  } else {
    throw fail("missing '=', '>=' or '>'");
  }
  long n;
  try {
    std::size_t used = 0;
    n = std::stol(rhs, &used);
    if (used != rhs.size()) throw fail("trailing characters after the bound");
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw fail("bound is not an integer");
  }

  std::size_t xpos = lhs.find(":x");
  if (xpos == std::string::npos) {
    Valuation v = parse_valuation(lhs);
    if (v.field() != field) throw Error(ErrorKind::FieldMismatch, "target valuation outside the requested field");
    switch (mode) {
      case ValueTarget::Mode::AtLeast: return ValueTarget::at_least(v, n);
      case ValueTarget::Mode::GreaterThan: return ValueTarget::greater_than(v, n);
      default: return ValueTarget::exact(v, n);
    }
  }
  if (mode != ValueTarget::Mode::AtLeast) throw fail("congruence targets use '>='");
  Valuation v = parse_valuation(lhs.substr(0, xpos));
  if (v.field() != field) throw Error(ErrorKind::FieldMismatch, "target valuation outside the requested field");
  std::string rest = lhs.substr(xpos + 2);
  FieldElem center(field);
  if (!rest.empty()) {
    if (rest[0] != '-') throw fail("congruence must read x-<center>");
    center = parse_elem(rest.substr(1), field);
  }
  return ValueTarget::congruence(v, center, n);
}

namespace {

// Integer CRT: least nonnegative r with r == residues[k] mod moduli[k].
Integer crt_integer(const std::vector<GaussianInt>& residues, const std::vector<GaussianInt>& moduli) {
  Integer r = 0, m = 1;
  for (std::size_t k = 0; k < residues.size(); ++k) {
    const Integer& mk = moduli[k].re;
    Integer inv;
    mpz_invert(inv.get_mpz_t(), Integer(m % mk).get_mpz_t(), mk.get_mpz_t());
    Integer delta = (residues[k].re - r) * inv;
    Integer t;
    mpz_fdiv_r(t.get_mpz_t(), delta.get_mpz_t(), mk.get_mpz_t());
    r += m * t;
    m *= mk;
  }
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Gaussian CRT, reduced modulo the product of moduli.
GaussianInt crt_gaussian(const std::vector<GaussianInt>& residues, const std::vector<GaussianInt>& moduli) {
  GaussianInt r(0), m(1);
  for (std::size_t k = 0; k < residues.size(); ++k) {
    const GaussianInt& mk = moduli[k];
    GaussianBezout b = xgcd(m, mk);
    if (b.g.norm() != 1) throw Error(ErrorKind::ConstructionFailed, "moduli are not coprime");
    GaussianInt m_inv = b.s * b.g.conj();  // m * m_inv == 1 mod mk
    GaussianInt t = mod((residues[k] - r) * m_inv, mk);
    r = r + m * t;
    m = m * mk;
  }
  return mod(r, m);
}

}  // namespace

FieldElem approximate(std::span<const ValueTarget> targets) {
  if (targets.empty()) throw Error(ErrorKind::InconsistentTargets, "approximate needs at least one target");
  const FieldId field = targets.front().valuation.field();
  for (std::size_t a = 0; a < targets.size(); ++a) {
    if (targets[a].valuation.field() != field || targets[a].center.field() != field) {
      throw Error(ErrorKind::FieldMismatch, "targets live in different fields");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (targets[a].valuation == targets[b].valuation) {
        throw Error(ErrorKind::InconsistentTargets, "valuation " + targets[a].valuation.to_string() + " appears twice");
      }
    }
  }

  // Work with y = M*x for M = prod prime_k^{s_k}, choosing s_k so that every condition on y
  // is a congruence between model-ring elements modulo a nonnegative prime power.
  std::vector<ValueTarget> work(targets.begin(), targets.end());
  for (auto& t : work) {
    if (t.mode == ValueTarget::Mode::GreaterThan) t = ValueTarget::exact(t.valuation, t.n + 1);
  }
  std::vector<long> shift(work.size(), 0);
  for (std::size_t k = 0; k < work.size(); ++k) {
    const auto& t = work[k];
    long s = std::max(0L, -t.n);
    if (t.mode == ValueTarget::Mode::Congruence && !t.center.is_zero()) {
      s = std::max(s, -val(t.valuation, t.center).finite());
    }
    shift[k] = s;
  }
  GaussianInt scale(1);
  for (std::size_t k = 0; k < work.size(); ++k) {
    scale = scale * prime_power(work[k].valuation, static_cast<unsigned long>(shift[k]));
  }
  const FieldElem scale_elem = field == FieldId::Rationals ? FieldElem::from_integer(field, scale.re) : scale.to_field();

  std::vector<GaussianInt> residues, moduli;
  for (std::size_t k = 0; k < work.size(); ++k) {
    const auto& t = work[k];
    const auto e = static_cast<unsigned long>(t.n + shift[k]);
    switch (t.mode) {
      case ValueTarget::Mode::ExactValue:
        residues.push_back(prime_power(t.valuation, e));
        moduli.push_back(prime_power(t.valuation, e + 1));
        break;
      case ValueTarget::Mode::AtLeast:
        residues.push_back(GaussianInt(0));
        moduli.push_back(prime_power(t.valuation, e));
        break;
      case ValueTarget::Mode::Congruence:
        residues.push_back(reduce_mod_power(t.valuation, scale_elem * t.center, e));
        moduli.push_back(prime_power(t.valuation, e));
        break;
      case ValueTarget::Mode::GreaterThan:
        break;  // rewritten above
    }
  }

  GaussianInt y = field == FieldId::Rationals ? GaussianInt(crt_integer(residues, moduli)) : crt_gaussian(residues, moduli);
  if (y.is_zero()) {
    // Zero only solves all-zero congruences; the modulus product solves them too.
    y = GaussianInt(1);
    for (const auto& m : moduli) y = y * m;
  }
  FieldElem y_elem = field == FieldId::Rationals ? FieldElem::from_integer(field, y.re) : y.to_field();
  FieldElem x = y_elem / scale_elem;

  for (const auto& t : targets) {
    if (!t.satisfied_by(x)) {
      throw Error(ErrorKind::ConstructionFailed, "approximation output " + x.to_string() + " misses " + t.to_string());
    }
  }
  return x;
}

FieldElem separate(const Valuation& v1, const Valuation& v2) {
  if (v1 == v2) throw Error(ErrorKind::SameValuation, "cannot separate " + v1.to_string() + " from itself");
  if (v1.field() != v2.field()) throw Error(ErrorKind::FieldMismatch, "valuations on different fields");
  const FieldId f = v1.field();
  const ValueTarget targets[] = {ValueTarget::congruence(v1, FieldElem(f), 1),
                                 ValueTarget::congruence(v2, FieldElem::from_int(f, 1), 1)};
  return approximate(targets);
}

}  // namespace multival
