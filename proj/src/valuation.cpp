#include "multival/valuation.hpp"

#include <cctype>
#include <sstream>

#include "multival/error.hpp"

namespace multival {

namespace {

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer mod_inverse(const Integer& a, const Integer& m) {
  Integer r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t())) {
    throw Error(ErrorKind::DivisionByZero, a.get_str() + " is not invertible modulo " + m.get_str());
  }
  return r;
}

// Multiplicity of p in n != 0, and n with that power removed.
long remove_prime(Integer& n, const Integer& p) {
  return static_cast<long>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long int_val(Integer n, const Integer& p) { return remove_prime(n, p); }

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

Valuation Valuation::rational(const Integer& p) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidValuation, p.get_str() + " is not a rational prime");
  Valuation v;
  v.field_ = FieldId::Rationals;
  v.kind_ = PrimeKind::RationalPrime;
  v.p_ = p;
  v.prime_ = GaussianInt(p);
  return v;
}

Valuation Valuation::gaussian(const GaussianInt& pi_in) {
  if (!is_gaussian_prime(pi_in)) {
    throw Error(ErrorKind::InvalidValuation, pi_in.to_string() + " is not a Gaussian prime");
  }
  Valuation v;
  v.field_ = FieldId::GaussianRationals;
  v.prime_ = canonical_associate(pi_in);
  Integer n = v.prime_.norm();
  if (n == 2) {
    v.kind_ = PrimeKind::Ramified;
    v.p_ = 2;
  } else if (is_prime(n)) {
    v.kind_ = PrimeKind::Split;
    v.p_ = n;
    // a + b*i == 0 mod pi gives i == -a/b.
    v.root_ = mod_floor(-v.prime_.re * mod_inverse(v.prime_.im, n), n);
  } else {
    v.kind_ = PrimeKind::Inert;
    v.p_ = v.prime_.re;
  }
  return v;
}

Integer Valuation::residue_field_size() const { return kind_ == PrimeKind::Inert ? p_ * p_ : p_; }

FieldElem Valuation::uniformizer() const {
  return field_ == FieldId::Rationals ? FieldElem::from_integer(field_, p_) : prime_.to_field();
}

std::string Valuation::to_string() const {
  if (field_ == FieldId::Rationals) return "Q:" + p_.get_str();
  return "Qi:" + prime_.to_string();
}

bool operator<(const Valuation& a, const Valuation& b) {
  if (a.field_ != b.field_) return a.field_ < b.field_;
  if (a.p_ != b.p_) return a.p_ < b.p_;
  return lex_less(a.prime_, b.prime_);
}

Valuation parse_valuation(std::string_view text_in) {
  std::string text = trim(text_in);
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorKind::ParseError, "valuation '" + text + "' must look like Q:p or Qi:a+b*i");
  }
  FieldId field = parse_field_id(trim(std::string_view(text).substr(0, colon)));
  FieldElem g = parse_elem(std::string_view(text).substr(colon + 1), field);
  if (g.re().get_den() != 1 || g.im().get_den() != 1) {
    throw Error(ErrorKind::InvalidValuation, "valuation prime must be integral: " + text);
  }
  if (field == FieldId::Rationals) return Valuation::rational(abs(g.re().get_num()));
  return Valuation::gaussian(GaussianInt(g.re().get_num(), g.im().get_num()));
}

std::vector<Valuation> parse_valuation_list(std::string_view text) {
  std::vector<Valuation> out;
  std::string s(text);
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(',', start);
    std::string piece = trim(std::string_view(s).substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (!piece.empty()) out.push_back(parse_valuation(piece));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

std::string format_valuation_list(std::span<const Valuation> vals) {
  std::string out;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (k) out += ",";
    out += vals[k].to_string();
  }
  return out;
}

Value parse_value(std::string_view text) {
  std::string t = trim(text);
  if (t == "+inf" || t == "inf") return Value::infinity();
  try {
    std::size_t used = 0;
    long n = std::stol(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return Value(n);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "bad value '" + t + "'");
  }
}

// ---------------------------------------------------------------------------
// Residue fields

ResidueElem::ResidueElem(Integer p, int degree, Integer a, Integer b)
    : p_(std::move(p)), degree_(degree), a_(mod_floor(a, p_)), b_(degree == 2 ? mod_floor(b, p_) : Integer(0)) {}

ResidueElem ResidueElem::infinity(Integer p, int degree) {
  ResidueElem r(std::move(p), degree, 0, 0);
  r.infinite_ = true;
  return r;
}

void ResidueElem::check_compatible(const ResidueElem& o) const {
  if (p_ != o.p_ || degree_ != o.degree_) {
    throw Error(ErrorKind::FieldMismatch, "residues from different residue fields");
  }
}

ResidueElem ResidueElem::operator+(const ResidueElem& o) const {
  check_compatible(o);
  if (infinite_ || o.infinite_) return infinity(p_, degree_);
  return ResidueElem(p_, degree_, a_ + o.a_, b_ + o.b_);
}

ResidueElem ResidueElem::operator-(const ResidueElem& o) const {
  check_compatible(o);
  if (infinite_ || o.infinite_) return infinity(p_, degree_);
  return ResidueElem(p_, degree_, a_ - o.a_, b_ - o.b_);
}

ResidueElem ResidueElem::operator*(const ResidueElem& o) const {
  check_compatible(o);
  if (infinite_ || o.infinite_) return infinity(p_, degree_);
  // (a + b t)(c + d t) with t^2 = -1
  return ResidueElem(p_, degree_, a_ * o.a_ - b_ * o.b_, a_ * o.b_ + b_ * o.a_);
}

ResidueElem ResidueElem::inverse() const {
  if (infinite_) return ResidueElem(p_, degree_, 0, 0);
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero residue");
  // 1/(a + b t) = (a - b t)/(a^2 + b^2); a^2 + b^2 != 0 since t^2 + 1 is irreducible.
  Integer n = mod_inverse(mod_floor(a_ * a_ + b_ * b_, p_), p_);
  return ResidueElem(p_, degree_, a_ * n, -b_ * n);
}

std::string ResidueElem::to_string() const {
  if (infinite_) return "inf";
  if (degree_ == 1 || b_ == 0) return a_.get_str();
  if (a_ == 0) return b_.get_str() + "*t";
  return a_.get_str() + "+" + b_.get_str() + "*t";
}

// ---------------------------------------------------------------------------
// Valuations

namespace {

void check_field(const Valuation& v, const FieldElem& x) {
  if (v.field() != x.field()) {
    throw Error(ErrorKind::FieldMismatch, "element " + x.to_string() + " is not in the field of " + v.to_string());
  }
}

// Valuation of a nonzero model-ring element.
long integral_val(const Valuation& v, const GaussianInt& z) {
  switch (v.kind()) {
    case PrimeKind::RationalPrime:
      return int_val(z.re, v.p());
    case PrimeKind::Inert: {
      if (z.re == 0) return int_val(z.im, v.p());
      if (z.im == 0) return int_val(z.re, v.p());
      return std::min(int_val(z.re, v.p()), int_val(z.im, v.p()));
    }
    case PrimeKind::Ramified: {
      // Strip 2^m = (unit)(1+i)^(2m); one more factor iff both parts stay odd.
      Integer a = z.re, b = z.im;
      long m;
      if (a == 0) {
        m = remove_prime(b, 2);
      } else if (b == 0) {
        m = remove_prime(a, 2);
      } else {
        m = std::min(int_val(a, 2), int_val(b, 2));
        a >>= m;
        b >>= m;
      }
      bool both_odd = mpz_odd_p(a.get_mpz_t()) && mpz_odd_p(b.get_mpz_t());
      return 2 * m + (both_odd ? 1 : 0);
    }
    case PrimeKind::Split: {
      long e = 0;
      GaussianInt rest = z;
      while (divides(v.prime(), rest)) {
        rest = exact_div(rest, v.prime());
        ++e;
      }
      return e;
    }
  }
  return 0;
}

// Valuation of a nonzero rational integer.
long rational_int_val(const Valuation& v, const Integer& d) {
  long e = int_val(d, v.p());
  return v.kind() == PrimeKind::Ramified ? 2 * e : e;
}

struct LocalFraction {
  GaussianInt num;
  GaussianInt den;  // a unit at v
};

// x = num/den with den prime to v; requires val(v, x) >= 0.
LocalFraction to_local(const Valuation& v, const FieldElem& x) {
  if (v.kind() == PrimeKind::RationalPrime) {
    return {GaussianInt(x.re().get_num()), GaussianInt(x.re().get_den())};
  }
  Integer d = x.common_denominator();
  GaussianInt n(Integer(x.re() * d), Integer(x.im() * d));
  Integer rest = d;
  long f = remove_prime(rest, v.p());
  if (f == 0) return {n, GaussianInt(rest)};
  switch (v.kind()) {
    case PrimeKind::Split: {
      GaussianInt pf = power(v.prime(), static_cast<unsigned long>(f));
      GaussianInt cf = power(v.prime().conj(), static_cast<unsigned long>(f));
      return {exact_div(n, pf), cf * GaussianInt(rest)};
    }
    default: {
      Integer pf;
      mpz_pow_ui(pf.get_mpz_t(), v.p().get_mpz_t(), static_cast<unsigned long>(f));
      return {exact_div(n, GaussianInt(pf)), GaussianInt(rest)};
    }
  }
}

// Inverse of a unit-at-v model-ring element modulo m = prime^e.
GaussianInt inverse_mod(const Valuation& v, const GaussianInt& u, const GaussianInt& m) {
  if (v.field() == FieldId::Rationals) return GaussianInt(mod_inverse(u.re, m.re));
  GaussianBezout b = xgcd(u, m);
  if (b.g.norm() != 1) throw Error(ErrorKind::DivisionByZero, "element is not a unit modulo the prime power");
  return b.s * b.g.conj();  // b.g is a unit, its inverse is its conjugate
}

}  // namespace

Value val(const Valuation& v, const FieldElem& x) {
  check_field(v, x);
  if (x.is_zero()) return Value::infinity();
  if (v.field() == FieldId::Rationals) {
    return Value(int_val(x.re().get_num(), v.p()) - int_val(x.re().get_den(), v.p()));
  }
  Integer d = x.common_denominator();
  GaussianInt n(Integer(x.re() * d), Integer(x.im() * d));
  return Value(integral_val(v, n) - rational_int_val(v, d));
}

GaussianInt prime_power(const Valuation& v, unsigned long e) { return power(v.prime(), e); }

GaussianInt reduce_mod_power(const Valuation& v, const FieldElem& x, unsigned long e) {
  check_field(v, x);
  if (e == 0 || x.is_zero()) return GaussianInt(0);
  if (val(v, x) < Value(0)) {
    throw Error(ErrorKind::NotInClosure, x.to_string() + " is not integral at " + v.to_string());
  }
  LocalFraction lf = to_local(v, x);
  GaussianInt m = prime_power(v, e);
  GaussianInt r = lf.num * inverse_mod(v, lf.den, m);
  if (v.field() == FieldId::Rationals) return GaussianInt(mod_floor(r.re, m.re));
  return mod(r, m);
}

ResidueElem residue_of_integer(const Valuation& v, const Integer& c) {
  return ResidueElem(v.p(), v.residue_degree(), c, 0);
}

ResidueElem residue_of_integral(const Valuation& v, const GaussianInt& z) {
  switch (v.kind()) {
    case PrimeKind::RationalPrime:
      return ResidueElem(v.p(), 1, z.re);
    case PrimeKind::Split:
      return ResidueElem(v.p(), 1, z.re + z.im * v.root_of_minus_one());
    case PrimeKind::Ramified:
      return ResidueElem(v.p(), 1, z.re + z.im);
    case PrimeKind::Inert:
      return ResidueElem(v.p(), 2, z.re, z.im);
  }
  return ResidueElem(v.p(), 1, 0);
}

ResidueElem residue(const Valuation& v, const FieldElem& x) {
  check_field(v, x);
  Value value = val(v, x);
  if (value < Value(0)) return ResidueElem::infinity(v.p(), v.residue_degree());
  if (value > Value(0)) return ResidueElem(v.p(), v.residue_degree(), 0);
  LocalFraction lf = to_local(v, x);
  return residue_of_integral(v, lf.num) * residue_of_integral(v, lf.den).inverse();
}

GaussianInt lift_residue(const Valuation& v, const ResidueElem& r) {
  if (r.is_infinite()) throw Error(ErrorKind::NotInClosure, "cannot lift the infinite residue");
  if (v.kind() == PrimeKind::Inert) return GaussianInt(r.a(), r.b());
  return GaussianInt(r.a());
}

FieldElem uniformizer(const Valuation& v) { return v.uniformizer(); }

ValueVector value_vector(std::span<const Valuation> vals, const FieldElem& x) {
  ValueVector out;
  out.reserve(vals.size());
  for (const auto& v : vals) out.push_back(val(v, x));
  return out;
}

std::string format_value_vector(const ValueVector& vv) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < vv.size(); ++k) {
    if (k) os << ",";
    os << vv[k].to_string();
  }
  os << ")";
  return os.str();
}

}  // namespace multival
