#include "multival/field.hpp"

#include <cctype>
#include <sstream>

#include "multival/error.hpp"

namespace multival {

std::string_view field_name(FieldId field) {
  return field == FieldId::Rationals ? "Q" : "Qi";
}

FieldId parse_field_id(std::string_view text) {
  if (text == "Q") return FieldId::Rationals;
  if (text == "Qi") return FieldId::GaussianRationals;
  throw Error(ErrorKind::ParseError, "unknown field '" + std::string(text) + "' (expected Q or Qi)");
}

FieldElem::FieldElem(FieldId field) : re_(0), im_(0), field_(field) {}

FieldElem::FieldElem(FieldId field, Rational re, Rational im)
    : re_(std::move(re)), im_(std::move(im)), field_(field) {
  re_.canonicalize();
  im_.canonicalize();
  if (field_ == FieldId::Rationals && im_ != 0) {
    throw Error(ErrorKind::FieldMismatch, "nonzero imaginary part in Q");
  }
}

FieldElem FieldElem::from_int(FieldId field, long value) { return FieldElem(field, Rational(value)); }

FieldElem FieldElem::from_integer(FieldId field, const Integer& value) {
  return FieldElem(field, Rational(value));
}

FieldElem FieldElem::imaginary_unit() { return FieldElem(FieldId::GaussianRationals, 0, 1); }

void FieldElem::check_same_field(const FieldElem& other) const {
  if (field_ != other.field_) {
    throw Error(ErrorKind::FieldMismatch, "operands live in different fields");
  }
}

FieldElem FieldElem::conj() const { return FieldElem(field_, re_, -im_); }

Rational FieldElem::norm() const { return re_ * re_ + im_ * im_; }

FieldElem FieldElem::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  Rational n = norm();
  return FieldElem(field_, re_ / n, -im_ / n);
}

FieldElem& FieldElem::operator+=(const FieldElem& other) {
  check_same_field(other);
  re_ += other.re_;
  im_ += other.im_;
  return *this;
}

FieldElem& FieldElem::operator-=(const FieldElem& other) {
  check_same_field(other);
  re_ -= other.re_;
  im_ -= other.im_;
  return *this;
}

FieldElem& FieldElem::operator*=(const FieldElem& other) {
  check_same_field(other);
  Rational re = re_ * other.re_ - im_ * other.im_;
  Rational im = re_ * other.im_ + im_ * other.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

FieldElem& FieldElem::operator/=(const FieldElem& other) {
  check_same_field(other);
  if (other.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by zero");
  return *this *= other.inverse();
}

FieldElem FieldElem::operator-() const { return FieldElem(field_, -re_, -im_); }

Integer FieldElem::common_denominator() const {
  Integer d;
  mpz_lcm(d.get_mpz_t(), re_.get_den_mpz_t(), im_.get_den_mpz_t());
  return d;
}

std::string FieldElem::to_string() const {
  if (im_ == 0) return re_.get_str();
  std::string imag = Rational(abs(im_)).get_str() + "*i";
  if (re_ == 0) return (im_ < 0 ? "-" : "") + imag;
  return re_.get_str() + (im_ < 0 ? "-" : "+") + imag;
}

std::ostream& operator<<(std::ostream& os, const FieldElem& x) { return os << x.to_string(); }

FieldElem normalize(const FieldElem& x) { return FieldElem(x.field(), x.re(), x.im()); }

namespace {

// Recursive-descent parser over the whitespace-stripped text.
class ElemParser {
 public:
  ElemParser(std::string text, FieldId field) : text_(std::move(text)), field_(field) {}

  FieldElem parse() {
    if (text_.empty()) fail("empty element");
    FieldElem x = expr();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return x;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::ParseError, "cannot parse element '" + text_ + "': " + why);
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  FieldElem expr() {
    Rational re(0), im(0);
    bool first = true;
    while (pos_ < text_.size() && !peek(')')) {
      int sign = 1;
      if (peek('+') || peek('-')) {
        sign = peek('-') ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      auto [r, m] = term();
      re += sign * r;
      im += sign * m;
      first = false;
    }
    if (first) fail("missing term");
    if (field_ == FieldId::Rationals && im != 0) {
      throw Error(ErrorKind::FieldMismatch, "imaginary element '" + text_ + "' in Q");
    }
    return FieldElem(field_, re, im);
  }

  std::pair<Rational, Rational> term() {
    if (peek('(')) {
      ++pos_;
      FieldElem inner = expr();
      if (!peek(')')) fail("missing ')'");
      ++pos_;
      return {inner.re(), inner.im()};
    }
    if (peek('i')) {
      ++pos_;
      return {Rational(0), Rational(1)};
    }
    Rational q = rational();
    if (peek('*')) {
      ++pos_;
      if (!peek('i')) fail("expected 'i' after '*'");
      ++pos_;
      return {Rational(0), q};
    }
    if (peek('i')) {
      ++pos_;
      return {Rational(0), q};
    }
    return {q, Rational(0)};
  }

  Integer digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return Integer(text_.substr(start, pos_ - start), 10);
  }

  Rational rational() {
    Integer num = digits();
    Integer den = 1;
    if (peek('/')) {
      ++pos_;
      den = digits();
      if (den == 0) fail("zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string text_;
  FieldId field_;
  std::size_t pos_ = 0;
};

std::string strip_spaces(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

}  // namespace

FieldElem parse_elem(std::string_view text, FieldId field) {
  return ElemParser(strip_spaces(text), field).parse();
}

std::vector<FieldElem> parse_tuple(std::string_view text, FieldId field) {
  std::vector<FieldElem> out;
  std::string stripped = strip_spaces(text);
  if (stripped.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = stripped.find(';', start);
    out.push_back(parse_elem(stripped.substr(start, end - start), field));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

std::string format_tuple(std::span<const FieldElem> xs, std::string_view sep) {
  std::ostringstream os;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) os << sep;
    os << xs[k];
  }
  return os.str();
}

}  // namespace multival
