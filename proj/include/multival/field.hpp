#pragma once

#include <gmpxx.h>

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace multival {

using Integer = mpz_class;
using Rational = mpq_class;

/// The two supported base fields. Q embeds in Q(i) as the prime field.
enum class FieldId { Rationals, GaussianRationals };

std::string_view field_name(FieldId field);  // "Q" or "Qi"
FieldId parse_field_id(std::string_view text);

/// Exact element re + im*i of Q or Q(i), always kept in canonical form:
/// both parts reduced with positive denominators, im == 0 over Q.
class FieldElem {
 public:
  FieldElem() : FieldElem(FieldId::Rationals) {}
  explicit FieldElem(FieldId field);
  FieldElem(FieldId field, Rational re, Rational im = Rational(0));

  static FieldElem from_int(FieldId field, long value);
  static FieldElem from_integer(FieldId field, const Integer& value);
  static FieldElem imaginary_unit();

  FieldId field() const noexcept { return field_; }
  const Rational& re() const noexcept { return re_; }
  const Rational& im() const noexcept { return im_; }

  bool is_zero() const { return re_ == 0 && im_ == 0; }
  bool is_one() const { return re_ == 1 && im_ == 0; }

  FieldElem conj() const;
  Rational norm() const;
  FieldElem inverse() const;

  FieldElem& operator+=(const FieldElem& other);
  FieldElem& operator-=(const FieldElem& other);
  FieldElem& operator*=(const FieldElem& other);
  FieldElem& operator/=(const FieldElem& other);

  friend FieldElem operator+(FieldElem a, const FieldElem& b) { return a += b; }
  friend FieldElem operator-(FieldElem a, const FieldElem& b) { return a -= b; }
  friend FieldElem operator*(FieldElem a, const FieldElem& b) { return a *= b; }
  friend FieldElem operator/(FieldElem a, const FieldElem& b) { return a /= b; }
  FieldElem operator-() const;

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.field_ == b.field_ && a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Lowest common denominator of both parts.
  Integer common_denominator() const;

  std::string to_string() const;

 private:
  void check_same_field(const FieldElem& other) const;

  Rational re_;
  Rational im_;
  FieldId field_;
};

std::ostream& operator<<(std::ostream& os, const FieldElem& x);

/// Canonical reduced form. Construction already canonicalizes, so this is idempotent.
FieldElem normalize(const FieldElem& x);

/// Parses `a/b`, `a/b+c/d*i`, `i`, `-3*i`, `(2-1*i)`; whitespace-insensitive.
FieldElem parse_elem(std::string_view text, FieldId field);

/// Parses a `;`-separated tuple of elements.
std::vector<FieldElem> parse_tuple(std::string_view text, FieldId field);

/// Formats a tuple with the given separator (default `;`).
std::string format_tuple(std::span<const FieldElem> xs, std::string_view sep = ";");

}  // namespace multival
