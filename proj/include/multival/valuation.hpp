#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multival/field.hpp"
#include "multival/gaussian.hpp"

namespace multival {

/// How the rational prime under a valuation behaves in the base field.
enum class PrimeKind { RationalPrime, Split, Inert, Ramified };

/// Rank-one discrete valuation on Q (a rational prime p) or on Q(i) (a canonical
/// Gaussian prime). Descriptors are canonical, so equality is equivalence.
class Valuation {
 public:
  static Valuation rational(const Integer& p);
  static Valuation gaussian(const GaussianInt& pi);

  FieldId field() const noexcept { return field_; }
  PrimeKind kind() const noexcept { return kind_; }
  /// The rational prime below; also the residue characteristic.
  const Integer& p() const noexcept { return p_; }
  /// The prime element in the model ring (Z embedded in Z[i] for Q).
  const GaussianInt& prime() const noexcept { return prime_; }
  /// Image of i in F_p for split primes.
  const Integer& root_of_minus_one() const noexcept { return root_; }

  int residue_degree() const noexcept { return kind_ == PrimeKind::Inert ? 2 : 1; }
  Integer residue_field_size() const;

  FieldElem uniformizer() const;

  std::string to_string() const;

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.field_ == b.field_ && a.prime_ == b.prime_;
  }
  friend bool operator<(const Valuation& a, const Valuation& b);

 private:
  Valuation() = default;

  FieldId field_ = FieldId::Rationals;
  PrimeKind kind_ = PrimeKind::RationalPrime;
  Integer p_;
  GaussianInt prime_;
  Integer root_;
};

/// `Q:p` or `Qi:a+b*i`; canonicalized.
Valuation parse_valuation(std::string_view text);
/// Comma-separated list of valuations.
std::vector<Valuation> parse_valuation_list(std::string_view text);
std::string format_valuation_list(std::span<const Valuation> vals);

/// An element of Z together with +infinity.
class Value {
 public:
  static Value infinity() {
    Value v(0);
    v.infinite_ = true;
    return v;
  }
  Value(long n) : n_(n) {}  // NOLINT: implicit from integers is intended

  bool is_infinite() const noexcept { return infinite_; }
  long finite() const noexcept { return n_; }

  friend bool operator==(const Value& a, const Value& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.n_ == b.n_);
  }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.n_ <=> b.n_;
  }

  std::string to_string() const { return infinite_ ? "+inf" : std::to_string(n_); }

 private:
  long n_ = 0;
  bool infinite_ = false;
};

Value parse_value(std::string_view text);

using ValueVector = std::vector<Value>;

/// Element of the residue field F_p or F_p[t]/(t^2+1), or the extended-residue sentinel.
class ResidueElem {
 public:
  ResidueElem(Integer p, int degree, Integer a, Integer b = 0);
  static ResidueElem infinity(Integer p, int degree);

  bool is_infinite() const noexcept { return infinite_; }
  bool is_zero() const { return !infinite_ && a_ == 0 && b_ == 0; }
  const Integer& characteristic() const noexcept { return p_; }
  int degree() const noexcept { return degree_; }
  const Integer& a() const noexcept { return a_; }
  const Integer& b() const noexcept { return b_; }

  ResidueElem operator+(const ResidueElem& o) const;
  ResidueElem operator-(const ResidueElem& o) const;
  ResidueElem operator*(const ResidueElem& o) const;
  ResidueElem inverse() const;

  friend bool operator==(const ResidueElem& x, const ResidueElem& y) {
    if (x.infinite_ || y.infinite_) return x.infinite_ == y.infinite_ && x.p_ == y.p_;
    return x.p_ == y.p_ && x.degree_ == y.degree_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

  /// `3`, `2+4*t` or `inf`.
  std::string to_string() const;

 private:
  void check_compatible(const ResidueElem& o) const;

  Integer p_;
  int degree_ = 1;
  Integer a_;
  Integer b_;
  bool infinite_ = false;
};

Value val(const Valuation& v, const FieldElem& x);
ResidueElem residue(const Valuation& v, const FieldElem& x);
FieldElem uniformizer(const Valuation& v);
ValueVector value_vector(std::span<const Valuation> vals, const FieldElem& x);
std::string format_value_vector(const ValueVector& vv);

/// Image of a rational integer in the residue field of v.
ResidueElem residue_of_integer(const Valuation& v, const Integer& c);

/// Image of a model-ring element (Z or Z[i]) in the residue field of v.
ResidueElem residue_of_integral(const Valuation& v, const GaussianInt& z);

/// prime()^e in the model ring.
GaussianInt prime_power(const Valuation& v, unsigned long e);

/// A model-ring representative of x modulo prime()^e; requires val(v, x) >= 0.
/// Over Q the representative is the least nonnegative one.
GaussianInt reduce_mod_power(const Valuation& v, const FieldElem& x, unsigned long e);

/// Some model-ring element whose residue is r (r finite).
GaussianInt lift_residue(const Valuation& v, const ResidueElem& r);

}  // namespace multival
