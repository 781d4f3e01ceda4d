#pragma once

#include <string>
#include <utility>
#include <vector>

#include "multival/field.hpp"

namespace multival {

/// Element a + b*i of Z[i].
struct GaussianInt {
  Integer re;
  Integer im;

  GaussianInt() : re(0), im(0) {}
  GaussianInt(Integer r, Integer i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussianInt(long r, long i = 0) : re(r), im(i) {}

  bool is_zero() const { return re == 0 && im == 0; }
  Integer norm() const { return re * re + im * im; }
  GaussianInt conj() const { return {re, -im}; }

  FieldElem to_field() const { return FieldElem(FieldId::GaussianRationals, Rational(re), Rational(im)); }
  std::string to_string() const;

  friend bool operator==(const GaussianInt& a, const GaussianInt& b) { return a.re == b.re && a.im == b.im; }
  friend GaussianInt operator+(const GaussianInt& a, const GaussianInt& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussianInt operator-(const GaussianInt& a, const GaussianInt& b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussianInt operator*(const GaussianInt& a, const GaussianInt& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianInt operator-() const { return {-re, -im}; }
};

/// Lexicographic order on (re, im); used for deterministic output.
bool lex_less(const GaussianInt& a, const GaussianInt& b);

/// Euclidean division with nearest-integer quotient: a = q*b + r, N(r) <= N(b)/2 < N(b).
std::pair<GaussianInt, GaussianInt> divmod(const GaussianInt& a, const GaussianInt& b);
GaussianInt mod(const GaussianInt& a, const GaussianInt& b);
bool divides(const GaussianInt& d, const GaussianInt& a);
GaussianInt exact_div(const GaussianInt& a, const GaussianInt& d);
GaussianInt power(const GaussianInt& base, unsigned long exp);

/// Bezout data: g = s*a + t*b with g a gcd of a and b.
struct GaussianBezout {
  GaussianInt g, s, t;
};
GaussianBezout xgcd(const GaussianInt& a, const GaussianInt& b);

/// The unique associate u*g with re > 0 and -re < im <= re (so 1+i is preferred over 1-i).
GaussianInt canonical_associate(const GaussianInt& g);

/// Whether g is a Gaussian prime.
bool is_gaussian_prime(const GaussianInt& g);

/// Some x with x^2 == -1 (mod p), for a prime p == 1 (mod 4).
Integer sqrt_minus_one(const Integer& p);

/// Canonical Gaussian prime of norm p, for a prime p == 1 (mod 4); the other is its conjugate.
GaussianInt split_prime(const Integer& p);

struct GaussianFactorization {
  GaussianInt unit;
  std::vector<std::pair<GaussianInt, int>> factors;  // canonical primes, by norm then (re, im)
};

/// Factorization by trial division of the norm. Throws ZeroInput for g == 0.
GaussianFactorization gaussian_factor(const GaussianInt& g);
GaussianInt recombine(const GaussianFactorization& f);

struct RationalFactorization {
  int sign = 1;
  std::vector<std::pair<Integer, int>> factors;  // increasing primes, nonzero exponents
};

/// Signed prime factorization q = sign * prod p^e. Throws ZeroInput for q == 0.
RationalFactorization rational_factor(const Rational& q);

/// Trial-division factorization of n > 0, increasing primes.
std::vector<std::pair<Integer, int>> factor_integer(const Integer& n);

bool is_prime(const Integer& n);

}  // namespace multival
