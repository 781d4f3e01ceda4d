#include "multival/gaussian.hpp"

#include <algorithm>
#include <cstdint>

#include "multival/error.hpp"

namespace multival {

std::string GaussianInt::to_string() const { return to_field().to_string(); }

bool lex_less(const GaussianInt& a, const GaussianInt& b) {
  if (a.re != b.re) return a.re < b.re;
  return a.im < b.im;
}

namespace {

// round(n / d) for d > 0, halves rounded toward +infinity.
Integer round_div(const Integer& n, const Integer& d) {
  Integer twice = 2 * n + d;
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), Integer(2 * d).get_mpz_t());
  return q;
}

}  // namespace

std::pair<GaussianInt, GaussianInt> divmod(const GaussianInt& a, const GaussianInt& b) {
  if (b.is_zero()) throw Error(ErrorKind::DivisionByZero, "Gaussian division by zero");
  Integer n = b.norm();
  GaussianInt num = a * b.conj();
  GaussianInt q{round_div(num.re, n), round_div(num.im, n)};
  return {q, a - q * b};
}

GaussianInt mod(const GaussianInt& a, const GaussianInt& b) { return divmod(a, b).second; }

bool divides(const GaussianInt& d, const GaussianInt& a) {
  if (d.is_zero()) return a.is_zero();
  Integer n = d.norm();
  GaussianInt num = a * d.conj();
  return mpz_divisible_p(num.re.get_mpz_t(), n.get_mpz_t()) && mpz_divisible_p(num.im.get_mpz_t(), n.get_mpz_t());
}

GaussianInt exact_div(const GaussianInt& a, const GaussianInt& d) {
  Integer n = d.norm();
  GaussianInt num = a * d.conj();
  GaussianInt q;
  mpz_divexact(q.re.get_mpz_t(), num.re.get_mpz_t(), n.get_mpz_t());
  mpz_divexact(q.im.get_mpz_t(), num.im.get_mpz_t(), n.get_mpz_t());
  return q;
}

GaussianInt power(const GaussianInt& base, unsigned long exp) {
  GaussianInt result(1);
  GaussianInt b = base;
  while (exp) {
    if (exp & 1) result = result * b;
    exp >>= 1;
    if (exp) b = b * b;
  }
  return result;
}

GaussianBezout xgcd(const GaussianInt& a, const GaussianInt& b) {
  GaussianInt r0 = a, r1 = b;
  GaussianInt s0(1), s1(0), t0(0), t1(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = r1;
    r1 = r;
    GaussianInt s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
    GaussianInt t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  return {r0, s0, t0};
}

GaussianInt canonical_associate(const GaussianInt& g) {
  if (g.is_zero()) return g;
  GaussianInt cur = g;
  for (int k = 0; k < 4; ++k) {
    if (cur.re > 0 && -cur.re < cur.im && cur.im <= cur.re) return cur;
    cur = GaussianInt{-cur.im, cur.re};  // multiply by i
  }
  return g;  // unreachable: the four sectors tile the punctured plane
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

bool is_gaussian_prime(const GaussianInt& g) {
  if (g.is_zero()) return false;
  Integer n = g.norm();
  if (is_prime(n)) return true;
  // Associates of an inert rational prime q == 3 mod 4 have norm q^2.
  Integer q = sqrt(n);
  if (q * q != n || !is_prime(q) || q % 4 != 3) return false;
  return (g.re == 0 || g.im == 0);
}

Integer sqrt_minus_one(const Integer& p) {
  Integer e = (p - 1) / 4;
  for (Integer z = 2; z < p; ++z) {
    Integer t;
    mpz_powm(t.get_mpz_t(), z.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    if ((t * t + 1) % p == 0) return t;
  }
  throw Error(ErrorKind::InvalidValuation, "no square root of -1 modulo " + p.get_str());
}

GaussianInt split_prime(const Integer& p) {
  Integer t = sqrt_minus_one(p);
  GaussianInt g = xgcd(GaussianInt(p), GaussianInt(t, 1)).g;
  return canonical_associate(g);
}

namespace {

bool fits_u64(const Integer& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 62 && mpz_fits_ulong_p(n.get_mpz_t()); }

std::vector<std::pair<Integer, int>> factor_u64(std::uint64_t n) {
  std::vector<std::pair<Integer, int>> out;
  auto take = [&](std::uint64_t p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(Integer(static_cast<unsigned long>(p)), e);
  };
  take(2);
  take(3);
  for (std::uint64_t p = 5; p * p <= n; p += 6) {
    take(p);
    take(p + 2);
  }
  if (n > 1) out.emplace_back(Integer(static_cast<unsigned long>(n)), 1);
  return out;
}

}  // namespace

std::vector<std::pair<Integer, int>> factor_integer(const Integer& n_in) {
  if (n_in <= 0) throw Error(ErrorKind::ZeroInput, "factor_integer needs a positive input");
  if (fits_u64(n_in)) return factor_u64(n_in.get_ui());
  std::vector<std::pair<Integer, int>> out;
  Integer n = n_in;
  for (Integer p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

RationalFactorization rational_factor(const Rational& q) {
  if (q == 0) throw Error(ErrorKind::ZeroInput, "rational_factor of zero");
  RationalFactorization f;
  f.sign = q < 0 ? -1 : 1;
  Integer num = abs(q.get_num());
  const Integer& den = q.get_den();
  for (auto& [p, e] : factor_integer(num)) f.factors.emplace_back(p, e);
  for (auto& [p, e] : factor_integer(den)) f.factors.emplace_back(p, -e);
  std::sort(f.factors.begin(), f.factors.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return f;
}

GaussianFactorization gaussian_factor(const GaussianInt& g) {
  if (g.is_zero()) throw Error(ErrorKind::ZeroInput, "gaussian_factor of zero");
  GaussianFactorization f;
  GaussianInt rest = g;
  auto strip = [&](const GaussianInt& pi) {
    int e = 0;
    while (divides(pi, rest)) {
      rest = exact_div(rest, pi);
      ++e;
    }
    if (e) f.factors.emplace_back(pi, e);
  };
  for (auto& [p, e] : factor_integer(g.norm())) {
    if (p == 2) {
      strip(GaussianInt(1, 1));
    } else if (p % 4 == 3) {
      strip(GaussianInt(p));
    } else {
      GaussianInt pi = split_prime(p);
      GaussianInt other = canonical_associate(pi.conj());
      if (lex_less(other, pi)) std::swap(pi, other);
      strip(pi);
      strip(other);
    }
  }
  f.unit = rest;
  return f;
}

GaussianInt recombine(const GaussianFactorization& f) {
  GaussianInt out = f.unit;
  for (auto& [pi, e] : f.factors) out = out * power(pi, static_cast<unsigned long>(e));
  return out;
}

}  // namespace multival
