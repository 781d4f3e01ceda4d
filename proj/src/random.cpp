#include "multival/random.hpp"

namespace multival {

std::uint64_t Rng::sub_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the combined key
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

long Rng::uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }

FieldElem Rng::element(FieldId field, long height) {
  Rational re(uniform(-height, height), uniform(1, height));
  Rational im(0);
  if (field == FieldId::GaussianRationals) im = Rational(uniform(-height, height), uniform(1, height));
  return FieldElem(field, re, im);
}

FieldElem Rng::nonzero_element(FieldId field, long height) {
  while (true) {
    FieldElem x = element(field, height);
    if (!x.is_zero()) return x;
  }
}

FieldElem Rng::integral_element(FieldId field, long height) {
  Rational re(uniform(-height, height));
  Rational im(field == FieldId::GaussianRationals ? uniform(-height, height) : 0);
  return FieldElem(field, re, im);
}

}  // namespace multival
