#pragma once

#include <cstdint>
#include <random>

#include "multival/field.hpp"

namespace multival {

/// Seeded generator for every randomized check. Trials derive independent sub-seeds
/// from (seed, index) so results do not depend on evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index);

  long uniform(long lo, long hi);  // inclusive
  bool coin() { return uniform(0, 1) == 1; }

  /// Random element with numerators in [-height, height] and denominators in [1, height].
  FieldElem element(FieldId field, long height);
  FieldElem nonzero_element(FieldId field, long height);
  /// Random element of the model ring: integer (or Gaussian integer) parts in [-height, height].
  FieldElem integral_element(FieldId field, long height);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace multival
