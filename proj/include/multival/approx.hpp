#pragma once

#include <span>
#include <string>
#include <string_view>

#include "multival/valuation.hpp"

namespace multival {

/// One simultaneous condition at one valuation.
struct ValueTarget {
  enum class Mode { ExactValue, Congruence, AtLeast, GreaterThan };

  Valuation valuation;
  Mode mode;
  long n;            // the value (ExactValue, AtLeast, GreaterThan) or min_val (Congruence)
  FieldElem center;  // Congruence only

  static ValueTarget exact(const Valuation& v, long n);
  static ValueTarget congruence(const Valuation& v, const FieldElem& center, long min_val);
  static ValueTarget at_least(const Valuation& v, long n);
  static ValueTarget greater_than(const Valuation& v, long n);

  bool satisfied_by(const FieldElem& x) const;

  /// CLI syntax: `Q:2=1`, `Q:2>=1`, `Q:2>0`, `Q:3:x-1>=2`.
  std::string to_string() const;
};

ValueTarget parse_target(std::string_view text, FieldId field);

/// Some nonzero x meeting every target. Output is re-verified before returning and is
/// not canonical; callers must check properties rather than compare values.
FieldElem approximate(std::span<const ValueTarget> targets);

/// Some x with val_1(x) > 0 and val_2(x - 1) > 0.
FieldElem separate(const Valuation& v1, const Valuation& v2);

}  // namespace multival
