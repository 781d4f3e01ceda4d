#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multival/valuation.hpp"

namespace multival {

/// Square matrix over the prime field Q, acting on tuples of field elements.
class PrimeFieldMatrix {
 public:
  static PrimeFieldMatrix identity(std::size_t n);
  /// Rows separated by `|`, entries by `,`.
  static PrimeFieldMatrix parse(std::string_view text);

  std::size_t size() const noexcept { return n_; }
  const Rational& at(std::size_t row, std::size_t col) const { return entries_[row * n_ + col]; }

  /// row[target] -= c * row[source]
  void subtract_row_multiple(std::size_t target, std::size_t source, const Rational& c);

  std::vector<FieldElem> apply(std::span<const FieldElem> xs) const;
  const Rational& determinant() const noexcept { return det_; }
  bool is_integral() const;

  std::string to_string() const;

  friend bool operator==(const PrimeFieldMatrix& a, const PrimeFieldMatrix& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  PrimeFieldMatrix(std::size_t n, std::vector<Rational> entries);
  void recompute_determinant();

  std::size_t n_ = 0;
  std::vector<Rational> entries_;
  Rational det_;
};

/// x[target] <- x[target] - c * x[source], chosen to fix `valuation_index`.
struct ScrambleStep {
  std::size_t target;
  std::size_t source;
  Integer c;
  std::size_t valuation_index;
  std::size_t discrepancy_after;
};

struct ScrambleTrace {
  std::vector<FieldElem> initial;
  std::size_t initial_discrepancy = 0;
  std::vector<ScrambleStep> steps;
  std::vector<FieldElem> final;
  PrimeFieldMatrix matrix = PrimeFieldMatrix::identity(0);
};

/// Least integer c >= 0 with val_i(z - c*w) = min(val_i(z), val_i(w)) for every i.
/// Found by avoiding res_i(z/w) at every valuation; c = 0 when w = 0.
Integer scramble_step(const FieldElem& z, const FieldElem& w, std::span<const Valuation> vals);

/// Number of pairs (i, j) with val_i(x_j) above the minimum of val_i over the tuple.
std::size_t discrepancy(std::span<const FieldElem> xs, std::span<const Valuation> vals);

bool is_scrambled(std::span<const FieldElem> xs, std::span<const Valuation> vals);

/// Elementary integer row operations driving the discrepancy to zero. Throws ZeroEntry
/// on zero entries and NonDecreasingDiscrepancy if an internal invariant breaks.
ScrambleTrace scramble(std::span<const FieldElem> xs, std::span<const Valuation> vals);

}  // namespace multival
