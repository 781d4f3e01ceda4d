#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "multival/gaussian.hpp"
#include "multival/topology.hpp"
#include "multival/witness.hpp"

namespace multival {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Field term over integer constants, `i`, and lowercase variables.
struct Term {
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg };

  Op op = Op::Const;
  GaussianInt value;  // Const: a nonnegative integer or i
  std::string name;   // Var
  TermPtr lhs, rhs;   // Neg uses lhs only
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Op { Forall, Exists, Not, And, Or, Implies, In, Eq, Neq };

  Op op = Op::Eq;
  int line = 1, column = 1;

  // Forall / Exists
  std::string var;
  bool neighborhood = false;  // uppercase variable ranging over basic neighborhoods
  bool nonzero = false;       // `!= 0` guard on a field variable
  int topology = 0;           // `in tauN`
  // Forall / Exists / Not use body; binary connectives use lhs and rhs.
  FormulaPtr body, lhs, rhs;

  // In: term in [scale*]set; Eq / Neq: left, right
  TermPtr term, scale, left, right;
  std::string set;

  bool is_quantifier() const { return op == Op::Forall || op == Op::Exists; }
};

struct LocalSentence {
  FormulaPtr root;

  std::string to_string() const;
  /// Free variables in order of first occurrence.
  std::vector<std::string> free_variables() const;
};

/// Throws SyntaxError with line and column. A quantifier may not rebind a variable in scope.
LocalSentence parse_sentence(std::string_view text);

struct PolarityReport {
  bool ok = true;
  std::vector<std::string> violations;  // one per offending occurrence, with its path
};

/// forall U needs every occurrence of U positive; exists U needs every occurrence negative.
PolarityReport check_polarity(const LocalSentence& s);

/// Sentence texts shipped with the library: `locality`, `fine-generation`, `coarse-generation`.
std::vector<std::string> named_sentences();
std::string named_sentence(std::string_view name);

struct SearchBounds {
  long scale_bound = 2;  // k: neighborhoods t^m * R with m in [-k, k]
  long height = 100;     // height of sampled field elements
  int samples = 32;
  std::vector<FieldElem> seeds;
  std::uint64_t seed = 0;
  std::uint64_t budget = 2'000'000;  // atom evaluations before giving up
  bool collapse = true;  // use polarity monotonicity to keep only the smallest neighborhood

  /// Guarded scalars range over products of uniformizer powers with exponents in [-K, K].
  long scalar_bound() const { return 2 * scale_bound + 1; }
};

enum class Truth { Holds, Fails, Unknown };
std::string truth_name(Truth t);

struct SentenceVerdict {
  Truth truth = Truth::Unknown;
  std::uint64_t atoms = 0;
  std::vector<Witness> witnesses;
};

/// Bounded model check over the chain basis of each topology. `tau` is topologies[0],
/// `tauN` is topologies[N]. Holds and Fails carry witness lines; Unknown means the budget ran out.
SentenceVerdict evaluate(const LocalSentence& s, const std::vector<TopologySpec>& topologies,
                         const SearchBounds& bounds);

/// Re-evaluates the subformula reached by instantiating the leading quantifiers with
/// `bindings` (name, value text) in order; nullopt if the budget ran out.
std::optional<bool> evaluate_under(const LocalSentence& s, const std::vector<TopologySpec>& topologies,
                                   const SearchBounds& bounds,
                                   const std::vector<std::pair<std::string, std::string>>& bindings);

}  // namespace multival
