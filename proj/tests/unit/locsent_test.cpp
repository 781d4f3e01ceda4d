#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "multival/error.hpp"
#include "multival/locsent.hpp"
#include "multival/random.hpp"
#include "oracle.hpp"

using namespace multival;

namespace {

TopologySpec tau(const char* text) { return TopologySpec{parse_ring_spec(text)}; }

oracle::Z2 prime_of(const Valuation& v) { return {v.prime().re, v.prime().im}; }

// Random sentence text over U, V (neighborhoods) and x, c (field variables).
struct SentenceGen {
  Rng rng;
  explicit SentenceGen(std::uint64_t seed) : rng(seed) {}

  std::string term(int depth) {
    if (depth == 0 || rng.uniform(0, 2) == 0) {
      switch (rng.uniform(0, 3)) {
        case 0: return "x";
        case 1: return "c";
        case 2: return std::to_string(rng.uniform(0, 9));
        default: return "i";
      }
    }
    static const char* ops[] = {" + ", " - ", " * ", " / "};
    if (rng.uniform(0, 5) == 0) return "-" + term(depth - 1);
    return "(" + term(depth - 1) + ops[rng.uniform(0, 3)] + term(depth - 1) + ")";
  }

  std::string formula(int depth) {
    if (depth == 0 || rng.uniform(0, 3) == 0) {
      switch (rng.uniform(0, 3)) {
        case 0: return term(2) + " in U";
        case 1: return term(2) + " in c*V";
        case 2: return term(2) + " = " + term(2);
        default: return term(2) + " != " + term(2);
      }
    }
    switch (rng.uniform(0, 3)) {
      case 0: return "not (" + formula(depth - 1) + ")";
      case 1: return "(" + formula(depth - 1) + " and " + formula(depth - 1) + ")";
      case 2: return "(" + formula(depth - 1) + " or " + formula(depth - 1) + ")";
      default: return "(" + formula(depth - 1) + " -> " + formula(depth - 1) + ")";
    }
  }

  std::string sentence() {
    std::string q1 = rng.coin() ? "forall U " : "exists U ";
    std::string q2 = rng.coin() ? "forall V " : "exists V ";
    std::string q3 = rng.coin() ? "forall c != 0 " : "exists c != 0 ";
    std::string q4 = rng.coin() ? "forall x " : "exists x ";
    return q1 + q3 + q2 + q4 + formula(3);
  }
};

// Re-check a fully instantiated locality leaf: U = t^a R, V = t^b R.
std::optional<bool> oracle_locality_leaf(const RingSpec& r, long a, long b, const FieldElem& c, const FieldElem& e,
                                         const FieldElem& x) {
  const FieldElem one = FieldElem::from_int(r.field(), 1);
  if (x.is_zero() || x == one) return std::nullopt;
  auto in_ball = [&](long m, const FieldElem& y) {
    for (const auto& v : r.valuations()) {
      auto vy = oracle::val(y, prime_of(v));
      if (vy && *vy < m) return false;
    }
    return true;
  };
  bool lhs = in_ball(a, x / c);
  bool rhs = in_ball(b, one / (x * e)) || in_ball(b, one / ((one - x) * e));
  return !lhs || rhs;
}

std::string field_of(const std::string& bindings, const std::string& key) {
  std::size_t pos = bindings.find(key + "=");
  while (pos != std::string::npos && pos != 0 && bindings[pos - 1] != ';') pos = bindings.find(key + "=", pos + 1);
  if (pos == std::string::npos) return "";
  std::size_t start = pos + key.size() + 1;
  std::size_t end = bindings.find(';', start);
  return bindings.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

TEST_CASE("parse and print") {
  auto s = parse_sentence("forall U exists c != 0 forall x (x in c*U -> x*x in U)");
  CHECK(s.to_string() == "forall U exists c != 0 forall x (x in c*U -> (x*x) in U)");
  CHECK(s.free_variables().empty());
  CHECK(parse_sentence(named_sentence("locality")).free_variables().empty());
  auto multi = parse_sentence("# comment line\nforall x\n  # another\n  (x = x)\n");
  CHECK(multi.to_string() == "forall x: x = x");
  auto open = parse_sentence("x in U and y = 1");
  CHECK(open.free_variables() == std::vector<std::string>{"x", "U", "y"});
  CHECK(parse_sentence("x = 1 -> y = 1 -> z = 1").root->rhs->op == Formula::Op::Implies);
  CHECK_THROWS_AS(named_sentence("nope"), Error);
}

TEST_CASE("syntax errors carry positions") {
  auto expect_at = [](const char* text, std::size_t line, std::size_t column) {
    try {
      parse_sentence(text);
      FAIL("accepted: " << text);
    } catch (const SyntaxError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() == column);
      CHECK(e.kind() == ErrorKind::SyntaxError);
    }
  };
  expect_at("exists U forall U (x in U)", 1, 17);
  expect_at("forall x (x = )", 1, 15);
  expect_at("forall x\n  x $ 1", 2, 5);
  expect_at("forall U in sigma x in U", 1, 13);
  expect_at("", 1, 1);
  expect_at("forall x x = 1 )", 1, 16);
}

TEST_CASE("polarity examples") {
  CHECK(check_polarity(parse_sentence(named_sentence("locality"))).ok);
  CHECK(check_polarity(parse_sentence(named_sentence("fine-generation"))).ok);
  CHECK(check_polarity(parse_sentence(named_sentence("coarse-generation"))).ok);
  auto bad = check_polarity(parse_sentence("forall U : not (x in U)"));
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0] == "U occurs negatively under 'forall U' (1:1) at forall U > not > x in U");
  CHECK(check_polarity(parse_sentence("exists U : not (x in U)")).ok);
  CHECK_FALSE(check_polarity(parse_sentence("exists U (x in U)")).ok);
  CHECK_FALSE(check_polarity(parse_sentence("forall U (x in U -> x in U)")).ok);
}

TEST_CASE("print then parse round-trips and keeps polarity") {
  SentenceGen gen(81);
  for (int t = 0; t < 500; ++t) {
    std::string text = gen.sentence();
    LocalSentence s = parse_sentence(text);
    std::string printed = s.to_string();
    LocalSentence again = parse_sentence(printed);
    CHECK(again.to_string() == printed);
    auto p1 = check_polarity(s), p2 = check_polarity(again);
    CHECK(p1.ok == p2.ok);
    CHECK(p1.violations.size() == p2.violations.size());
  }
  for (const auto& name : named_sentences()) {
    LocalSentence s = parse_sentence(named_sentence(name));
    CHECK(parse_sentence(s.to_string()).to_string() == s.to_string());
  }
}

TEST_CASE("locality sentence agrees with the topology verdict") {
  const std::vector<const char*> catalogue = {"mv(Q:2)",           "mv(Q:3)",         "mv(Q:5)",
                                              "mv(Q:7)",           "mv(Q:2,Q:3)",     "mv(Q:5,Q:7)",
                                              "mv(Q:2,Q:3,Q:5)",   "glued(Qi:2+i,Qi:2-i,id)"};
  LocalSentence s = parse_sentence(named_sentence("locality"));
  for (const char* text : catalogue) {
    TopologySpec t = tau(text);
    auto verdict = evaluate(s, {t}, SearchBounds{});
    CHECK(verdict.truth == (is_local_topology(t).local ? Truth::Holds : Truth::Fails));
    CHECK_FALSE(verdict.witnesses.empty());
    for (const auto& w : verdict.witnesses) {
      CHECK(audit(w).ok);
      std::string bindings = w.get("bindings");
      std::string x = field_of(bindings, "x");
      if (x.empty()) continue;
      long a = 0, b = 0;
      int j = 0;
      REQUIRE(std::sscanf(field_of(bindings, "U").c_str(), "ball(%d,%ld)", &j, &a) == 2);
      REQUIRE(std::sscanf(field_of(bindings, "V").c_str(), "ball(%d,%ld)", &j, &b) == 2);
      FieldId f = t.ring.field();
      auto leaf = oracle_locality_leaf(t.ring, a, b, parse_elem(field_of(bindings, "c"), f),
                                       parse_elem(field_of(bindings, "e"), f), parse_elem(x, f));
      if (leaf) CHECK(*leaf == (w.get("expect") == "true"));
    }
  }
}

TEST_CASE("generation sentences hold on a two-part sum") {
  std::vector<TopologySpec> tops = {tau("mv(Q:2,Q:3)"), tau("mv(Q:2)"), tau("mv(Q:3)")};
  for (const char* name : {"fine-generation", "coarse-generation"}) {
    auto verdict = evaluate(parse_sentence(named_sentence(name)), tops, SearchBounds{});
    CHECK(verdict.truth == Truth::Holds);
    for (const auto& w : verdict.witnesses) CHECK(audit(w).ok);
  }
  // A part that does not cover a valuation breaks the fine direction.
  std::vector<TopologySpec> short_tops = {tau("mv(Q:2,Q:3,Q:5)"), tau("mv(Q:2)"), tau("mv(Q:3)")};
  auto fine = evaluate(parse_sentence(named_sentence("fine-generation")), short_tops, SearchBounds{});
  CHECK(fine.truth == Truth::Fails);
}

TEST_CASE("collapsed and full neighborhood ranges agree") {
  LocalSentence loc = parse_sentence(named_sentence("locality"));
  for (const char* text : {"mv(Q:5)", "mv(Q:2,Q:3)", "glued(Qi:2+i,Qi:2-i,id)", "mv(Qi:1+i)"}) {
    SearchBounds collapsed;
    collapsed.scale_bound = 1;
    SearchBounds full = collapsed;
    full.collapse = false;
    auto a = evaluate(loc, {tau(text)}, collapsed);
    auto b = evaluate(loc, {tau(text)}, full);
    CHECK(a.truth == b.truth);
    CHECK(a.atoms <= b.atoms);
  }
  std::vector<TopologySpec> tops = {tau("mv(Q:2,Q:3)"), tau("mv(Q:2)"), tau("mv(Q:3)")};
  for (const char* name : {"fine-generation", "coarse-generation"}) {
    SearchBounds collapsed;
    collapsed.scale_bound = 1;
    SearchBounds full = collapsed;
    full.collapse = false;
    LocalSentence s = parse_sentence(named_sentence(name));
    CHECK(evaluate(s, tops, collapsed).truth == evaluate(s, tops, full).truth);
  }
}

TEST_CASE("small sentences") {
  std::vector<TopologySpec> t5 = {tau("mv(Q:5)")};
  SearchBounds b;
  CHECK(evaluate(parse_sentence("forall x x = x"), t5, b).truth == Truth::Holds);
  CHECK(evaluate(parse_sentence("exists x x != x"), t5, b).truth == Truth::Fails);
  CHECK(evaluate(parse_sentence("forall U exists x != 0 x in U"), t5, b).truth == Truth::Holds);
  CHECK(evaluate(parse_sentence("forall U forall x (x in U or x = x)"), t5, b).truth == Truth::Holds);
  CHECK(evaluate(parse_sentence("forall x (x*x = -1 -> x = i or x = -i)"), {tau("mv(Qi:2+i)")}, b).truth ==
        Truth::Holds);
}

TEST_CASE("evaluation errors and Unknown") {
  std::vector<TopologySpec> t5 = {tau("mv(Q:5)")};
  CHECK_THROWS_AS(evaluate(parse_sentence("x = 1"), t5, SearchBounds{}), Error);
  CHECK_THROWS_AS(evaluate(parse_sentence("forall U (not x in U)"), t5, SearchBounds{}), Error);
  CHECK_THROWS_AS(evaluate(parse_sentence("forall U in tau1 forall x x in U"), t5, SearchBounds{}), Error);
  SearchBounds tiny;
  tiny.budget = 10;
  auto verdict = evaluate(parse_sentence(named_sentence("locality")), {tau("mv(Q:2,Q:3)")}, tiny);
  CHECK(verdict.truth == Truth::Unknown);
  CHECK(truth_name(Truth::Unknown) == "Unknown");
}

TEST_CASE("evaluation is deterministic") {
  LocalSentence s = parse_sentence(named_sentence("locality"));
  SearchBounds b;
  b.seed = 7;
  auto first = evaluate(s, {tau("mv(Q:2,Q:3,Q:5)")}, b);
  auto second = evaluate(s, {tau("mv(Q:2,Q:3,Q:5)")}, b);
  CHECK(first.atoms == second.atoms);
  REQUIRE(first.witnesses.size() == second.witnesses.size());
  for (std::size_t j = 0; j < first.witnesses.size(); ++j) {
    CHECK(first.witnesses[j].to_line() == second.witnesses[j].to_line());
  }
}
