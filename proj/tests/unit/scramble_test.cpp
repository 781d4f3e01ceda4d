#include <algorithm>
#include <vector>

#include "doctest.h"
#include "multival/error.hpp"
#include "multival/random.hpp"
#include "multival/scramble.hpp"
#include "oracle.hpp"

using namespace multival;

namespace {

FieldElem q(const char* s) { return parse_elem(s, FieldId::Rationals); }
FieldElem qi(const char* s) { return parse_elem(s, FieldId::GaussianRationals); }

std::vector<FieldElem> tq(const char* s) { return parse_tuple(s, FieldId::Rationals); }

// Recount of the discrepancy straight from the oracle valuation.
std::size_t oracle_discrepancy(const std::vector<FieldElem>& xs, const std::vector<Valuation>& vals) {
  std::size_t count = 0;
  for (const auto& v : vals) {
    oracle::Z2 pi{v.prime().re, v.prime().im};
    std::vector<long> values;
    for (const auto& x : xs) values.push_back(*oracle::val(x, pi));
    long m = *std::min_element(values.begin(), values.end());
    for (long value : values) count += value > m ? 1 : 0;
  }
  return count;
}

const std::vector<const char*> kQ = {"Q:2", "Q:3", "Q:5", "Q:7"};
const std::vector<const char*> kQi = {"Qi:1+1*i", "Qi:2+1*i", "Qi:2-1*i", "Qi:3"};

}  // namespace

TEST_CASE("scramble_step examples") {
  auto v5 = parse_valuation_list("Q:5");
  CHECK(scramble_step(q("5"), q("1"), v5) == 1);
  CHECK(scramble_step(q("7/3"), q("0"), v5) == 0);
  auto v23 = parse_valuation_list("Q:2,Q:3");
  CHECK(scramble_step(q("1"), q("1"), v23) == 0);
}

TEST_CASE("scramble examples") {
  auto v5 = parse_valuation_list("Q:5");
  auto trace = scramble(tq("5;1"), v5);
  CHECK(format_tuple(trace.final) == "4;1");
  REQUIRE(trace.steps.size() == 1);
  CHECK(trace.steps[0].target == 0);
  CHECK(trace.steps[0].source == 1);
  CHECK(trace.steps[0].c == 1);
  CHECK(trace.initial_discrepancy == 1);
  CHECK(trace.steps[0].discrepancy_after == 0);
  CHECK(trace.matrix.to_string() == "1,-1|0,1");

  auto same = scramble(tq("1;1"), v5);
  CHECK(same.steps.empty());
  CHECK(same.matrix == PrimeFieldMatrix::identity(2));

  auto v23 = parse_valuation_list("Q:2,Q:3");
  auto t49 = scramble(tq("4;9"), v23);
  CHECK(is_scrambled(t49.final, v23));
  CHECK(oracle_discrepancy(t49.final, v23) == 0);

  CHECK(is_scrambled(tq("4;1"), v5));
  CHECK_FALSE(is_scrambled(tq("5;1"), v5));
  std::vector<FieldElem> gauss = {qi("5"), qi("5*i")};
  CHECK(is_scrambled(gauss, parse_valuation_list("Qi:2+1*i,Qi:2-1*i")));
  CHECK(discrepancy(tq("5;1"), v5) == 1);
  CHECK(discrepancy(tq("4;2;1"), parse_valuation_list("Q:2")) == 2);
}

TEST_CASE("scramble errors") {
  auto v5 = parse_valuation_list("Q:5");
  try {
    scramble(tq("5;0"), v5);
    FAIL("zero entry accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroEntry);
  }
}

TEST_CASE("matrix helpers") {
  auto m = PrimeFieldMatrix::parse("1,2|3,4");
  CHECK(m.determinant() == -2);
  CHECK(m.is_integral());
  CHECK(m.to_string() == "1,2|3,4");
  auto y = m.apply(tq("1;1"));
  CHECK(format_tuple(y) == "3;7");
  CHECK_THROWS_AS(PrimeFieldMatrix::parse("1,2|3"), Error);
}

TEST_CASE("scramble soundness on random tuples") {
  Rng rng(41);
  for (int t = 0; t < 1000; ++t) {
    bool gauss = t % 2 == 1;
    FieldId f = gauss ? FieldId::GaussianRationals : FieldId::Rationals;
    std::vector<const char*> pool = gauss ? kQi : kQ;
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    std::size_t m = static_cast<std::size_t>(rng.uniform(1, 4));
    std::vector<Valuation> vals;
    for (std::size_t j = 0; j < m; ++j) vals.push_back(parse_valuation(pool[j]));
    std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
    std::vector<FieldElem> xs;
    for (std::size_t j = 0; j < n; ++j) xs.push_back(rng.nonzero_element(f, 10000));

    auto trace = scramble(xs, vals);
    CHECK(trace.steps.size() <= n * m);
    CHECK(trace.initial_discrepancy == oracle_discrepancy(xs, vals));
    std::size_t last = trace.initial_discrepancy;
    for (const auto& s : trace.steps) {
      CHECK(s.discrepancy_after < last);
      last = s.discrepancy_after;
    }
    CHECK(is_scrambled(trace.final, vals));
    CHECK(oracle_discrepancy(trace.final, vals) == 0);
    CHECK(trace.matrix.apply(xs) == trace.final);
    CHECK(trace.matrix.is_integral());
    CHECK(trace.matrix.determinant() != 0);
  }
}

TEST_CASE("scramble_step equality on random pairs") {
  Rng rng(42);
  for (int t = 0; t < 1000; ++t) {
    bool gauss = t % 2 == 1;
    FieldId f = gauss ? FieldId::GaussianRationals : FieldId::Rationals;
    std::vector<const char*> pool = gauss ? kQi : kQ;
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    std::size_t m = static_cast<std::size_t>(rng.uniform(1, 4));
    std::vector<Valuation> vals;
    for (std::size_t j = 0; j < m; ++j) vals.push_back(parse_valuation(pool[j]));
    FieldElem z = rng.nonzero_element(f, 10000), w = rng.element(f, 10000);
    Integer c = scramble_step(z, w, vals);
    FieldElem d = z - FieldElem::from_integer(f, c) * w;
    for (const auto& v : vals) {
      oracle::Z2 pi{v.prime().re, v.prime().im};
      auto vz = oracle::val(z, pi), vw = oracle::val(w, pi), vd = oracle::val(d, pi);
      long expect = vw ? std::min(*vz, *vw) : *vz;
      REQUIRE(vd);
      CHECK(*vd == expect);
    }
    // least such c: every smaller candidate breaks the equality somewhere
    for (long smaller = 0; smaller < c; ++smaller) {
      FieldElem e = z - FieldElem::from_int(f, smaller) * w;
      bool breaks = false;
      for (const auto& v : vals) {
        oracle::Z2 pi{v.prime().re, v.prime().im};
        auto ve = oracle::val(e, pi);
        long expect = std::min(*oracle::val(z, pi), *oracle::val(w, pi));
        if (!ve || *ve != expect) breaks = true;
      }
      CHECK(breaks);
    }
  }
}
