#include <numeric>
#include <vector>

#include "doctest.h"
#include "multival/error.hpp"
#include "multival/random.hpp"
#include "multival/rings.hpp"
#include "multival/scramble.hpp"
#include "oracle.hpp"

using namespace multival;

namespace {

FieldElem q(const char* s) { return parse_elem(s, FieldId::Rationals); }
FieldElem qi(const char* s) { return parse_elem(s, FieldId::GaussianRationals); }
FieldElem qn(long n) { return FieldElem::from_int(FieldId::Rationals, n); }

oracle::Z2 prime_of(const Valuation& v) { return {v.prime().re, v.prime().im}; }

// Definition check: nonnegative valuations, plus equal residues for glued rings.
bool oracle_contains(const RingSpec& r, const FieldElem& x) {
  for (const auto& v : r.valuations()) {
    auto value = oracle::val(x, prime_of(v));
    if (value && *value < 0) return false;
  }
  if (!r.is_glued()) return true;
  const auto& vs = r.valuations();
  long p = vs[0].p().get_si();
  auto r1 = oracle::residue(x, prime_of(vs[0]), p, false);
  auto r2 = oracle::residue(x, prime_of(vs[1]), p, false);
  return r1 && r2 && r1->a == r2->a;
}

bool oracle_certificate(const RingSpec& r, const ModuleCertificate& c) {
  if (c.generators.size() != c.coefficients.size()) return false;
  FieldElem sum(c.target.field());
  for (std::size_t j = 0; j < c.generators.size(); ++j) {
    if (!oracle_contains(r, c.coefficients[j])) return false;
    sum += c.coefficients[j] * c.generators[j];
  }
  return sum == c.target;
}

const std::vector<const char*> kSpecs = {
    "mv(Q:2,Q:3)",       "mv(Q:5)",          "mv(Q:2,Q:3,Q:5)",          "mv(Qi:2+i,Qi:2-i)",
    "mv(Qi:1+i,Qi:3)",   "glued(Qi:2+i,Qi:2-i,id)", "glued(Qi:3+2*i,Qi:3-2*i,id)",
};

}  // namespace

TEST_CASE("ring spec parsing") {
  CHECK(ww_ring().to_string() == "glued(Qi:2+1*i,Qi:2-1*i,id)");
  CHECK(parse_ring_spec("glued(Qi:2+i, Qi:2-i, id)") == ww_ring());
  CHECK(ww_closure().to_string() == "mv(Qi:2+1*i,Qi:2-1*i)");
  CHECK(closure_of(ww_ring()) == ww_closure());
  CHECK_THROWS_AS(parse_ring_spec("mv()"), Error);
  CHECK_THROWS_AS(parse_ring_spec("mv(Q:2,Q:2)"), Error);
  CHECK_THROWS_AS(parse_ring_spec("glued(Qi:2+i,Qi:2-i,frob)"), Error);
  CHECK_THROWS_AS(parse_ring_spec("glued(Q:2,Q:3,id)"), Error);
  CHECK_THROWS_AS(parse_ring_spec("mv(Q:2,Qi:2+i)"), Error);
  CHECK_THROWS_AS(parse_ring_spec("ring(Q:2)"), Error);
}

TEST_CASE("membership, units and the Jacobson radical") {
  RingSpec ww = ww_ring();
  RingSpec z23 = parse_ring_spec("mv(Q:2,Q:3)");
  CHECK_FALSE(contains(ww, qi("i")));
  CHECK(contains(ww, qi("5*i")));
  CHECK(contains(z23, q("1/5")));
  CHECK(is_unit(ww, qi("2")));
  CHECK_FALSE(is_unit(ww, qi("5")));
  CHECK_FALSE(is_unit(z23, q("6")));
  CHECK(in_jacobson(z23, q("6")));
  CHECK_FALSE(in_jacobson(ww, qi("2+i")));
  CHECK_FALSE(contains(ww, qi("2+i")));
  CHECK(in_jacobson(ww, qi("5")));
  CHECK_THROWS_AS(contains(ww, q("1")), Error);
}

TEST_CASE("contains agrees with the definition") {
  Rng rng(51);
  for (const char* text : kSpecs) {
    RingSpec r = parse_ring_spec(text);
    for (int t = 0; t < 1000; ++t) {
      FieldElem x = rng.element(r.field(), 30);
      CHECK(contains(r, x) == oracle_contains(r, x));
    }
  }
}

TEST_CASE("key localization law") {
  Rng rng(52);
  CHECK(key_localizations(parse_ring_spec("mv(Q:2,Q:3)")) ==
        std::vector<RingSpec>{parse_ring_spec("mv(Q:2)"), parse_ring_spec("mv(Q:3)")});
  CHECK(key_localizations(ww_ring()) == std::vector<RingSpec>{ww_ring()});
  CHECK(key_localizations(parse_ring_spec("mv(Q:5)")) == std::vector<RingSpec>{parse_ring_spec("mv(Q:5)")});
  for (const char* text : kSpecs) {
    RingSpec r = parse_ring_spec(text);
    auto locs = key_localizations(r);
    REQUIRE_FALSE(locs.empty());
    for (int t = 0; t < 300; ++t) {
      FieldElem x = rng.element(r.field(), 30);
      bool everywhere = std::all_of(locs.begin(), locs.end(), [&](const RingSpec& l) { return contains(l, x); });
      CHECK(everywhere == contains(r, x));
    }
  }
}

TEST_CASE("locality of rings") {
  auto ww = is_local_ring(ww_ring());
  CHECK(ww.local);
  CHECK(verify_locality(ww_ring(), ww));
  auto z5 = parse_ring_spec("mv(Q:5)");
  CHECK(is_local_ring(z5).local);
  CHECK(verify_locality(z5, is_local_ring(z5)));

  auto z23 = parse_ring_spec("mv(Q:2,Q:3)");
  auto verdict = is_local_ring(z23);
  CHECK_FALSE(verdict.local);
  REQUIRE(verdict.witness);
  CHECK(*verdict.witness == qn(4));
  CHECK(verify_locality(z23, verdict));

  for (const char* text : kSpecs) {
    RingSpec r = parse_ring_spec(text);
    auto v = is_local_ring(r);
    CHECK(v.local == (r.is_glued() || r.valuations().size() == 1));
    CHECK(verify_locality(r, v));
    if (!v.local) {
      // x and 1 - x are both non-units: each has a positive valuation somewhere
      const FieldElem& x = *v.witness;
      FieldElem y = FieldElem::from_int(r.field(), 1) - x;
      CHECK(oracle_contains(r, x));
      bool x_nonunit = false, y_nonunit = false;
      for (const auto& val : r.valuations()) {
        x_nonunit |= *oracle::val(x, prime_of(val)) > 0;
        y_nonunit |= *oracle::val(y, prime_of(val)) > 0;
      }
      CHECK(x_nonunit);
      CHECK(y_nonunit);
    }
  }
  LocalityVerdict forged{true, "forged", std::nullopt};
  CHECK_FALSE(verify_locality(z23, forged));
}

TEST_CASE("module generators and membership examples") {
  auto z23 = parse_ring_spec("mv(Q:2,Q:3)");
  std::vector<FieldElem> y23 = {qn(2), qn(3)};
  auto g = module_generator(y23, z23);
  CHECK(oracle::val(g.generator, {2, 0}) == 0);
  CHECK(oracle::val(g.generator, {3, 0}) == 0);
  CHECK(oracle_certificate(z23, g.certificate));
  std::vector<FieldElem> y46 = {qn(4), qn(6)};
  auto g46 = module_generator(y46, z23);
  CHECK(oracle::val(g46.generator, {2, 0}) == 1);
  CHECK(oracle::val(g46.generator, {3, 0}) == 0);
  std::vector<FieldElem> single = {q("7/5")};
  auto gs = module_generator(single, z23);
  CHECK(gs.generator == q("7/5"));
  CHECK_THROWS_AS(module_generator(y23, ww_ring()), Error);
  std::vector<FieldElem> zeros = {qn(0), qn(0)};
  CHECK_THROWS_AS(module_generator(zeros, z23), Error);

  auto one = module_membership(qn(1), y23, z23);
  CHECK(one.member);
  REQUIRE(one.certificate);
  CHECK(verify_certificate(z23, *one.certificate));
  CHECK(oracle_certificate(z23, *one.certificate));

  std::vector<FieldElem> unit = {qi("1")};
  CHECK_FALSE(module_membership(qi("i"), unit, ww_ring()).member);
  std::vector<FieldElem> two = {qn(2)};
  CHECK_FALSE(module_membership(q("1/2"), two, parse_ring_spec("mv(Q:2)")).member);

  std::vector<FieldElem> three = {qi("1"), qi("i"), qi("2")};
  try {
    module_membership(qi("1"), three, ww_ring());
    FAIL("three generators accepted over a glued ring");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedArity);
  }
}

TEST_CASE("independence examples") {
  std::vector<FieldElem> one_i = {qi("1"), qi("i")};
  CHECK(independent(one_i, ww_ring()));
  CHECK_FALSE(independent(one_i, ww_closure()));
  std::vector<FieldElem> single = {q("3")};
  CHECK(independent(single, parse_ring_spec("mv(Q:2,Q:3)")));
}

TEST_CASE("membership agrees with bounded coefficient search") {
  // Coefficients u/w with |u|, w <= 50 and w prime to the spec's primes lie in R.
  Rng rng(53);
  const std::vector<std::vector<long>> prime_sets = {{2}, {3}, {2, 3}, {2, 5}, {3, 5}, {2, 3, 5}};
  int positives = 0, negatives = 0;
  for (int t = 0; t < 200; ++t) {
    const auto& primes = prime_sets[static_cast<std::size_t>(t) % prime_sets.size()];
    std::vector<Valuation> vals;
    for (long p : primes) vals.push_back(Valuation::rational(Integer(p)));
    RingSpec r = RingSpec::multi_valuation(vals);
    auto coprime = [&](long w) {
      return std::all_of(primes.begin(), primes.end(), [&](long p) { return w % p != 0; });
    };
    auto in_box = [&](const FieldElem& c) {
      return abs(c.re().get_num()) <= 50 && c.re().get_den() <= 50 && coprime(c.re().get_den().get_si());
    };
    std::size_t n = static_cast<std::size_t>(rng.uniform(1, 2));
    std::vector<FieldElem> ys;
    for (std::size_t j = 0; j < n; ++j) ys.push_back(rng.nonzero_element(FieldId::Rationals, 12));
    FieldElem x = rng.element(FieldId::Rationals, 12);

    auto answer = module_membership(x, ys, r);
    if (answer.member) {
      ++positives;
      REQUIRE(answer.certificate);
      CHECK(verify_certificate(r, *answer.certificate));
      CHECK(oracle_certificate(r, *answer.certificate));
    } else {
      ++negatives;
    }

    // The valuation criterion, recomputed from the oracle.
    bool criterion = true;
    for (long p : primes) {
      auto vx = oracle::val(x, {p, 0});
      long best = 1L << 40;
      for (const auto& y : ys) best = std::min(best, *oracle::val(y, {p, 0}));
      if (vx && *vx < best) criterion = false;
    }
    CHECK(criterion == answer.member);

    // Brute force: any certificate it finds must match a positive answer.
    bool found = false;
    for (long u = -50; u <= 50 && !found; ++u) {
      for (long w = 1; w <= 50 && !found; ++w) {
        if (!coprime(w) || std::gcd(u, w) != 1) continue;
        FieldElem c0(FieldId::Rationals, Rational(u, w));
        if (n == 1) {
          found = c0 * ys[0] == x;
        } else {
          FieldElem c1 = (x - c0 * ys[0]) / ys[1];
          found = in_box(c1) && oracle_contains(r, c1);
        }
      }
    }
    if (found) CHECK(answer.member);
  }
  CHECK(positives > 20);
  CHECK(negatives > 20);
}

TEST_CASE("glued membership agrees with residue search") {
  // Over WW, x in R*y iff x/y in R.
  Rng rng(54);
  RingSpec ww = ww_ring();
  for (int t = 0; t < 300; ++t) {
    FieldElem y = rng.nonzero_element(FieldId::GaussianRationals, 10);
    FieldElem x = rng.element(FieldId::GaussianRationals, 10);
    std::vector<FieldElem> ys = {y};
    auto answer = module_membership(x, ys, ww);
    CHECK(answer.member == oracle_contains(ww, x / y));
    if (answer.member) CHECK(oracle_certificate(ww, *answer.certificate));
  }
}

TEST_CASE("GL2 images of an independent pair stay independent over WW") {
  Rng rng(55);
  std::vector<FieldElem> base = {qi("1"), qi("i")};
  REQUIRE(independent(base, ww_ring()));
  int done = 0;
  while (done < 50) {
    long a = rng.uniform(-5, 5), b = rng.uniform(-5, 5), c = rng.uniform(-5, 5), d = rng.uniform(-5, 5);
    long det = a * d - b * c;
    if (det != 1 && det != -1) continue;
    ++done;
    auto m = [](long v) { return FieldElem::from_int(FieldId::GaussianRationals, v); };
    std::vector<FieldElem> image = {m(a) * base[0] + m(b) * base[1], m(c) * base[0] + m(d) * base[1]};
    CHECK(independent(image, ww_ring()));
  }
}

TEST_CASE("scrambled pairs over multi-valuation rings are mutual multiples") {
  Rng rng(56);
  const std::vector<const char*> specs = {"mv(Q:2,Q:3)", "mv(Q:2,Q:3,Q:5)", "mv(Qi:2+i,Qi:2-i)", "mv(Qi:1+i,Qi:3)"};
  int done = 0;
  while (done < 200) {
    RingSpec r = parse_ring_spec(specs[static_cast<std::size_t>(done) % specs.size()]);
    FieldElem y1 = rng.nonzero_element(r.field(), 100), y2 = rng.nonzero_element(r.field(), 100);
    if (!contains(r, y1) || !contains(r, y2)) continue;
    ++done;
    std::vector<FieldElem> pair = {y1, y2};
    auto trace = scramble(pair, r.valuations());
    std::vector<FieldElem> a = {trace.final[1]}, b = {trace.final[0]};
    auto first = module_membership(trace.final[0], a, r);
    auto second = module_membership(trace.final[1], b, r);
    CHECK(first.member);
    CHECK(second.member);
    if (first.member) CHECK(oracle_certificate(r, *first.certificate));
    if (second.member) CHECK(oracle_certificate(r, *second.certificate));
  }
}

TEST_CASE("integrality witnesses") {
  auto wi = integrality_witness(qi("i"), ww_ring());
  CHECK(wi.sum == qi("0"));
  CHECK(wi.product == qi("1"));
  auto w2 = integrality_witness(qi("2+i"), ww_ring());
  CHECK(w2.sum == qi("4"));
  CHECK(w2.product == qi("5"));
  auto in_r = integrality_witness(qi("2"), ww_ring());
  CHECK(in_r.sum == qi("4"));
  CHECK(in_r.product == qi("4"));
  try {
    integrality_witness(qi("1/5"), ww_ring());
    FAIL("element outside the closure accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInClosure);
  }
  CHECK_THROWS_AS(integrality_witness(q("1"), parse_ring_spec("mv(Q:2)")), Error);

  Rng rng(57);
  int done = 0;
  while (done < 200) {
    FieldElem x = rng.element(FieldId::GaussianRationals, 1000);
    if (!oracle_contains(ww_closure(), x)) continue;
    ++done;
    auto w = integrality_witness(x, ww_ring());
    CHECK(oracle_contains(ww_ring(), w.sum));
    CHECK(oracle_contains(ww_ring(), w.product));
    CHECK((x * x - w.sum * x + w.product).is_zero());
  }
}

TEST_CASE("product of both maximal ideals lies in WW") {
  Rng rng(58);
  FieldElem p1 = qi("2+i"), p2 = qi("2-i");
  for (int t = 0; t < 500; ++t) {
    FieldElem y = rng.element(FieldId::GaussianRationals, 100);
    if (!oracle_contains(ww_closure(), y)) continue;
    FieldElem x = y;
    for (long k = rng.uniform(1, 3); k > 0; --k) x *= p1;
    for (long k = rng.uniform(1, 3); k > 0; --k) x *= p2;
    CHECK(contains(ww_ring(), x));
    CHECK(in_jacobson(ww_ring(), x));
    CHECK(oracle_contains(ww_ring(), x));
  }
}

TEST_CASE("embeddability catalogue") {
  auto down = embeddability_witness(ww_closure(), ww_ring());
  REQUIRE(down.embeds());
  CHECK(*down.scale == qi("5"));
  auto up = embeddability_witness(ww_ring(), ww_closure());
  REQUIRE(up.embeds());
  CHECK(*up.scale == qi("1"));
  CHECK(verify_embedding(ww_closure(), ww_ring(), qi("5")));
  CHECK_FALSE(verify_embedding(ww_closure(), ww_ring(), qi("1")));
  CHECK_FALSE(verify_embedding(ww_closure(), ww_ring(), qi("2+i")));

  Rng rng(59);
  for (int t = 0; t < 500; ++t) {
    FieldElem x = rng.element(FieldId::GaussianRationals, 200);
    if (oracle_contains(ww_closure(), x)) CHECK(oracle_contains(ww_ring(), qi("5") * x));
    if (oracle_contains(ww_ring(), x)) CHECK(oracle_contains(ww_closure(), x));
  }

  auto z2 = parse_ring_spec("mv(Q:2)"), z3 = parse_ring_spec("mv(Q:3)");
  auto refuted = embeddability_witness(z2, z3);
  CHECK_FALSE(refuted.embeds());
  REQUIRE(refuted.escape_valuation);
  for (const char* c : {"1", "3", "27", "1/3", "6/7", "-81/2"}) {
    FieldElem x = refuted.escape(q(c));
    CHECK(oracle_contains(z2, x));
    CHECK_FALSE(oracle_contains(z3, q(c) * x));
  }
  CHECK_THROWS_AS(embeddability_witness(z2, ww_ring()), Error);
}

TEST_CASE("scrambled independent tuples") {
  auto z5 = parse_ring_spec("mv(Q:5)");
  std::vector<FieldElem> unit = {q("1")};
  CHECK(re_slide_verify(unit, q("7"), z5, z5.valuations()));
  std::vector<FieldElem> one_i = {qi("1"), qi("i")};
  CHECK(re_slide_verify(one_i, qi("1"), ww_ring(), ww_ring().valuations()));
  CHECK_FALSE(re_slide_verify(one_i, qi("1"), ww_closure(), ww_closure().valuations()));

  auto ys = re_slide_construct(qi("2"), ww_ring());
  CHECK(re_slide_verify(ys, qi("2"), ww_ring(), ww_ring().valuations()));
  CHECK(re_slide_construct(q("3"), z5) == unit);
  for (const char* bad : {"5", "i", "0"}) {
    try {
      re_slide_construct(qi(bad), ww_ring());
      FAIL("no instance expected");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NoInstance);
    }
  }
  CHECK_THROWS_AS(re_slide_construct(qi("1"), ww_closure()), Error);

  // Over a multi-valuation ring no scrambled pair passes.
  Rng rng(60);
  for (int t = 0; t < 100; ++t) {
    std::vector<FieldElem> pair = {rng.nonzero_element(FieldId::GaussianRationals, 30),
                                   rng.nonzero_element(FieldId::GaussianRationals, 30)};
    auto trace = scramble(pair, ww_closure().valuations());
    CHECK_FALSE(re_slide_verify(trace.final, qi("1"), ww_closure(), ww_closure().valuations()));
  }
}
