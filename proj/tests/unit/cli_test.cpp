#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "multival/cli.hpp"
#include "multival/witness.hpp"

using namespace multival;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(MULTIVAL_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (l == line) return true;
  }
  return false;
}

std::string write_temp(const std::string& name, const std::string& body) {
  std::string path = (std::filesystem::temp_directory_path() / ("multival_cli_test_" + name)).string();
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("golden demos") {
  auto ww = run_cli({"demo", "ww"});
  CHECK(ww.code == kExitOk);
  CHECK(ww.out == golden("demo_ww.txt"));
  CHECK(has_line(ww.out, "INTEGRAL: 1*i is a root of t^2 + 1"));
  CHECK(has_line(ww.out, "INTEGRAL: 2+1*i is a root of t^2 - 4*t + 5"));
  CHECK(has_line(ww.out, "RING-LOCAL: true"));
  CHECK(has_line(ww.out, "TOPOLOGY-LOCAL: false"));

  auto dec = run_cli({"demo", "decompose", "--primes", "2,3,5"});
  CHECK(dec.code == kExitOk);
  CHECK(dec.out == golden("demo_decompose.txt"));
  CHECK(has_line(dec.out, "WORKED-DENSITY: centers 0;1;2, radius exponent 2 -> 352"));

  auto sc = run_cli({"scramble", "--field", "Q", "--vals", "Q:5", "--tuple", "5; 1"});
  CHECK(sc.code == kExitOk);
  CHECK(sc.out == golden("scramble_5_1.txt"));
  CHECK(has_line(sc.out, "FINAL: 4;1"));
}

TEST_CASE("demos are byte-identical across runs") {
  CHECK(run_cli({"demo", "ww"}).out == run_cli({"demo", "ww"}).out);
  CHECK(run_cli({"demo", "decompose", "--primes", "2,3,7", "--seed", "9"}).out ==
        run_cli({"demo", "decompose", "--primes", "2,3,7", "--seed", "9"}).out);
  CHECK(run_cli({"demo", "decompose", "--primes", "2,3", "--seed", "1"}).out !=
        run_cli({"demo", "decompose", "--primes", "2,3", "--seed", "2"}).out);
}

TEST_CASE("basic commands") {
  auto v = run_cli({"val", "Q:5", "50/3"});
  CHECK(v.code == kExitOk);
  CHECK(has_line(v.out, "VAL: 2"));
  auto r = run_cli({"--field", "Qi", "residue", "Qi:2+i", "i"});
  CHECK(has_line(r.out, "RESIDUE: 3"));
  auto a = run_cli({"approx", "--target", "Q:2:x-0>=2", "--target", "Q:3:x-1>=2"});
  CHECK(a.code == kExitOk);
  CHECK(has_line(a.out, "X: 28"));
  auto c = run_cli({"--field", "Qi", "ring", "--spec", "glued(Qi:2+i,Qi:2-i,id)", "contains", "i"});
  CHECK(has_line(c.out, "CONTAINS: false"));
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"ring", "--spec", "mv(Q:2)", "embed", "mv(Q:3)"}).code == kExitRefuted);
  CHECK(run_cli({"ring", "--spec", "mv(Q:2,Q:3)", "embed", "mv(Q:2)"}).code == kExitOk);
  CHECK(run_cli({"topo", "--spec", "mv(Q:2,Q:3)", "--part", "mv(Q:2,Q:3)", "--part", "mv(Q:3)", "indep-sum"}).code ==
        kExitRefuted);
  CHECK(run_cli({"topo", "--spec", "mv(Q:2,Q:3)", "--part", "mv(Q:2)", "--part", "mv(Q:3)", "--trials", "3",
                 "indep-sum"})
            .code == kExitOk);
  CHECK(run_cli({"topo", "--spec", "mv(Q:2)", "coarser", "mv(Q:3)"}).code == kExitRefuted);
  CHECK(run_cli({"locsent", "eval", "--named", "locality", "--spec", "mv(Q:2,Q:3)"}).code == kExitRefuted);
  CHECK(run_cli({"locsent", "eval", "--named", "locality", "--spec", "mv(Q:7)"}).code == kExitOk);
  CHECK(run_cli({"locsent", "eval", "--named", "locality", "--spec", "mv(Q:7)", "--budget", "3"}).code == kExitUnknown);

  auto bogus = run_cli({"bogus"});
  CHECK(bogus.code == kExitUsage);
  CHECK_FALSE(bogus.err.empty());
  CHECK(run_cli({"--frobnicate", "val", "Q:5", "1"}).code == kExitUsage);
  CHECK(run_cli({"val"}).code == kExitUsage);
  CHECK(run_cli({"val", "Q:4", "1"}).code == kExitUsage);
  CHECK(run_cli({"--field", "R", "val", "Q:5", "1"}).code == kExitUsage);
  CHECK(run_cli({"scramble", "--vals", "Q:5", "--tuple", "5;0"}).code == kExitUsage);
  CHECK(run_cli({}).code == kExitUsage);
}

TEST_CASE("locsent files") {
  std::string good = write_temp("good.txt", "# locality at one prime\n" + std::string("forall x (x = x)\n"));
  auto ok = run_cli({"locsent", "check", good});
  CHECK(ok.code == kExitOk);
  CHECK(has_line(ok.out, "POLARITY: ok"));

  std::string bad = write_temp("bad.txt", "forall U : not (x in U)\n");
  auto violation = run_cli({"locsent", "check", bad});
  CHECK(violation.code == kExitRefuted);

  std::string shadow = write_temp("shadow.txt", "exists U forall U (x in U)\n");
  auto err = run_cli({"locsent", "check", shadow});
  CHECK(err.code == kExitUsage);
  CHECK(err.err == "error: " + shadow + ":1:17: variable 'U' is already bound\n");

  CHECK(run_cli({"locsent", "check", shadow + ".missing"}).code == kExitUsage);
  std::remove(good.c_str());
  std::remove(bad.c_str());
  std::remove(shadow.c_str());
}

TEST_CASE("audit mode re-verifies every witness line") {
  const std::vector<std::vector<std::string>> commands = {
      {"--audit", "ring", "--spec", "mv(Q:2,Q:3)", "local?"},
      {"--audit", "--field", "Qi", "ring", "--spec", "glued(Qi:2+i,Qi:2-i,id)", "member", "5", "1;i"},
      {"--audit", "--field", "Qi", "ring", "--spec", "glued(Qi:2+i,Qi:2-i,id)", "integral-witness", "3+2*i"},
      {"--audit", "--field", "Qi", "ring", "--spec", "glued(Qi:2+i,Qi:2-i,id)", "re-slide", "2"},
      {"--audit", "topo", "--spec", "mv(Q:2,Q:3,Q:5)", "components"},
      {"--audit", "topo", "--spec", "mv(Q:2,Q:3)", "local?"},
      {"--audit", "--trials", "3", "topo", "--spec", "mv(Q:2)", "associativity"},
      {"--audit", "scramble", "--vals", "Q:2,Q:3", "--tuple", "4;9;6"},
  };
  for (const auto& cmd : commands) {
    auto o = run_cli(cmd);
    INFO(o.out);
    CHECK(o.code == kExitOk);
    CHECK(o.out.find("AUDIT: ") != std::string::npos);
    CHECK(o.out.find("AUDIT-FAIL") == std::string::npos);
    std::istringstream in(o.out);
    for (std::string line; std::getline(in, line);) {
      if (line.rfind("WITNESS: ", 0) == 0) CHECK(audit(parse_witness(line)).ok);
    }
  }
}
