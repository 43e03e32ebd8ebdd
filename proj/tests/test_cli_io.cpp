#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "cltk/compile.hpp"
#include "cltk/gen.hpp"
#include "cltk/json_io.hpp"
#include "cltk/kernel.hpp"
#include "cltk/parser.hpp"
#include "cltk/printer.hpp"
#include "cltk/pricing.hpp"
#include "cltk/semantics.hpp"

using namespace cltk;

namespace {

ContrPtr loadContract(const std::string& name) {
  std::ifstream in(std::string(CLTK_CONTRACT_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseContract(buf.str());
}

}  // namespace

TEST_CASE("contract JSON round trip on the corpus") {
  for (const char* name : {"european-call.cl", "fx-swap.cl",
                           "template-option.cl", "barrier.cl"}) {
    CAPTURE(name);
    ContrPtr c = loadContract(name);
    CHECK(contrEqual(contractFromJson(contractToJson(c)), c));
  }
  // Let/acc nodes too, which the corpus has none of.
  ContrPtr letc = parseContract(
      "let x = acc(y. y + obs(A,0), 2, 0.0) in scale(x, transfer(a, b, U))");
  CHECK(contrEqual(contractFromJson(contractToJson(letc)), letc));
}

TEST_CASE("payoff expression JSON round trip") {
  TEnv tenv;
  for (const char* name : {"european-call.cl", "template-option.cl",
                           "barrier.cl", "double-option.cl"}) {
    CAPTURE(name);
    ILPtr il = cutPayoff(compileContract(loadContract(name)));
    CHECK(ilEqual(ilFromJson(ilToJson(il)), il));
  }
}

TEST_CASE("print/parse then JSON agree on generated contracts") {
  GenConfig cfg;
  cfg.templateVars = true;
  for (std::uint64_t s = 900; s < 920; ++s) {
    std::mt19937_64 rng(s);
    ContrPtr c = genContract(rng, cfg);
    CAPTURE(s);
    CHECK(contrEqual(parseContract(printContract(c)), c));
    CHECK(contrEqual(contractFromJson(contractToJson(c)), c));
  }
}

TEST_CASE("environment JSON: per-label series with a base day") {
  Json j = {{"labels",
             {{"AAPL",
               {{"base", -2}, {"values", {95.0, 97.5, 101.0, 104.0}}}}}}};
  ExtEnv env = extEnvFromJson(j);
  CHECK(asReal(env.lookup("AAPL", -2)) == 95.0);
  CHECK(asReal(env.lookup("AAPL", 1)) == 104.0);
  CHECK_THROWS_AS(env.lookup("AAPL", 2), MissingObservable);
  CHECK_THROWS_AS(env.lookup("MSFT", 0), MissingObservable);
}

TEST_CASE("discount JSON: flat rate and explicit table") {
  Discount flat = discountFromJson(Json{{"rate", 0.05}});
  CHECK(flat(0) == 1.0);
  CHECK(flat(365) == doctest::Approx(std::exp(-0.05)));

  Discount table = discountFromJson(Json{{"table", {1.0, 0.99, 0.98}}});
  CHECK(table(2) == 0.98);
  CHECK_THROWS_AS(table(3), EvalError);
}

TEST_CASE("template environment JSON round trip") {
  TEnv tenv;
  tenv.bind("t0", 10);
  tenv.bind("t1", 80);
  TEnv back = tenvFromJson(tenvToJson(tenv));
  CHECK(back.lookup("t0") == 10);
  CHECK(back.lookup("t1") == 80);
}

TEST_CASE("compile-eval equals a one-path degenerate-model price") {
  // The documented CLI invariant, exercised at library level: with sigma=0
  // every path is the deterministic forward curve, so `price --paths 1`
  // must equal compile-then-eval under that curve.
  ContrPtr c = loadContract("european-call.cl");
  ILPtr cut = cutPayoff(compileContract(c));
  TEnv tenv;
  Kernel k = reindex(cut, tenv);

  double rate = 0.05;
  ModelSpec m;
  m.order = {"AAPL"};
  m.assets["AAPL"] = AssetSpec{100.0, 0.0, rate};
  m.rate = rate;
  PriceResult res = priceMC(k, m, 1, 1, 0, tenv);

  ExtEnv fwd = ExtEnv::total([rate](const std::string&, std::int64_t day) {
    return Value{100.0 * std::exp(rate * static_cast<double>(day) / 365.0)};
  });
  double direct =
      evalAt(0, cut, fwd, tenv, Discount::flatRate(rate), "you", "me");
  CHECK(res.price == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("errors carry their CLI exit categories") {
  CHECK(static_cast<int>(ParseError(1, 1, "x").code()) == 2);
  CHECK(static_cast<int>(TypeError("x").code()) == 3);
  CHECK(static_cast<int>(UnsupportedError("x").code()) == 4);
  CHECK(static_cast<int>(EvalError("x").code()) == 5);
  CHECK(static_cast<int>(CompileError("let", "c").code()) == 4);
  CHECK(static_cast<int>(MissingObservable("A", 0).code()) == 5);
}
