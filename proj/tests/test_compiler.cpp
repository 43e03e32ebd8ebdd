#include <doctest.h>

#include "cltk/compile.hpp"
#include "cltk/parser.hpp"
#include "cltk/printer.hpp"
#include "cltk/semantics.hpp"

using namespace cltk;

namespace {

ILTExprPtr tnum(std::uint64_t n) { return mkTexpr(TExpr::number(n)); }
ILTExprPtr tvar(const char* v) { return mkTexpr(TExpr::variable(v)); }

}  // namespace

TEST_CASE("templated option compiles to the documented payoff expression") {
  ContrPtr c = parseContract(
      "translate(t0,\n"
      "  both(scale(100.0, transfer(you, me, USD)),\n"
      "       translate(t1,\n"
      "         if(obs(AAPL,0) > 100.0,\n"
      "            scale(obs(AAPL,0) - 100.0, transfer(you, me, USD)),\n"
      "            zero))))");
  ILPtr il = compileContract(c);

  ILTExprPtr t01 = mkTplus(tvar("t0"), tvar("t1"));
  ILPtr aapl = mkModel("AAPL", mkTexprZ(t01));
  ILPtr expected = mkBinOp(
      ILBinOp::Add,
      mkBinOp(ILBinOp::Mult, mkFloat(100.0),
              mkPayoff(tvar("t0"), "you", "me")),
      mkLoopIf(mkBinOp(ILBinOp::Lt, mkFloat(100.0), aapl),
               mkBinOp(ILBinOp::Mult,
                       mkBinOp(ILBinOp::Sub, aapl, mkFloat(100.0)),
                       mkPayoff(t01, "you", "me")),
               mkFloat(0.0), TExpr::number(0)));
  CHECK(ilEqual(il, expected));
}

TEST_CASE("zero compiles to the zero literal") {
  CHECK(ilEqual(compileContract(mkZero()), mkFloat(0.0)));
}

TEST_CASE("nested shifts fold to a single numeral") {
  ContrPtr c = parseContract(
      "translate(10, translate(20, transfer(you, me, USD)))");
  CHECK(ilEqual(compileContract(c), mkPayoff(tnum(30), "you", "me")));
}

TEST_CASE("numeral-plus-variable shifts stay syntactic") {
  ContrPtr c = parseContract("translate(10, translate(w, zero))");
  // The contract is all zero, so test via an observable instead.
  c = parseContract(
      "translate(10, translate(w, scale(obs(A,0), transfer(x, y, U))))");
  ILPtr il = compileContract(c);
  ILTExprPtr t = mkTplus(tnum(10), tvar("w"));
  ILPtr expected = mkBinOp(ILBinOp::Mult, mkModel("A", mkTexprZ(t)),
                           mkPayoff(t, "x", "y"));
  CHECK(ilEqual(il, expected));
}

TEST_CASE("observable offsets combine with the shift") {
  ContrPtr c = parseContract(
      "translate(5, scale(obs(A,-2), transfer(x, y, U)))");
  ILPtr il = compileContract(c);
  ILPtr expected = mkBinOp(ILBinOp::Mult, mkModel("A", mkTnumZ(3)),
                           mkPayoff(tnum(5), "x", "y"));
  CHECK(ilEqual(il, expected));
}

TEST_CASE("ifWithin window carries through verbatim") {
  ContrPtr c = parseContract(
      "if(obs(A,0) > 1.0, w, transfer(x, y, U), zero)");
  ILPtr il = compileContract(c);
  const auto* loop = std::get_if<ILExpr::LoopIf>(&il->node);
  REQUIRE(loop != nullptr);
  CHECK(loop->window == TExpr::variable("w"));
}

TEST_CASE("let and acc are outside the compiled fragment") {
  CHECK_THROWS_AS(
      compileContract(parseContract("let x = 1.0 in scale(x, zero)")),
      CompileError);
  CHECK_THROWS_AS(compileContract(parseContract(
                      "scale(acc(x. x + 1.0, 3, 0.0), transfer(a, b, U))")),
                  CompileError);
  CHECK_THROWS_AS(fromExp(mkVar("x"), tnum(0)), CompileError);
}

TEST_CASE("smart plus folds numerals and zero identities") {
  CHECK(iltAsNum(tplusSmartT(tnum(3), tnum(4))) == 7);
  // Zero on either side disappears; a variable side is preserved as-is.
  ILTExprPtr left = tplusSmartT(tnum(0), tvar("x"));
  ILTExprPtr right = tplusSmartT(tvar("x"), tnum(0));
  CHECK(iltEqual(left, tvar("x")));
  CHECK(iltEqual(right, tvar("x")));
  // Non-zero mixed sums stay syntactic.
  ILTExprPtr mixed = tplusSmartT(tnum(2), tvar("x"));
  CHECK_FALSE(iltAsNum(mixed).has_value());

  SUBCASE("semantics is preserved either way") {
    TEnv tenv;
    tenv.bind("x", 9);
    CHECK(tExprSem(mixed, tenv) == 11);
    CHECK(tExprSem(left, tenv) == 9);
  }
}

TEST_CASE("compile counter tracks top-level compilations") {
  resetCompileCount();
  ContrPtr c = parseContract("translate(3, transfer(a, b, U))");
  compileContract(c);
  compileContract(c);
  CHECK(compileCount() == 2);
  resetCompileCount();
  CHECK(compileCount() == 0);
  // Direct fromContr calls (the verification path) are not counted.
  fromContr(c, tnum(0));
  CHECK(compileCount() == 0);
}

TEST_CASE("compilation erases the asset dimension") {
  // Two transfers in different currencies between the same parties compile
  // to payoffs that sum; the trace keeps them apart.
  ContrPtr c = parseContract(
      "both(transfer(you, me, EUR), transfer(you, me, DKK))");
  ILPtr il = compileContract(c);
  CHECK(ilEqual(il, mkBinOp(ILBinOp::Add, mkPayoff(tnum(0), "you", "me"),
                            mkPayoff(tnum(0), "you", "me"))));
  CHECK(evalAt(0, il, ExtEnv::partial({}), TEnv{}, Discount::flatRate(0.0),
               "you", "me") == 2.0);
}
