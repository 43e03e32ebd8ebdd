#include <doctest.h>

#include "cltk/compile.hpp"
#include "cltk/il.hpp"
#include "cltk/parser.hpp"
#include "cltk/printer.hpp"

using namespace cltk;

namespace {

ExtEnv flatAapl(double price) {
  return ExtEnv::total([price](const std::string& label, std::int64_t) {
    if (label != "AAPL") throw MissingObservable(label, 0);
    return Value{price};
  });
}

ILTExprPtr tnum(std::uint64_t n) { return mkTexpr(TExpr::number(n)); }
ILTExprPtr tvar(const char* v) { return mkTexpr(TExpr::variable(v)); }

// The compiled form of the templated option (hand-built):
//   (100.0 * payoff(t0,you,me)) +
//   if (100.0 < model(AAPL,t0+t1),
//       (model(AAPL,t0+t1) - 100.0) * payoff(t0+t1,you,me), 0.0)
ILPtr templateOptionIL() {
  ILTExprPtr t01 = mkTplus(tvar("t0"), tvar("t1"));
  ILPtr aapl = mkModel("AAPL", mkTexprZ(t01));
  ILPtr fixed = mkBinOp(ILBinOp::Mult, mkFloat(100.0),
                        mkPayoff(tvar("t0"), "you", "me"));
  ILPtr gain = mkBinOp(ILBinOp::Mult,
                       mkBinOp(ILBinOp::Sub, aapl, mkFloat(100.0)),
                       mkPayoff(t01, "you", "me"));
  ILPtr opt = mkLoopIf(mkBinOp(ILBinOp::Lt, mkFloat(100.0), aapl), gain,
                       mkFloat(0.0), TExpr::number(0));
  return mkBinOp(ILBinOp::Add, fixed, opt);
}

double evalWith(const ILPtr& il, const ExtEnv& env, const TEnv& tenv,
                const Discount& disc, std::uint64_t t) {
  return evalAt(t, il, env, tenv, disc, "you", "me");
}

}  // namespace

TEST_CASE("payoff discounts at the resolved day") {
  Discount disc = Discount::flatRate(0.05);
  ILPtr pay = mkPayoff(tnum(90), "you", "me");
  double v = evalWith(pay, ExtEnv::partial({}), TEnv{}, disc, 0);
  CHECK(v == disc(90));
}

TEST_CASE("payoff sign follows the party pair") {
  Discount disc = Discount::flatRate(0.0);
  ILPtr pay = mkPayoff(tnum(0), "you", "me");
  ExtEnv env = ExtEnv::partial({});
  TEnv tenv;
  CHECK(evalAt(0, pay, env, tenv, disc, "you", "me") == 1.0);
  CHECK(evalAt(0, pay, env, tenv, disc, "me", "you") == -1.0);
  CHECK(evalAt(0, pay, env, tenv, disc, "me", "other") == 0.0);
}

TEST_CASE("bilateral view signs cashflows for one party") {
  Discount disc = Discount::flatRate(0.0);
  ExtEnv env = ExtEnv::partial({});
  TEnv tenv;
  ILPtr pay = mkPayoff(tnum(0), "you", "me");
  BilateralArgs toMe{env, tenv, 0, 0, disc, "me"};
  BilateralArgs fromYou{env, tenv, 0, 0, disc, "you"};
  BilateralArgs stranger{env, tenv, 0, 0, disc, "other"};
  CHECK(ilAsReal(ilSemBilateral(pay, toMe)) == 1.0);
  CHECK(ilAsReal(ilSemBilateral(pay, fromYou)) == -1.0);
  CHECK(ilAsReal(ilSemBilateral(pay, stranger)) == 0.0);
}

TEST_CASE("model lookup adds the accumulated shift") {
  ExtEnv env = ExtEnv::partial({{{"AAPL", 7}, Value{123.0}}});
  ILPtr m = mkModel("AAPL", mkTplusZ(mkTnumZ(3), mkTnumZ(4)));
  CHECK(evalWith(m, env, TEnv{}, Discount::flatRate(0.0), 0) == 123.0);
}

TEST_CASE("model lookups may reach into the past") {
  ExtEnv env = ExtEnv::partial({{{"FIX", -3}, Value{1.5}}});
  ILPtr m = mkModel("FIX", mkTnumZ(-3));
  CHECK(evalWith(m, env, TEnv{}, Discount::flatRate(0.0), 0) == 1.5);
}

TEST_CASE("loopif searches the window and falls to else") {
  // loopif(model(HIT, 0) == 1.0, payoff(0), 0.0, 4), condition first true
  // at day 2: the payoff resolves at day 2.
  ExtEnv env = ExtEnv::total([](const std::string&, std::int64_t day) {
    return Value{day == 2 ? 1.0 : 0.0};
  });
  Discount disc = Discount::flatRate(0.10);
  ILPtr hit = mkBinOp(ILBinOp::Eq, mkModel("HIT", mkTnumZ(0)), mkFloat(1.0));
  ILPtr loop = mkLoopIf(hit, mkPayoff(tnum(0), "you", "me"), mkFloat(0.0),
                        TExpr::number(4));
  CHECK(evalWith(loop, env, TEnv{}, disc, 0) == disc(2));

  SUBCASE("window too small: else branch at the last day") {
    ILPtr tight = mkLoopIf(hit, mkPayoff(tnum(0), "you", "me"), mkFloat(0.0),
                           TExpr::number(1));
    CHECK(evalWith(tight, env, TEnv{}, disc, 0) == 0.0);
  }
}

TEST_CASE("template windows resolve through tenv") {
  ExtEnv env = ExtEnv::total([](const std::string&, std::int64_t day) {
    return Value{day == 2 ? 1.0 : 0.0};
  });
  ILPtr hit = mkBinOp(ILBinOp::Eq, mkModel("HIT", mkTnumZ(0)), mkFloat(1.0));
  ILPtr loop = mkLoopIf(hit, mkFloat(7.0), mkFloat(0.0),
                        TExpr::variable("w"));
  TEnv wide, tight;
  wide.bind("w", 4);
  tight.bind("w", 1);
  Discount disc = Discount::flatRate(0.0);
  CHECK(evalWith(loop, env, wide, disc, 0) == 7.0);
  CHECK(evalWith(loop, env, tight, disc, 0) == 0.0);
}

TEST_CASE("cutPayoff guards every payoff with a strict comparison") {
  ILPtr il = templateOptionIL();
  ILPtr cut = cutPayoff(il);

  // Structure: each Payoff p becomes if(time(p) < now, 0.0, p).
  ILTExprPtr t01 = mkTplus(tvar("t0"), tvar("t1"));
  ILPtr aapl = mkModel("AAPL", mkTexprZ(t01));
  auto guarded = [](ILTExprPtr time, ILPtr pay) {
    return mkIf(mkBinOp(ILBinOp::Lt, mkTExprVal(time), mkNow()),
                mkFloat(0.0), pay);
  };
  ILPtr expected = mkBinOp(
      ILBinOp::Add,
      mkBinOp(ILBinOp::Mult, mkFloat(100.0),
              guarded(tvar("t0"), mkPayoff(tvar("t0"), "you", "me"))),
      mkLoopIf(mkBinOp(ILBinOp::Lt, mkFloat(100.0), aapl),
               mkBinOp(ILBinOp::Mult,
                       mkBinOp(ILBinOp::Sub, aapl, mkFloat(100.0)),
                       guarded(t01, mkPayoff(t01, "you", "me"))),
               mkFloat(0.0), TExpr::number(0)));
  CHECK(ilEqual(cut, expected));
}

TEST_CASE("cut boundary: a payoff due exactly today still pays") {
  TEnv tenv;
  tenv.bind("t0", 10);
  tenv.bind("t1", 80);
  Discount disc = Discount::flatRate(0.03);
  ExtEnv env = flatAapl(112.0);
  ILPtr cut = cutPayoff(templateOptionIL());

  // Day 10 payment: alive at now=10, gone at now=11.
  double at10 = evalWith(cut, env, tenv, disc, 10);
  double at11 = evalWith(cut, env, tenv, disc, 11);
  CHECK(at10 == doctest::Approx(100.0 * disc(10) + 12.0 * disc(90)));
  CHECK(at11 == doctest::Approx(12.0 * disc(90)));

  // Day 90 payoff: alive at now=90, everything cut at now=91.
  CHECK(evalWith(cut, env, tenv, disc, 90) == doctest::Approx(12.0 * disc(90)));
  CHECK(evalWith(cut, env, tenv, disc, 91) == 0.0);
}

TEST_CASE("uncut expressions ignore the valuation day") {
  TEnv tenv;
  tenv.bind("t0", 10);
  tenv.bind("t1", 80);
  Discount disc = Discount::flatRate(0.03);
  ExtEnv env = flatAapl(112.0);
  ILPtr il = templateOptionIL();
  CHECK(evalWith(il, env, tenv, disc, 0) ==
        evalWith(il, env, tenv, disc, 91));
}

TEST_CASE("division by zero is an evaluation error") {
  ILPtr bad = mkBinOp(ILBinOp::Div, mkFloat(1.0), mkFloat(0.0));
  CHECK_THROWS_AS(
      evalWith(bad, ExtEnv::partial({}), TEnv{}, Discount::flatRate(0.0), 0),
      EvalError);
}

TEST_CASE("nat and real operands do not mix silently") {
  ILPtr bad = mkBinOp(ILBinOp::Mult, mkNat(2), mkFloat(3.0));
  CHECK_THROWS_AS(
      evalWith(bad, ExtEnv::partial({}), TEnv{}, Discount::flatRate(0.0), 0),
      Error);
}

TEST_CASE("payoff text form matches the compiled-listing style") {
  CHECK(printIL(templateOptionIL()) ==
        "((100.0 * payoff(t0, you, me)) + if((100.0 < model(AAPL, t0+t1)), "
        "((model(AAPL, t0+t1) - 100.0) * payoff(t0+t1, you, me)), 0.0))");
}
