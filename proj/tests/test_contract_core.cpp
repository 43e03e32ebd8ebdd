#include <doctest.h>

#include "cltk/ast.hpp"
#include "cltk/env.hpp"
#include "cltk/parser.hpp"
#include "cltk/printer.hpp"
#include "cltk/semantics.hpp"

using namespace cltk;

namespace {

// The 90-day call option on AAPL, strike 100 (built by hand, the parser is
// tested against it).
ContrPtr europeanCall() {
  ExpPtr spot = mkObs("AAPL", 0);
  ExpPtr cond = mkOp(Op::Lt, {mkReal(100.0), spot});  // spot > 100
  ExpPtr gain = mkOp(Op::Sub, {mkObs("AAPL", 0), mkReal(100.0)});
  return mkTranslate(
      TExpr::number(90),
      mkIfWithin(cond, TExpr::number(0),
                 mkScale(gain, mkTransfer("you", "me", "USD")), mkZero()));
}

ExtEnv flatAapl(double price) {
  return ExtEnv::total([price](const std::string& label, std::int64_t) {
    if (label != "AAPL") throw MissingObservable(label, 0);
    return Value{price};
  });
}

}  // namespace

TEST_CASE("call option listing parses to the hand-built AST") {
  ContrPtr parsed = parseContract(
      "translate(90,\n"
      "  if(obs(AAPL,0) > 100.0,\n"
      "     scale(obs(AAPL,0) - 100.0, transfer(you, me, USD)),\n"
      "     zero))");
  CHECK(contrEqual(parsed, europeanCall()));
}

TEST_CASE("zero parses to Zero") {
  CHECK(contrEqual(parseContract("zero"), mkZero()));
}

TEST_CASE("fx swap listing: thousands grouping and all-desugaring") {
  ContrPtr c = parseContract(
      "scale(1.000.000,\n"
      "  both(\n"
      "     all[translate(22, transfer(me, you, EUR)),\n"
      "         translate(52, transfer(me, you, EUR)),\n"
      "         translate(83, transfer(me, you, EUR))],\n"
      "     scale(7.21,\n"
      "      all[translate(22, transfer(you, me, DKK)),\n"
      "          translate(52, transfer(you, me, DKK)),\n"
      "          translate(83, transfer(you, me, DKK))])))");
  // all[...] is sugar: the AST has no dedicated node, only nested both.
  const auto& scaleNode = std::get<Contr::Scale>(c->node);
  const auto* lit = std::get_if<Exp::RealLit>(&scaleNode.factor->node);
  REQUIRE(lit != nullptr);
  CHECK(lit->value == doctest::Approx(1'000'000.0));

  TEnv tenv;
  CHECK(horizon(c, tenv) == 84);

  ExtEnv env = ExtEnv::partial({});
  Trace tr = contractTrace(c, env, tenv);
  CHECK(tr.at(22).get("me", "you", "EUR") == doctest::Approx(1e6));
  CHECK(tr.at(22).get("you", "me", "DKK") == doctest::Approx(7.21e6));
  CHECK(tr.at(52).get("me", "you", "EUR") == doctest::Approx(1e6));
  CHECK(tr.at(83).get("you", "me", "DKK") == doctest::Approx(7.21e6));
  CHECK(tr.at(23).isZero());
}

TEST_CASE("call option horizon and trace") {
  ContrPtr c = europeanCall();
  TEnv tenv;
  CHECK(horizon(c, tenv) == 91);

  SUBCASE("in the money: day-90 transfer is spot minus strike") {
    Trace tr = contractTrace(c, flatAapl(110.0), tenv);
    CHECK(tr.at(90).get("you", "me", "USD") == doctest::Approx(10.0));
    CHECK(tr.at(89).isZero());
    CHECK(tr.at(91).isZero());
  }
  SUBCASE("out of the money: empty trace") {
    Trace tr = contractTrace(c, flatAapl(95.0), tenv);
    for (std::uint64_t t = 0; t <= 91; ++t) CHECK(tr.at(t).isZero());
  }
}

TEST_CASE("accumulator expression unrolls") {
  // acc(x. x + 1.0, 3, 0.0) counts the iterations.
  ExpPtr e = parseExp("acc(x. x + 1.0, 3, 0.0)");
  VarEnv vars;
  ExtEnv env = ExtEnv::partial({});
  CHECK(asReal(evalExp(e, vars, env)) == doctest::Approx(3.0));
}

TEST_CASE("accumulator body observes earlier days") {
  // acc(x. x + obs(P,0), 2, 0.0) at day 0: the seed is planted two days
  // back and the body runs once per day after it, so P(-1) and P(0) are
  // summed while P(-2) is never observed.
  ExpPtr e = parseExp("acc(x. x + obs(P, 0), 2, 0.0)");
  ExtEnv env = ExtEnv::partial({{{"P", -1}, Value{2.0}},
                                {{"P", 0}, Value{4.0}}});
  VarEnv vars;
  CHECK(asReal(evalExp(e, vars, env)) == doctest::Approx(2.0 + 4.0));
}

TEST_CASE("type checking") {
  TypeCtx ctx;
  SUBCASE("scale factor must be Real") {
    ContrPtr bad = mkScale(mkBool(true), mkZero());
    CHECK_THROWS_AS(typeCheckContr(ctx, bad), TypeError);
  }
  SUBCASE("if condition must be Bool") {
    ContrPtr bad = mkIfWithin(mkReal(1.0), TExpr::number(0), mkZero(), mkZero());
    CHECK_THROWS_AS(typeCheckContr(ctx, bad), TypeError);
  }
  SUBCASE("transfer to self is fine to type but traces to zero") {
    ContrPtr c = mkTransfer("you", "you", "USD");
    typeCheckContr(ctx, c);
    Trace tr = contractTrace(c, ExtEnv::partial({}), TEnv{});
    CHECK(tr.at(0).isZero());
  }
  SUBCASE("let-bound variables type through the body") {
    ContrPtr c = parseContract(
        "let x = obs(AAPL,0) - 100.0 in scale(x, transfer(you, me, USD))");
    typeCheckContr(ctx, c);
  }
  SUBCASE("unbound variable fails") {
    CHECK_THROWS_AS(typeCheckExp(ctx, mkVar("nope")), TypeError);
  }
}

TEST_CASE("instantiation closes templates and preserves traces") {
  ContrPtr c = parseContract(
      "translate(t0,\n"
      "  both(scale(100.0, transfer(you, me, USD)),\n"
      "       translate(t1,\n"
      "         if(obs(AAPL,0) > 100.0,\n"
      "            scale(obs(AAPL,0) - 100.0, transfer(you, me, USD)),\n"
      "            zero))))");
  CHECK_FALSE(isTemplateClosed(c));

  TEnv tenv;
  tenv.bind("t0", 10);
  tenv.bind("t1", 80);
  ContrPtr inst = instantiate(c, tenv);
  CHECK(isTemplateClosed(inst));

  ExtEnv env = flatAapl(107.5);
  Trace a = contractTrace(c, env, tenv);
  Trace b = contractTrace(inst, env, TEnv{});
  for (std::uint64_t t = 0; t <= horizon(c, tenv); ++t) CHECK(a.at(t) == b.at(t));
  CHECK(a.at(10).get("you", "me", "USD") == doctest::Approx(100.0));
  CHECK(a.at(90).get("you", "me", "USD") == doctest::Approx(7.5));
}

TEST_CASE("instantiating with a missing binding fails") {
  ContrPtr c = parseContract("translate(t9, zero)");
  CHECK_THROWS_AS(instantiate(c, TEnv{}), UnboundTemplateVar);
}

TEST_CASE("ifWithin waits for the condition inside the window") {
  // Barrier knocked at day 2.
  ContrPtr c = parseContract(
      "if(obs(B,0) > 0.5, 5, transfer(you, me, USD), zero)");
  ExtEnv env = ExtEnv::total([](const std::string&, std::int64_t day) {
    return Value{day >= 2 ? 1.0 : 0.0};
  });
  Trace tr = contractTrace(c, env, TEnv{});
  CHECK(tr.at(2).get("you", "me", "USD") == doctest::Approx(1.0));
  CHECK(tr.at(0).isZero());
  CHECK(tr.at(5).isZero());

  SUBCASE("window exhausted takes the else branch") {
    ExtEnv never = ExtEnv::total(
        [](const std::string&, std::int64_t) { return Value{0.0}; });
    Trace none = contractTrace(c, never, TEnv{});
    for (std::uint64_t t = 0; t <= 6; ++t) CHECK(none.at(t).isZero());
  }
}

TEST_CASE("advance emits due transfers and preserves residual value") {
  ContrPtr c = europeanCall();
  ExtEnv env = flatAapl(112.0);

  auto [residual, due] = advance(c, env, 90);
  REQUIRE(due.size() == 90);
  for (const auto& tr : due) CHECK(tr.isZero());

  // One more step pays out the option.
  auto [after, step] = reduceStep(residual, env.shifted(90));
  CHECK(step.get("you", "me", "USD") == doctest::Approx(12.0));
  Trace rest = contractTrace(after, env.shifted(91), TEnv{});
  CHECK(rest.at(0).isZero());
}

TEST_CASE("advance requires template-closed contracts") {
  ContrPtr c = parseContract("translate(t0, zero)");
  CHECK_THROWS(reduceStep(c, ExtEnv::partial({})));
}

TEST_CASE("print then parse round-trips the corpus") {
  for (const char* text : {
           "zero",
           "translate(90, if(obs(AAPL,0) > 100.0, scale(obs(AAPL,0) - 100.0, "
           "transfer(you, me, USD)), zero))",
           "let x = obs(IR,-1) in scale(x, translate(t0, transfer(a, b, X)))",
           "if(obs(B,0) <= 0.5 & true, 7, zero, scale(cond(false, 1.0, 2.0), "
           "transfer(p, q, USD)))",
       }) {
    ContrPtr c = parseContract(text);
    CHECK(contrEqual(parseContract(printContract(c)), c));
  }
}

TEST_CASE("parse errors carry positions") {
  try {
    parseContract("both(zero,\n  bogus)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}
