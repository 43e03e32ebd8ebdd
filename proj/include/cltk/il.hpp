#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "cltk/ast.hpp"
#include "cltk/env.hpp"

namespace cltk {

// Template expressions of the payoff language: contract-level template
// expressions closed under syntactic addition.
struct ILTExpr;
using ILTExprPtr = std::shared_ptr<const ILTExpr>;

struct ILTExpr {
  struct Tplus {
    ILTExprPtr left;
    ILTExprPtr right;
  };
  std::variant<Tplus, TExpr> node;
};

ILTExprPtr mkTexpr(TExpr t);
ILTExprPtr mkTplus(ILTExprPtr a, ILTExprPtr b);
bool iltEqual(const ILTExprPtr& a, const ILTExprPtr& b);

// Further extended with signed integer literals, for observable lookups
// that may refer to the past.
struct ILTExprZ;
using ILTExprZPtr = std::shared_ptr<const ILTExprZ>;

struct ILTExprZ {
  struct TplusZ {
    ILTExprZPtr left;
    ILTExprZPtr right;
  };
  struct TnumZ {
    std::int64_t value;
  };
  std::variant<TplusZ, ILTExprPtr, TnumZ> node;
};

ILTExprZPtr mkTexprZ(ILTExprPtr t);
ILTExprZPtr mkTplusZ(ILTExprZPtr a, ILTExprZPtr b);
ILTExprZPtr mkTnumZ(std::int64_t z);
bool iltzEqual(const ILTExprZPtr& a, const ILTExprZPtr& b);

std::uint64_t tExprSem(const ILTExprPtr& t, const TEnv& tenv);
std::int64_t tExprZSem(const ILTExprZPtr& t, const TEnv& tenv);

enum class ILUnOp { Neg, Not };
enum class ILBinOp { Add, Sub, Mult, Div, Lt, Leq, Eq, And, Or };

const char* ilUnOpName(ILUnOp op);
const char* ilBinOpName(ILBinOp op);

struct ILExpr;
using ILPtr = std::shared_ptr<const ILExpr>;

struct ILExpr {
  struct If {
    ILPtr cond;
    ILPtr thenE;
    ILPtr elseE;
  };
  struct FloatLit {
    double value;
  };
  struct NatLit {
    std::uint64_t value;
  };
  struct BoolLit {
    bool value;
  };
  struct TExprVal {
    ILTExprPtr value;
  };
  struct Now {};
  struct Model {
    std::string label;
    ILTExprZPtr time;
  };
  struct UnOp {
    ILUnOp op;
    ILPtr arg;
  };
  struct BinOp {
    ILBinOp op;
    ILPtr left;
    ILPtr right;
  };
  struct LoopIf {
    ILPtr cond;
    ILPtr thenE;
    ILPtr elseE;
    TExpr window;
  };
  struct Payoff {
    ILTExprPtr time;
    Party from;
    Party to;
  };

  std::variant<If, FloatLit, NatLit, BoolLit, TExprVal, Now, Model, UnOp,
               BinOp, LoopIf, Payoff>
      node;
};

ILPtr mkIf(ILPtr c, ILPtr t, ILPtr e);
ILPtr mkFloat(double v);
ILPtr mkNat(std::uint64_t v);
ILPtr mkILBool(bool v);
ILPtr mkTExprVal(ILTExprPtr t);
ILPtr mkNow();
ILPtr mkModel(std::string label, ILTExprZPtr time);
ILPtr mkUnOp(ILUnOp op, ILPtr arg);
ILPtr mkBinOp(ILBinOp op, ILPtr l, ILPtr r);
ILPtr mkLoopIf(ILPtr c, ILPtr t, ILPtr e, TExpr window);
ILPtr mkPayoff(ILTExprPtr time, Party from, Party to);

bool ilEqual(const ILPtr& a, const ILPtr& b);

// Value domain of the payoff language.
using ILVal = std::variant<std::uint64_t, double, bool>;

double ilAsReal(const ILVal& v);
bool ilAsBool(const ILVal& v);

// Argument vector of the payoff semantics.
struct EvalArgs {
  const ExtEnv& env;
  const TEnv& tenv;
  std::uint64_t t0;  // accumulated shift
  std::uint64_t t;   // current time
  const Discount& disc;
  Party p1;
  Party p2;
};

ILVal ilSem(const ILPtr& il, const EvalArgs& args);

// Bilateral view: cashflows signed relative to one fixed party.
struct BilateralArgs {
  const ExtEnv& env;
  const TEnv& tenv;
  std::uint64_t t0;
  std::uint64_t t;
  const Discount& disc;
  Party party;
};

ILVal ilSemBilateral(const ILPtr& il, const BilateralArgs& args);

// Guard every payoff with `time < now`, allowing evaluation at later
// current times without recompiling.
ILPtr cutPayoff(const ILPtr& il);

// ilSem with t0 = 0 at current time t, projected to a real.
double evalAt(std::uint64_t t, const ILPtr& il, const ExtEnv& env,
              const TEnv& tenv, const Discount& disc, const Party& p1,
              const Party& p2);

}  // namespace cltk
