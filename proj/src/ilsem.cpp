#include "cltk/il.hpp"

#include <stdexcept>

#include "cltk/errors.hpp"
#include "cltk/semantics.hpp"

namespace cltk {

ILTExprPtr mkTexpr(TExpr t) {
  return std::make_shared<ILTExpr>(ILTExpr{std::move(t)});
}
ILTExprPtr mkTplus(ILTExprPtr a, ILTExprPtr b) {
  return std::make_shared<ILTExpr>(
      ILTExpr{ILTExpr::Tplus{std::move(a), std::move(b)}});
}

bool iltEqual(const ILTExprPtr& a, const ILTExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  if (const auto* p = std::get_if<ILTExpr::Tplus>(&a->node)) {
    const auto& q = std::get<ILTExpr::Tplus>(b->node);
    return iltEqual(p->left, q.left) && iltEqual(p->right, q.right);
  }
  return std::get<TExpr>(a->node) == std::get<TExpr>(b->node);
}

ILTExprZPtr mkTexprZ(ILTExprPtr t) {
  return std::make_shared<ILTExprZ>(ILTExprZ{std::move(t)});
}
ILTExprZPtr mkTplusZ(ILTExprZPtr a, ILTExprZPtr b) {
  return std::make_shared<ILTExprZ>(
      ILTExprZ{ILTExprZ::TplusZ{std::move(a), std::move(b)}});
}
ILTExprZPtr mkTnumZ(std::int64_t z) {
  return std::make_shared<ILTExprZ>(ILTExprZ{ILTExprZ::TnumZ{z}});
}

bool iltzEqual(const ILTExprZPtr& a, const ILTExprZPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  if (const auto* p = std::get_if<ILTExprZ::TplusZ>(&a->node)) {
    const auto& q = std::get<ILTExprZ::TplusZ>(b->node);
    return iltzEqual(p->left, q.left) && iltzEqual(p->right, q.right);
  }
  if (const auto* p = std::get_if<ILTExprPtr>(&a->node))
    return iltEqual(*p, std::get<ILTExprPtr>(b->node));
  return std::get<ILTExprZ::TnumZ>(a->node).value ==
         std::get<ILTExprZ::TnumZ>(b->node).value;
}

std::uint64_t tExprSem(const ILTExprPtr& t, const TEnv& tenv) {
  if (const auto* p = std::get_if<ILTExpr::Tplus>(&t->node))
    return tExprSem(p->left, tenv) + tExprSem(p->right, tenv);
  return tSem(std::get<TExpr>(t->node), tenv);
}

std::int64_t tExprZSem(const ILTExprZPtr& t, const TEnv& tenv) {
  if (const auto* p = std::get_if<ILTExprZ::TplusZ>(&t->node))
    return tExprZSem(p->left, tenv) + tExprZSem(p->right, tenv);
  if (const auto* p = std::get_if<ILTExprPtr>(&t->node))
    return static_cast<std::int64_t>(tExprSem(*p, tenv));
  return std::get<ILTExprZ::TnumZ>(t->node).value;
}

const char* ilUnOpName(ILUnOp op) { return op == ILUnOp::Neg ? "neg" : "not"; }

const char* ilBinOpName(ILBinOp op) {
  switch (op) {
    case ILBinOp::Add:
      return "add";
    case ILBinOp::Sub:
      return "sub";
    case ILBinOp::Mult:
      return "mult";
    case ILBinOp::Div:
      return "div";
    case ILBinOp::Lt:
      return "lt";
    case ILBinOp::Leq:
      return "leq";
    case ILBinOp::Eq:
      return "eq";
    case ILBinOp::And:
      return "and";
    case ILBinOp::Or:
      return "or";
  }
  throw std::logic_error("unknown IL operator");
}

ILPtr mkIf(ILPtr c, ILPtr t, ILPtr e) {
  return std::make_shared<ILExpr>(
      ILExpr{ILExpr::If{std::move(c), std::move(t), std::move(e)}});
}
ILPtr mkFloat(double v) {
  return std::make_shared<ILExpr>(ILExpr{ILExpr::FloatLit{v}});
}
ILPtr mkNat(std::uint64_t v) {
  return std::make_shared<ILExpr>(ILExpr{ILExpr::NatLit{v}});
}
ILPtr mkILBool(bool v) {
  return std::make_shared<ILExpr>(ILExpr{ILExpr::BoolLit{v}});
}
ILPtr mkTExprVal(ILTExprPtr t) {
  return std::make_shared<ILExpr>(ILExpr{ILExpr::TExprVal{std::move(t)}});
}
ILPtr mkNow() { return std::make_shared<ILExpr>(ILExpr{ILExpr::Now{}}); }
ILPtr mkModel(std::string label, ILTExprZPtr time) {
  return std::make_shared<ILExpr>(
      ILExpr{ILExpr::Model{std::move(label), std::move(time)}});
}
ILPtr mkUnOp(ILUnOp op, ILPtr arg) {
  return std::make_shared<ILExpr>(ILExpr{ILExpr::UnOp{op, std::move(arg)}});
}
ILPtr mkBinOp(ILBinOp op, ILPtr l, ILPtr r) {
  return std::make_shared<ILExpr>(
      ILExpr{ILExpr::BinOp{op, std::move(l), std::move(r)}});
}
ILPtr mkLoopIf(ILPtr c, ILPtr t, ILPtr e, TExpr window) {
  return std::make_shared<ILExpr>(ILExpr{
      ILExpr::LoopIf{std::move(c), std::move(t), std::move(e), std::move(window)}});
}
ILPtr mkPayoff(ILTExprPtr time, Party from, Party to) {
  return std::make_shared<ILExpr>(
      ILExpr{ILExpr::Payoff{std::move(time), std::move(from), std::move(to)}});
}

bool ilEqual(const ILPtr& a, const ILPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  struct Visitor {
    const ILExpr& other;
    bool operator()(const ILExpr::If& x) const {
      const auto& y = std::get<ILExpr::If>(other.node);
      return ilEqual(x.cond, y.cond) && ilEqual(x.thenE, y.thenE) &&
             ilEqual(x.elseE, y.elseE);
    }
    bool operator()(const ILExpr::FloatLit& x) const {
      return x.value == std::get<ILExpr::FloatLit>(other.node).value;
    }
    bool operator()(const ILExpr::NatLit& x) const {
      return x.value == std::get<ILExpr::NatLit>(other.node).value;
    }
    bool operator()(const ILExpr::BoolLit& x) const {
      return x.value == std::get<ILExpr::BoolLit>(other.node).value;
    }
    bool operator()(const ILExpr::TExprVal& x) const {
      return iltEqual(x.value, std::get<ILExpr::TExprVal>(other.node).value);
    }
    bool operator()(const ILExpr::Now&) const { return true; }
    bool operator()(const ILExpr::Model& x) const {
      const auto& y = std::get<ILExpr::Model>(other.node);
      return x.label == y.label && iltzEqual(x.time, y.time);
    }
    bool operator()(const ILExpr::UnOp& x) const {
      const auto& y = std::get<ILExpr::UnOp>(other.node);
      return x.op == y.op && ilEqual(x.arg, y.arg);
    }
    bool operator()(const ILExpr::BinOp& x) const {
      const auto& y = std::get<ILExpr::BinOp>(other.node);
      return x.op == y.op && ilEqual(x.left, y.left) && ilEqual(x.right, y.right);
    }
    bool operator()(const ILExpr::LoopIf& x) const {
      const auto& y = std::get<ILExpr::LoopIf>(other.node);
      return x.window == y.window && ilEqual(x.cond, y.cond) &&
             ilEqual(x.thenE, y.thenE) && ilEqual(x.elseE, y.elseE);
    }
    bool operator()(const ILExpr::Payoff& x) const {
      const auto& y = std::get<ILExpr::Payoff>(other.node);
      return x.from == y.from && x.to == y.to && iltEqual(x.time, y.time);
    }
  };
  return std::visit(Visitor{*b}, a->node);
}

double ilAsReal(const ILVal& v) {
  if (const auto* p = std::get_if<double>(&v)) return *p;
  throw TypeError("payoff expression: expected a Real value");
}
bool ilAsBool(const ILVal& v) {
  if (const auto* p = std::get_if<bool>(&v)) return *p;
  throw TypeError("payoff expression: expected a Bool value");
}

namespace {

ILVal applyUnOp(ILUnOp op, const ILVal& v) {
  if (op == ILUnOp::Neg) return -ilAsReal(v);
  return !ilAsBool(v);
}

ILVal applyBinOp(ILBinOp op, const ILVal& a, const ILVal& b) {
  // Naturals compare with naturals (cutPayoff guards), reals with reals.
  auto bothNat = [&]() {
    return std::holds_alternative<std::uint64_t>(a) &&
           std::holds_alternative<std::uint64_t>(b);
  };
  switch (op) {
    case ILBinOp::Add:
      if (bothNat())
        return std::get<std::uint64_t>(a) + std::get<std::uint64_t>(b);
      return ilAsReal(a) + ilAsReal(b);
    case ILBinOp::Sub:
      return ilAsReal(a) - ilAsReal(b);
    case ILBinOp::Mult:
      return ilAsReal(a) * ilAsReal(b);
    case ILBinOp::Div: {
      double d = ilAsReal(b);
      if (d == 0.0) throw EvalError("payoff expression: division by zero");
      return ilAsReal(a) / d;
    }
    case ILBinOp::Lt:
      if (bothNat())
        return std::get<std::uint64_t>(a) < std::get<std::uint64_t>(b);
      return ilAsReal(a) < ilAsReal(b);
    case ILBinOp::Leq:
      if (bothNat())
        return std::get<std::uint64_t>(a) <= std::get<std::uint64_t>(b);
      return ilAsReal(a) <= ilAsReal(b);
    case ILBinOp::Eq:
      if (bothNat())
        return std::get<std::uint64_t>(a) == std::get<std::uint64_t>(b);
      return ilAsReal(a) == ilAsReal(b);
    case ILBinOp::And:
      return ilAsBool(a) && ilAsBool(b);
    case ILBinOp::Or:
      return ilAsBool(a) || ilAsBool(b);
  }
  throw std::logic_error("unknown IL operator");
}

// Shared evaluator; the payoff case is the only difference between the
// two-party and the bilateral semantics.
template <typename PayoffFn>
ILVal evalIL(const ILPtr& il, const ExtEnv& env, const TEnv& tenv,
             std::uint64_t t0, std::uint64_t t, const Discount& disc,
             const PayoffFn& payoffCase) {
  struct Visitor {
    const ExtEnv& env;
    const TEnv& tenv;
    std::uint64_t t0;
    std::uint64_t t;
    const Discount& disc;
    const PayoffFn& payoffCase;

    ILVal eval(const ILPtr& e, std::uint64_t t0v) const {
      Visitor v{env, tenv, t0v, t, disc, payoffCase};
      return std::visit(v, e->node);
    }

    ILVal operator()(const ILExpr::If& x) const {
      return ilAsBool(eval(x.cond, t0)) ? eval(x.thenE, t0)
                                        : eval(x.elseE, t0);
    }
    ILVal operator()(const ILExpr::FloatLit& x) const { return x.value; }
    ILVal operator()(const ILExpr::NatLit& x) const { return x.value; }
    ILVal operator()(const ILExpr::BoolLit& x) const { return x.value; }
    ILVal operator()(const ILExpr::TExprVal& x) const {
      return tExprSem(x.value, tenv) + t0;
    }
    ILVal operator()(const ILExpr::Now&) const { return t; }
    ILVal operator()(const ILExpr::Model& x) const {
      std::int64_t day =
          tExprZSem(x.time, tenv) + static_cast<std::int64_t>(t0);
      Value v = env.lookup(x.label, day);
      if (isReal(v)) return asReal(v);
      return asBool(v);
    }
    ILVal operator()(const ILExpr::UnOp& x) const {
      return applyUnOp(x.op, eval(x.arg, t0));
    }
    ILVal operator()(const ILExpr::BinOp& x) const {
      ILVal a = eval(x.left, t0);
      ILVal b = eval(x.right, t0);
      return applyBinOp(x.op, a, b);
    }
    ILVal operator()(const ILExpr::LoopIf& x) const {
      std::uint64_t n = tSem(x.window, tenv);
      std::uint64_t cur = t0;
      for (;; --n, ++cur) {
        if (ilAsBool(eval(x.cond, cur))) return eval(x.thenE, cur);
        if (n == 0) return eval(x.elseE, cur);
      }
    }
    ILVal operator()(const ILExpr::Payoff& x) const {
      return payoffCase(x, t0);
    }
  };
  Visitor v{env, tenv, t0, t, disc, payoffCase};
  return std::visit(v, il->node);
}

}  // namespace

ILVal ilSem(const ILPtr& il, const EvalArgs& args) {
  auto payoffCase = [&](const ILExpr::Payoff& x, std::uint64_t t0) -> ILVal {
    // Discounting at the absolute time, mirroring the Model shift
    // convention.
    std::uint64_t day = tExprSem(x.time, args.tenv) + t0;
    if (x.from == args.p1 && x.to == args.p2) return args.disc(day);
    if (x.from == args.p2 && x.to == args.p1) return -args.disc(day);
    return 0.0;
  };
  return evalIL(il, args.env, args.tenv, args.t0, args.t, args.disc,
                payoffCase);
}

ILVal ilSemBilateral(const ILPtr& il, const BilateralArgs& args) {
  auto payoffCase = [&](const ILExpr::Payoff& x, std::uint64_t t0) -> ILVal {
    std::uint64_t day = tExprSem(x.time, args.tenv) + t0;
    if (x.to == args.party) return args.disc(day);
    if (x.from == args.party) return -args.disc(day);
    return 0.0;
  };
  return evalIL(il, args.env, args.tenv, args.t0, args.t, args.disc,
                payoffCase);
}

ILPtr cutPayoff(const ILPtr& il) {
  struct Visitor {
    ILPtr operator()(const ILExpr::If& x) const {
      return mkIf(cutPayoff(x.cond), cutPayoff(x.thenE), cutPayoff(x.elseE));
    }
    ILPtr operator()(const ILExpr::FloatLit& x) const {
      return mkFloat(x.value);
    }
    ILPtr operator()(const ILExpr::NatLit& x) const { return mkNat(x.value); }
    ILPtr operator()(const ILExpr::BoolLit& x) const {
      return mkILBool(x.value);
    }
    ILPtr operator()(const ILExpr::TExprVal& x) const {
      return mkTExprVal(x.value);
    }
    ILPtr operator()(const ILExpr::Now&) const { return mkNow(); }
    ILPtr operator()(const ILExpr::Model& x) const {
      return mkModel(x.label, x.time);
    }
    ILPtr operator()(const ILExpr::UnOp& x) const {
      return mkUnOp(x.op, cutPayoff(x.arg));
    }
    ILPtr operator()(const ILExpr::BinOp& x) const {
      return mkBinOp(x.op, cutPayoff(x.left), cutPayoff(x.right));
    }
    ILPtr operator()(const ILExpr::LoopIf& x) const {
      return mkLoopIf(cutPayoff(x.cond), cutPayoff(x.thenE),
                      cutPayoff(x.elseE), x.window);
    }
    ILPtr operator()(const ILExpr::Payoff& x) const {
      ILPtr self = mkPayoff(x.time, x.from, x.to);
      return mkIf(mkBinOp(ILBinOp::Lt, mkTExprVal(x.time), mkNow()),
                  mkFloat(0.0), self);
    }
  };
  return std::visit(Visitor{}, il->node);
}

double evalAt(std::uint64_t t, const ILPtr& il, const ExtEnv& env,
              const TEnv& tenv, const Discount& disc, const Party& p1,
              const Party& p2) {
  EvalArgs args{env, tenv, 0, t, disc, p1, p2};
  ILVal v = ilSem(il, args);
  if (const auto* p = std::get_if<double>(&v)) return *p;
  throw EvalError("payoff expression did not evaluate to a real");
}

}  // namespace cltk
