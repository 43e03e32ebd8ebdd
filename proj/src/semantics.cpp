#include "cltk/semantics.hpp"

#include <algorithm>

#include "cltk/errors.hpp"

namespace cltk {

const char* typeName(Type t) { return t == Type::Real ? "Real" : "Bool"; }

namespace {

[[noreturn]] void typeFail(const std::string& where, const std::string& what) {
  throw TypeError(where + ": " + what);
}

}  // namespace

Type typeCheckExp(const TypeCtx& ctx, const ExpPtr& e) {
  struct Visitor {
    const TypeCtx& ctx;
    Type operator()(const Exp::OpE& x) const {
      std::vector<Type> ts;
      ts.reserve(x.args.size());
      for (const auto& a : x.args) ts.push_back(typeCheckExp(ctx, a));
      switch (x.op) {
        case Op::Add:
        case Op::Sub:
        case Op::Mult:
        case Op::Div:
          if (ts[0] != Type::Real || ts[1] != Type::Real)
            typeFail(opName(x.op), "expects Real operands");
          return Type::Real;
        case Op::Lt:
        case Op::Leq:
        case Op::Eq:
          if (ts[0] != Type::Real || ts[1] != Type::Real)
            typeFail(opName(x.op), "expects Real operands");
          return Type::Bool;
        case Op::And:
        case Op::Or:
          if (ts[0] != Type::Bool || ts[1] != Type::Bool)
            typeFail(opName(x.op), "expects Bool operands");
          return Type::Bool;
        case Op::Not:
          if (ts[0] != Type::Bool) typeFail("not", "expects a Bool operand");
          return Type::Bool;
        case Op::Neg:
          if (ts[0] != Type::Real) typeFail("neg", "expects a Real operand");
          return Type::Real;
        case Op::Cond:
          if (ts[0] != Type::Bool) typeFail("cond", "scrutinee must be Bool");
          if (ts[1] != ts[2]) typeFail("cond", "branch type mismatch");
          return ts[1];
      }
      typeFail("op", "unknown operator");
    }
    Type operator()(const Exp::Obs& x) const { return ctx.labelKind(x.label); }
    Type operator()(const Exp::RealLit&) const { return Type::Real; }
    Type operator()(const Exp::BoolLit&) const { return Type::Bool; }
    Type operator()(const Exp::VarE& x) const {
      auto it = ctx.vars.find(x.name);
      if (it == ctx.vars.end())
        typeFail("var " + x.name, "unbound expression variable");
      return it->second;
    }
    Type operator()(const Exp::Acc& x) const {
      Type t0 = typeCheckExp(ctx, x.init);
      TypeCtx inner = ctx;
      inner.vars[x.binder] = t0;
      Type tb = typeCheckExp(inner, x.body);
      if (tb != t0) typeFail("acc", "body type differs from seed type");
      return t0;
    }
  };
  return std::visit(Visitor{ctx}, e->node);
}

void typeCheckContr(const TypeCtx& ctx, const ContrPtr& c) {
  struct Visitor {
    const TypeCtx& ctx;
    void operator()(const Contr::Zero&) const {}
    void operator()(const Contr::Let& x) const {
      Type t = typeCheckExp(ctx, x.bound);
      TypeCtx inner = ctx;
      inner.vars[x.binder] = t;
      typeCheckContr(inner, x.body);
    }
    void operator()(const Contr::Transfer& x) const {
      if (x.from.empty() || x.to.empty() || x.asset.empty())
        typeFail("transfer", "parties and asset must be nonempty");
    }
    void operator()(const Contr::Scale& x) const {
      if (typeCheckExp(ctx, x.factor) != Type::Real)
        typeFail("scale", "factor must be Real");
      typeCheckContr(ctx, x.body);
    }
    void operator()(const Contr::Translate& x) const {
      typeCheckContr(ctx, x.body);
    }
    void operator()(const Contr::Both& x) const {
      typeCheckContr(ctx, x.left);
      typeCheckContr(ctx, x.right);
    }
    void operator()(const Contr::IfWithin& x) const {
      if (typeCheckExp(ctx, x.cond) != Type::Bool)
        typeFail("if", "condition must be Bool");
      typeCheckContr(ctx, x.thenC);
      typeCheckContr(ctx, x.elseC);
    }
  };
  std::visit(Visitor{ctx}, c->node);
}

std::uint64_t tSem(const TExpr& t, const TEnv& tenv) {
  return t.isNum() ? t.num : tenv.lookup(t.var);
}

Value evalExp(const ExpPtr& e, VarEnv& vars, const ExtEnv& env) {
  struct Visitor {
    VarEnv& vars;
    const ExtEnv& env;
    Value operator()(const Exp::OpE& x) const {
      if (x.op == Op::Cond) {
        bool b = asBool(evalExp(x.args[0], vars, env));
        return evalExp(b ? x.args[1] : x.args[2], vars, env);
      }
      if (x.op == Op::And) {
        // Strict evaluation, as in the denotational semantics.
        bool a = asBool(evalExp(x.args[0], vars, env));
        bool b = asBool(evalExp(x.args[1], vars, env));
        return a && b;
      }
      if (x.op == Op::Or) {
        bool a = asBool(evalExp(x.args[0], vars, env));
        bool b = asBool(evalExp(x.args[1], vars, env));
        return a || b;
      }
      if (x.op == Op::Not) return !asBool(evalExp(x.args[0], vars, env));
      if (x.op == Op::Neg) return -asReal(evalExp(x.args[0], vars, env));
      double a = asReal(evalExp(x.args[0], vars, env));
      double b = asReal(evalExp(x.args[1], vars, env));
      switch (x.op) {
        case Op::Add:
          return a + b;
        case Op::Sub:
          return a - b;
        case Op::Mult:
          return a * b;
        case Op::Div:
          if (b == 0.0) throw EvalError("division by zero");
          return a / b;
        case Op::Lt:
          return a < b;
        case Op::Leq:
          return a <= b;
        case Op::Eq:
          return a == b;
        default:
          throw TypeError("unexpected operator");
      }
    }
    Value operator()(const Exp::Obs& x) const {
      return env.lookup(x.label, x.offset);
    }
    Value operator()(const Exp::RealLit& x) const { return x.value; }
    Value operator()(const Exp::BoolLit& x) const { return x.value; }
    Value operator()(const Exp::VarE& x) const {
      const Value* v = vars.find(x.name);
      if (!v) throw UnboundVar(x.name);
      return *v;
    }
    Value operator()(const Exp::Acc& x) const {
      if (x.days == 0) return evalExp(x.init, vars, env);
      ExpPtr prev = mkAcc(x.binder, x.body, x.days - 1, x.init);
      Value acc = evalExp(prev, vars, env.shifted(-1));
      vars.push(x.binder, acc);
      Value out = evalExp(x.body, vars, env);
      vars.pop();
      return out;
    }
  };
  return std::visit(Visitor{vars, env}, e->node);
}

Trace contractTrace(const ContrPtr& c, VarEnv& vars, const ExtEnv& env,
                    const TEnv& tenv) {
  struct Visitor {
    VarEnv& vars;
    const ExtEnv& env;
    const TEnv& tenv;
    Trace operator()(const Contr::Zero&) const { return Trace{}; }
    Trace operator()(const Contr::Let& x) const {
      Value v = evalExp(x.bound, vars, env);
      vars.push(x.binder, v);
      Trace tr = contractTrace(x.body, vars, env, tenv);
      vars.pop();
      return tr;
    }
    Trace operator()(const Contr::Transfer& x) const {
      Trace tr;
      tr.day(0).add(x.from, x.to, x.asset, 1.0);
      return tr;
    }
    Trace operator()(const Contr::Scale& x) const {
      double f = asReal(evalExp(x.factor, vars, env));
      return contractTrace(x.body, vars, env, tenv).scaled(f);
    }
    Trace operator()(const Contr::Translate& x) const {
      std::uint64_t n = tSem(x.shift, tenv);
      return delay(n, contractTrace(x.body, vars, env.shifted(n), tenv));
    }
    Trace operator()(const Contr::Both& x) const {
      Trace tr = contractTrace(x.left, vars, env, tenv);
      tr += contractTrace(x.right, vars, env, tenv);
      return tr;
    }
    Trace operator()(const Contr::IfWithin& x) const {
      std::uint64_t window = tSem(x.window, tenv);
      for (std::uint64_t i = 0;; ++i) {
        ExtEnv shifted = env.shifted(static_cast<std::int64_t>(i));
        if (asBool(evalExp(x.cond, vars, shifted)))
          return delay(i, contractTrace(x.thenC, vars, shifted, tenv));
        if (i == window)
          return delay(i, contractTrace(x.elseC, vars, shifted, tenv));
      }
    }
  };
  return std::visit(Visitor{vars, env, tenv}, c->node);
}

Trace contractTrace(const ContrPtr& c, const ExtEnv& env, const TEnv& tenv) {
  VarEnv vars;
  return contractTrace(c, vars, env, tenv);
}

ContrPtr instantiate(const ContrPtr& c, const TEnv& tenv) {
  struct Visitor {
    const TEnv& tenv;
    ContrPtr operator()(const Contr::Zero&) const { return mkZero(); }
    ContrPtr operator()(const Contr::Let& x) const {
      return mkLet(x.binder, x.bound, instantiate(x.body, tenv));
    }
    ContrPtr operator()(const Contr::Transfer& x) const {
      return mkTransfer(x.from, x.to, x.asset);
    }
    ContrPtr operator()(const Contr::Scale& x) const {
      return mkScale(x.factor, instantiate(x.body, tenv));
    }
    ContrPtr operator()(const Contr::Translate& x) const {
      return mkTranslate(TExpr::number(tSem(x.shift, tenv)),
                         instantiate(x.body, tenv));
    }
    ContrPtr operator()(const Contr::Both& x) const {
      return mkBoth(instantiate(x.left, tenv), instantiate(x.right, tenv));
    }
    ContrPtr operator()(const Contr::IfWithin& x) const {
      return mkIfWithin(x.cond, TExpr::number(tSem(x.window, tenv)),
                        instantiate(x.thenC, tenv),
                        instantiate(x.elseC, tenv));
    }
  };
  return std::visit(Visitor{tenv}, c->node);
}

bool isTemplateClosed(const ContrPtr& c) {
  struct Visitor {
    bool operator()(const Contr::Zero&) const { return true; }
    bool operator()(const Contr::Let& x) const {
      return isTemplateClosed(x.body);
    }
    bool operator()(const Contr::Transfer&) const { return true; }
    bool operator()(const Contr::Scale& x) const {
      return isTemplateClosed(x.body);
    }
    bool operator()(const Contr::Translate& x) const {
      return x.shift.isNum() && isTemplateClosed(x.body);
    }
    bool operator()(const Contr::Both& x) const {
      return isTemplateClosed(x.left) && isTemplateClosed(x.right);
    }
    bool operator()(const Contr::IfWithin& x) const {
      return x.window.isNum() && isTemplateClosed(x.thenC) &&
             isTemplateClosed(x.elseC);
    }
  };
  return std::visit(Visitor{}, c->node);
}

std::uint64_t horizon(const ContrPtr& c, const TEnv& tenv) {
  struct Visitor {
    const TEnv& tenv;
    std::uint64_t operator()(const Contr::Zero&) const { return 0; }
    std::uint64_t operator()(const Contr::Let& x) const {
      return horizon(x.body, tenv);
    }
    std::uint64_t operator()(const Contr::Transfer&) const { return 1; }
    std::uint64_t operator()(const Contr::Scale& x) const {
      return horizon(x.body, tenv);
    }
    std::uint64_t operator()(const Contr::Translate& x) const {
      std::uint64_t h = horizon(x.body, tenv);
      return h == 0 ? 0 : tSem(x.shift, tenv) + h;
    }
    std::uint64_t operator()(const Contr::Both& x) const {
      return std::max(horizon(x.left, tenv), horizon(x.right, tenv));
    }
    std::uint64_t operator()(const Contr::IfWithin& x) const {
      std::uint64_t h =
          std::max(horizon(x.thenC, tenv), horizon(x.elseC, tenv));
      return h == 0 ? 0 : tSem(x.window, tenv) + h;
    }
  };
  return std::visit(Visitor{tenv}, c->node);
}

namespace {

bool isZeroContr(const ContrPtr& c) {
  return std::holds_alternative<Contr::Zero>(c->node);
}

// Semantics-preserving node cleanup so fully paid contracts reduce towards
// zero.
ContrPtr smartScale(ExpPtr e, ContrPtr body) {
  if (isZeroContr(body)) return body;
  return mkScale(std::move(e), std::move(body));
}
ContrPtr smartBoth(ContrPtr l, ContrPtr r) {
  if (isZeroContr(l)) return r;
  if (isZeroContr(r)) return l;
  return mkBoth(std::move(l), std::move(r));
}
ContrPtr smartTranslate(TExpr t, ContrPtr body) {
  if (isZeroContr(body)) return body;
  return mkTranslate(std::move(t), std::move(body));
}

ExpPtr substExp(const ExpPtr& e, const std::string& name, const ExpPtr& val) {
  struct Visitor {
    const std::string& name;
    const ExpPtr& val;
    ExpPtr operator()(const Exp::OpE& x) const {
      std::vector<ExpPtr> args;
      args.reserve(x.args.size());
      for (const auto& a : x.args) args.push_back(substExp(a, name, val));
      return mkOp(x.op, std::move(args));
    }
    ExpPtr operator()(const Exp::Obs& x) const {
      return mkObs(x.label, x.offset);
    }
    ExpPtr operator()(const Exp::RealLit& x) const { return mkReal(x.value); }
    ExpPtr operator()(const Exp::BoolLit& x) const { return mkBool(x.value); }
    ExpPtr operator()(const Exp::VarE& x) const {
      return x.name == name ? val : mkVar(x.name);
    }
    ExpPtr operator()(const Exp::Acc& x) const {
      if (x.binder == name)
        return mkAcc(x.binder, x.body, x.days, substExp(x.init, name, val));
      return mkAcc(x.binder, substExp(x.body, name, val), x.days,
                   substExp(x.init, name, val));
    }
  };
  return std::visit(Visitor{name, val}, e->node);
}

ContrPtr substContr(const ContrPtr& c, const std::string& name,
                    const ExpPtr& val) {
  struct Visitor {
    const std::string& name;
    const ExpPtr& val;
    ContrPtr operator()(const Contr::Zero&) const { return mkZero(); }
    ContrPtr operator()(const Contr::Let& x) const {
      ExpPtr bound = substExp(x.bound, name, val);
      if (x.binder == name) return mkLet(x.binder, bound, x.body);
      return mkLet(x.binder, bound, substContr(x.body, name, val));
    }
    ContrPtr operator()(const Contr::Transfer& x) const {
      return mkTransfer(x.from, x.to, x.asset);
    }
    ContrPtr operator()(const Contr::Scale& x) const {
      return mkScale(substExp(x.factor, name, val),
                     substContr(x.body, name, val));
    }
    ContrPtr operator()(const Contr::Translate& x) const {
      return mkTranslate(x.shift, substContr(x.body, name, val));
    }
    ContrPtr operator()(const Contr::Both& x) const {
      return mkBoth(substContr(x.left, name, val),
                    substContr(x.right, name, val));
    }
    ContrPtr operator()(const Contr::IfWithin& x) const {
      return mkIfWithin(substExp(x.cond, name, val), x.window,
                        substContr(x.thenC, name, val),
                        substContr(x.elseC, name, val));
    }
  };
  return std::visit(Visitor{name, val}, c->node);
}

}  // namespace

std::pair<ContrPtr, Trans> reduceStep(const ContrPtr& c, const ExtEnv& env) {
  if (!isTemplateClosed(c))
    throw EvalError("reduceStep requires a template-closed contract");
  struct Visitor {
    const ExtEnv& env;
    std::pair<ContrPtr, Trans> operator()(const Contr::Zero&) const {
      return {mkZero(), Trans{}};
    }
    std::pair<ContrPtr, Trans> operator()(const Contr::Let& x) const {
      // Freeze the binding at day 0 and substitute it, so the advanced
      // contract is self-contained.
      VarEnv vars;
      Value v = evalExp(x.bound, vars, env);
      ExpPtr lit = isReal(v) ? mkReal(asReal(v)) : mkBool(asBool(v));
      ContrPtr body = substContr(x.body, x.binder, lit);
      return reduceStep(body, env);
    }
    std::pair<ContrPtr, Trans> operator()(const Contr::Transfer& x) const {
      Trans t;
      t.add(x.from, x.to, x.asset, 1.0);
      return {mkZero(), t};
    }
    std::pair<ContrPtr, Trans> operator()(const Contr::Scale& x) const {
      VarEnv vars;
      double f = asReal(evalExp(x.factor, vars, env));
      auto [c2, t] = reduceStep(x.body, env);
      return {smartScale(mkReal(f), c2), t.scaled(f)};
    }
    std::pair<ContrPtr, Trans> operator()(const Contr::Translate& x) const {
      std::uint64_t n = x.shift.num;
      if (n == 0) {
        ContrPtr body = x.body;
        return reduceStep(body, env);
      }
      return {smartTranslate(TExpr::number(n - 1), x.body), Trans{}};
    }
    std::pair<ContrPtr, Trans> operator()(const Contr::Both& x) const {
      auto [l, tl] = reduceStep(x.left, env);
      auto [r, trr] = reduceStep(x.right, env);
      tl += trr;
      return {smartBoth(l, r), tl};
    }
    std::pair<ContrPtr, Trans> operator()(const Contr::IfWithin& x) const {
      VarEnv vars;
      bool b = asBool(evalExp(x.cond, vars, env));
      if (b) {
        ContrPtr t = x.thenC;
        return reduceStep(t, env);
      }
      if (x.window.num == 0) {
        ContrPtr e = x.elseC;
        return reduceStep(e, env);
      }
      return {mkIfWithin(x.cond, TExpr::number(x.window.num - 1), x.thenC,
                         x.elseC),
              Trans{}};
    }
  };

  // A Let whose body needs day-0 evaluation must see the binding; handle it
  // via the visitor above, which substitutes evaluated bindings.
  return std::visit(Visitor{env}, c->node);
}

std::pair<ContrPtr, std::vector<Trans>> advance(const ContrPtr& c,
                                                const ExtEnv& env,
                                                std::uint64_t n) {
  ContrPtr cur = c;
  std::vector<Trans> emitted;
  emitted.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto [next, t] = reduceStep(cur, env.shifted(static_cast<std::int64_t>(i)));
    cur = next;
    emitted.push_back(std::move(t));
  }
  return {cur, emitted};
}

}  // namespace cltk
