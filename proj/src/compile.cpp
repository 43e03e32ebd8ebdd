#include "cltk/compile.hpp"

#include <atomic>

namespace cltk {

namespace {
std::atomic<std::uint64_t> gCompileCount{0};
}

std::optional<std::uint64_t> iltAsNum(const ILTExprPtr& t) {
  if (const auto* p = std::get_if<ILTExpr::Tplus>(&t->node)) {
    auto a = iltAsNum(p->left);
    auto b = iltAsNum(p->right);
    if (a && b) return *a + *b;
    return std::nullopt;
  }
  const TExpr& te = std::get<TExpr>(t->node);
  if (te.isNum()) return te.num;
  return std::nullopt;
}

std::optional<std::int64_t> iltzAsNum(const ILTExprZPtr& t) {
  if (const auto* p = std::get_if<ILTExprZ::TplusZ>(&t->node)) {
    auto a = iltzAsNum(p->left);
    auto b = iltzAsNum(p->right);
    if (a && b) return *a + *b;
    return std::nullopt;
  }
  if (const auto* p = std::get_if<ILTExprPtr>(&t->node)) {
    auto n = iltAsNum(*p);
    if (n) return static_cast<std::int64_t>(*n);
    return std::nullopt;
  }
  return std::get<ILTExprZ::TnumZ>(t->node).value;
}

ILTExprZPtr tplusSmart(const ILTExprZPtr& a, const ILTExprZPtr& b) {
  auto na = iltzAsNum(a);
  auto nb = iltzAsNum(b);
  if (na && nb) return mkTnumZ(*na + *nb);
  if (na && *na == 0) return b;
  if (nb && *nb == 0) return a;
  return mkTplusZ(a, b);
}

ILTExprPtr tplusSmartT(const ILTExprPtr& a, const ILTExprPtr& b) {
  auto na = iltAsNum(a);
  auto nb = iltAsNum(b);
  if (na && nb) return mkTexpr(TExpr::number(*na + *nb));
  if (na && *na == 0) return b;
  if (nb && *nb == 0) return a;
  return mkTplus(a, b);
}

namespace {

ILBinOp toILBinOp(Op op) {
  switch (op) {
    case Op::Add:
      return ILBinOp::Add;
    case Op::Sub:
      return ILBinOp::Sub;
    case Op::Mult:
      return ILBinOp::Mult;
    case Op::Div:
      return ILBinOp::Div;
    case Op::Lt:
      return ILBinOp::Lt;
    case Op::Leq:
      return ILBinOp::Leq;
    case Op::Eq:
      return ILBinOp::Eq;
    case Op::And:
      return ILBinOp::And;
    case Op::Or:
      return ILBinOp::Or;
    default:
      throw std::logic_error("not a binary operator");
  }
}

}  // namespace

ILPtr fromExp(const ExpPtr& e, const ILTExprPtr& t0) {
  struct Visitor {
    const ILTExprPtr& t0;
    ILPtr operator()(const Exp::OpE& x) const {
      switch (x.op) {
        case Op::Cond:
          return mkIf(fromExp(x.args[0], t0), fromExp(x.args[1], t0),
                      fromExp(x.args[2], t0));
        case Op::Not:
          return mkUnOp(ILUnOp::Not, fromExp(x.args[0], t0));
        case Op::Neg:
          return mkUnOp(ILUnOp::Neg, fromExp(x.args[0], t0));
        default:
          return mkBinOp(toILBinOp(x.op), fromExp(x.args[0], t0),
                         fromExp(x.args[1], t0));
      }
    }
    ILPtr operator()(const Exp::Obs& x) const {
      return mkModel(x.label, tplusSmart(mkTexprZ(t0), mkTnumZ(x.offset)));
    }
    ILPtr operator()(const Exp::RealLit& x) const { return mkFloat(x.value); }
    ILPtr operator()(const Exp::BoolLit& x) const { return mkILBool(x.value); }
    ILPtr operator()(const Exp::VarE& x) const {
      throw CompileError("VarE", "expression variable " + x.name);
    }
    ILPtr operator()(const Exp::Acc&) const {
      throw CompileError("Acc", "accumulator expression");
    }
  };
  return std::visit(Visitor{t0}, e->node);
}

ILPtr fromContr(const ContrPtr& c, const ILTExprPtr& t0) {
  struct Visitor {
    const ILTExprPtr& t0;
    ILPtr operator()(const Contr::Zero&) const { return mkFloat(0.0); }
    ILPtr operator()(const Contr::Let&) const {
      throw CompileError("Let", "let binding");
    }
    ILPtr operator()(const Contr::Transfer& x) const {
      return mkPayoff(t0, x.from, x.to);
    }
    ILPtr operator()(const Contr::Scale& x) const {
      return mkBinOp(ILBinOp::Mult, fromExp(x.factor, t0),
                     fromContr(x.body, t0));
    }
    ILPtr operator()(const Contr::Translate& x) const {
      return fromContr(x.body, tplusSmartT(t0, mkTexpr(x.shift)));
    }
    ILPtr operator()(const Contr::Both& x) const {
      return mkBinOp(ILBinOp::Add, fromContr(x.left, t0),
                     fromContr(x.right, t0));
    }
    ILPtr operator()(const Contr::IfWithin& x) const {
      return mkLoopIf(fromExp(x.cond, t0), fromContr(x.thenC, t0),
                      fromContr(x.elseC, t0), x.window);
    }
  };
  return std::visit(Visitor{t0}, c->node);
}

ILPtr compileContract(const ContrPtr& c) {
  gCompileCount.fetch_add(1, std::memory_order_relaxed);
  return fromContr(c, mkTexpr(TExpr::number(0)));
}

std::uint64_t compileCount() {
  return gCompileCount.load(std::memory_order_relaxed);
}
void resetCompileCount() { gCompileCount.store(0, std::memory_order_relaxed); }

}  // namespace cltk
