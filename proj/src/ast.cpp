#include "cltk/ast.hpp"

#include <stdexcept>

namespace cltk {

int opArity(Op op) {
  switch (op) {
    case Op::Not:
    case Op::Neg:
      return 1;
    case Op::Cond:
      return 3;
    default:
      return 2;
  }
}

const char* opName(Op op) {
  switch (op) {
    case Op::Add:
      return "add";
    case Op::Sub:
      return "sub";
    case Op::Mult:
      return "mult";
    case Op::Div:
      return "div";
    case Op::Lt:
      return "lt";
    case Op::Leq:
      return "leq";
    case Op::Eq:
      return "eq";
    case Op::And:
      return "and";
    case Op::Or:
      return "or";
    case Op::Not:
      return "not";
    case Op::Neg:
      return "neg";
    case Op::Cond:
      return "cond";
  }
  throw std::logic_error("unknown operator");
}

ExpPtr mkOp(Op op, std::vector<ExpPtr> args) {
  if (static_cast<int>(args.size()) != opArity(op))
    throw std::invalid_argument(std::string("arity mismatch for ") +
                                opName(op));
  return std::make_shared<Exp>(Exp{Exp::OpE{op, std::move(args)}});
}
ExpPtr mkObs(std::string label, std::int64_t offset) {
  return std::make_shared<Exp>(Exp{Exp::Obs{std::move(label), offset}});
}
ExpPtr mkReal(double v) { return std::make_shared<Exp>(Exp{Exp::RealLit{v}}); }
ExpPtr mkBool(bool v) { return std::make_shared<Exp>(Exp{Exp::BoolLit{v}}); }
ExpPtr mkVar(std::string name) {
  return std::make_shared<Exp>(Exp{Exp::VarE{std::move(name)}});
}
ExpPtr mkAcc(std::string binder, ExpPtr body, std::uint64_t days, ExpPtr init) {
  return std::make_shared<Exp>(
      Exp{Exp::Acc{std::move(binder), std::move(body), days, std::move(init)}});
}

bool expEqual(const ExpPtr& a, const ExpPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  struct Visitor {
    const Exp& other;
    bool operator()(const Exp::OpE& x) const {
      const auto& y = std::get<Exp::OpE>(other.node);
      if (x.op != y.op || x.args.size() != y.args.size()) return false;
      for (std::size_t i = 0; i < x.args.size(); ++i)
        if (!expEqual(x.args[i], y.args[i])) return false;
      return true;
    }
    bool operator()(const Exp::Obs& x) const {
      const auto& y = std::get<Exp::Obs>(other.node);
      return x.label == y.label && x.offset == y.offset;
    }
    bool operator()(const Exp::RealLit& x) const {
      return x.value == std::get<Exp::RealLit>(other.node).value;
    }
    bool operator()(const Exp::BoolLit& x) const {
      return x.value == std::get<Exp::BoolLit>(other.node).value;
    }
    bool operator()(const Exp::VarE& x) const {
      return x.name == std::get<Exp::VarE>(other.node).name;
    }
    bool operator()(const Exp::Acc& x) const {
      const auto& y = std::get<Exp::Acc>(other.node);
      return x.binder == y.binder && x.days == y.days &&
             expEqual(x.body, y.body) && expEqual(x.init, y.init);
    }
  };
  return std::visit(Visitor{*b}, a->node);
}

ContrPtr mkZero() { return std::make_shared<Contr>(Contr{Contr::Zero{}}); }
ContrPtr mkLet(std::string binder, ExpPtr bound, ContrPtr body) {
  return std::make_shared<Contr>(
      Contr{Contr::Let{std::move(binder), std::move(bound), std::move(body)}});
}
ContrPtr mkTransfer(Party from, Party to, Asset asset) {
  return std::make_shared<Contr>(
      Contr{Contr::Transfer{std::move(from), std::move(to), std::move(asset)}});
}
ContrPtr mkScale(ExpPtr factor, ContrPtr body) {
  return std::make_shared<Contr>(
      Contr{Contr::Scale{std::move(factor), std::move(body)}});
}
ContrPtr mkTranslate(TExpr shift, ContrPtr body) {
  return std::make_shared<Contr>(
      Contr{Contr::Translate{std::move(shift), std::move(body)}});
}
ContrPtr mkBoth(ContrPtr left, ContrPtr right) {
  return std::make_shared<Contr>(
      Contr{Contr::Both{std::move(left), std::move(right)}});
}
ContrPtr mkIfWithin(ExpPtr cond, TExpr window, ContrPtr thenC, ContrPtr elseC) {
  return std::make_shared<Contr>(Contr{Contr::IfWithin{
      std::move(cond), std::move(window), std::move(thenC), std::move(elseC)}});
}

bool contrEqual(const ContrPtr& a, const ContrPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  struct Visitor {
    const Contr& other;
    bool operator()(const Contr::Zero&) const { return true; }
    bool operator()(const Contr::Let& x) const {
      const auto& y = std::get<Contr::Let>(other.node);
      return x.binder == y.binder && expEqual(x.bound, y.bound) &&
             contrEqual(x.body, y.body);
    }
    bool operator()(const Contr::Transfer& x) const {
      const auto& y = std::get<Contr::Transfer>(other.node);
      return x.from == y.from && x.to == y.to && x.asset == y.asset;
    }
    bool operator()(const Contr::Scale& x) const {
      const auto& y = std::get<Contr::Scale>(other.node);
      return expEqual(x.factor, y.factor) && contrEqual(x.body, y.body);
    }
    bool operator()(const Contr::Translate& x) const {
      const auto& y = std::get<Contr::Translate>(other.node);
      return x.shift == y.shift && contrEqual(x.body, y.body);
    }
    bool operator()(const Contr::Both& x) const {
      const auto& y = std::get<Contr::Both>(other.node);
      return contrEqual(x.left, y.left) && contrEqual(x.right, y.right);
    }
    bool operator()(const Contr::IfWithin& x) const {
      const auto& y = std::get<Contr::IfWithin>(other.node);
      return expEqual(x.cond, y.cond) && x.window == y.window &&
             contrEqual(x.thenC, y.thenC) && contrEqual(x.elseC, y.elseC);
    }
  };
  return std::visit(Visitor{*b}, a->node);
}

}  // namespace cltk
