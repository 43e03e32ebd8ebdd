#include "cltk/printer.hpp"

#include <nlohmann/json.hpp>

namespace cltk {

std::string formatReal(double v) {
  std::string s = nlohmann::json(v).dump();
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string printTExpr(const TExpr& t) {
  return t.isNum() ? std::to_string(t.num) : t.var;
}

namespace {

// Precedence levels, loosest first: or, and, comparison, additive,
// multiplicative, unary, atom.
enum Prec { kOr = 0, kAnd, kCmp, kAdd, kMul, kUnary, kAtom };

std::string printExpPrec(const ExpPtr& e, int prec);

std::string binInfix(const Exp::OpE& x, const char* sym, int level) {
  return printExpPrec(x.args[0], level) + " " + sym + " " +
         printExpPrec(x.args[1], level + 1);
}

std::string printExpPrec(const ExpPtr& e, int prec) {
  struct Visitor {
    int prec;
    std::string wrap(int level, std::string s) const {
      if (level < prec) return "(" + s + ")";
      return s;
    }
    std::string operator()(const Exp::OpE& x) const {
      switch (x.op) {
        case Op::Or:
          return wrap(kOr, binInfix(x, "|", kOr));
        case Op::And:
          return wrap(kAnd, binInfix(x, "&", kAnd));
        case Op::Lt:
          return wrap(kCmp, printExpPrec(x.args[0], kAdd) + " < " +
                                printExpPrec(x.args[1], kAdd));
        case Op::Leq:
          return wrap(kCmp, printExpPrec(x.args[0], kAdd) + " <= " +
                                printExpPrec(x.args[1], kAdd));
        case Op::Eq:
          return wrap(kCmp, printExpPrec(x.args[0], kAdd) + " == " +
                                printExpPrec(x.args[1], kAdd));
        case Op::Add:
          return wrap(kAdd, binInfix(x, "+", kAdd));
        case Op::Sub:
          return wrap(kAdd, binInfix(x, "-", kAdd));
        case Op::Mult:
          return wrap(kMul, binInfix(x, "*", kMul));
        case Op::Div:
          return wrap(kMul, binInfix(x, "/", kMul));
        case Op::Neg:
          // Parenthesize a negated literal: the parser folds a bare
          // "-1.5" into a negative constant.
          if (std::holds_alternative<Exp::RealLit>(x.args[0]->node))
            return wrap(kUnary, "-(" + printExpPrec(x.args[0], kOr) + ")");
          return wrap(kUnary, "-" + printExpPrec(x.args[0], kUnary));
        case Op::Not:
          return wrap(kUnary, "!" + printExpPrec(x.args[0], kUnary));
        case Op::Cond:
          return "cond(" + printExpPrec(x.args[0], kOr) + ", " +
                 printExpPrec(x.args[1], kOr) + ", " +
                 printExpPrec(x.args[2], kOr) + ")";
      }
      return "?";
    }
    std::string operator()(const Exp::Obs& x) const {
      return "obs(" + x.label + ", " + std::to_string(x.offset) + ")";
    }
    std::string operator()(const Exp::RealLit& x) const {
      return formatReal(x.value);
    }
    std::string operator()(const Exp::BoolLit& x) const {
      return x.value ? "true" : "false";
    }
    std::string operator()(const Exp::VarE& x) const { return x.name; }
    std::string operator()(const Exp::Acc& x) const {
      return "acc(" + x.binder + ". " + printExpPrec(x.body, kOr) + ", " +
             std::to_string(x.days) + ", " + printExpPrec(x.init, kOr) + ")";
    }
  };
  return std::visit(Visitor{prec}, e->node);
}

}  // namespace

std::string printExp(const ExpPtr& e) { return printExpPrec(e, kOr); }

std::string printContract(const ContrPtr& c) {
  struct Visitor {
    std::string operator()(const Contr::Zero&) const { return "zero"; }
    std::string operator()(const Contr::Let& x) const {
      return "let " + x.binder + " = " + printExp(x.bound) + " in " +
             printContract(x.body);
    }
    std::string operator()(const Contr::Transfer& x) const {
      return "transfer(" + x.from + ", " + x.to + ", " + x.asset + ")";
    }
    std::string operator()(const Contr::Scale& x) const {
      return "scale(" + printExp(x.factor) + ", " + printContract(x.body) + ")";
    }
    std::string operator()(const Contr::Translate& x) const {
      return "translate(" + printTExpr(x.shift) + ", " +
             printContract(x.body) + ")";
    }
    std::string operator()(const Contr::Both& x) const {
      return "both(" + printContract(x.left) + ", " + printContract(x.right) +
             ")";
    }
    std::string operator()(const Contr::IfWithin& x) const {
      return "if(" + printExp(x.cond) + ", " + printTExpr(x.window) + ", " +
             printContract(x.thenC) + ", " + printContract(x.elseC) + ")";
    }
  };
  return std::visit(Visitor{}, c->node);
}

std::string printILTExpr(const ILTExprPtr& t) {
  if (const auto* p = std::get_if<ILTExpr::Tplus>(&t->node))
    return printILTExpr(p->left) + "+" + printILTExpr(p->right);
  return printTExpr(std::get<TExpr>(t->node));
}

std::string printILTExprZ(const ILTExprZPtr& t) {
  if (const auto* p = std::get_if<ILTExprZ::TplusZ>(&t->node))
    return printILTExprZ(p->left) + "+" + printILTExprZ(p->right);
  if (const auto* p = std::get_if<ILTExprPtr>(&t->node))
    return printILTExpr(*p);
  return std::to_string(std::get<ILTExprZ::TnumZ>(t->node).value);
}

std::string printIL(const ILPtr& il) {
  struct Visitor {
    std::string operator()(const ILExpr::If& x) const {
      return "if(" + printIL(x.cond) + ", " + printIL(x.thenE) + ", " +
             printIL(x.elseE) + ")";
    }
    std::string operator()(const ILExpr::FloatLit& x) const {
      return formatReal(x.value);
    }
    std::string operator()(const ILExpr::NatLit& x) const {
      return std::to_string(x.value);
    }
    std::string operator()(const ILExpr::BoolLit& x) const {
      return x.value ? "true" : "false";
    }
    std::string operator()(const ILExpr::TExprVal& x) const {
      return printILTExpr(x.value);
    }
    std::string operator()(const ILExpr::Now&) const { return "now"; }
    std::string operator()(const ILExpr::Model& x) const {
      return "model(" + x.label + ", " + printILTExprZ(x.time) + ")";
    }
    std::string operator()(const ILExpr::UnOp& x) const {
      return std::string(x.op == ILUnOp::Neg ? "-" : "!") + "(" +
             printIL(x.arg) + ")";
    }
    std::string operator()(const ILExpr::BinOp& x) const {
      const char* sym = nullptr;
      switch (x.op) {
        case ILBinOp::Add:
          sym = "+";
          break;
        case ILBinOp::Sub:
          sym = "-";
          break;
        case ILBinOp::Mult:
          sym = "*";
          break;
        case ILBinOp::Div:
          sym = "/";
          break;
        case ILBinOp::Lt:
          sym = "<";
          break;
        case ILBinOp::Leq:
          sym = "<=";
          break;
        case ILBinOp::Eq:
          sym = "==";
          break;
        case ILBinOp::And:
          sym = "&";
          break;
        case ILBinOp::Or:
          sym = "|";
          break;
      }
      return "(" + printIL(x.left) + " " + sym + " " + printIL(x.right) + ")";
    }
    std::string operator()(const ILExpr::LoopIf& x) const {
      if (x.window.isNum() && x.window.num == 0) {
        // Zero-window loops behave as plain conditionals; print them that
        // way, matching the surface form they compile from.
        return "if(" + printIL(x.cond) + ", " + printIL(x.thenE) + ", " +
               printIL(x.elseE) + ")";
      }
      return "loopif(" + printIL(x.cond) + ", " + printIL(x.thenE) + ", " +
             printIL(x.elseE) + ", " + printTExpr(x.window) + ")";
    }
    std::string operator()(const ILExpr::Payoff& x) const {
      return "payoff(" + printILTExpr(x.time) + ", " + x.from + ", " + x.to +
             ")";
    }
  };
  return std::visit(Visitor{}, il->node);
}

}  // namespace cltk
