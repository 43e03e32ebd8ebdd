#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace cltk {

using Party = std::string;
using Asset = std::string;

// Template expression: a natural-number literal or a template variable.
struct TExpr {
  enum class Kind { Num, Var };
  Kind kind = Kind::Num;
  std::uint64_t num = 0;
  std::string var;

  static TExpr number(std::uint64_t n) {
    TExpr t;
    t.kind = Kind::Num;
    t.num = n;
    return t;
  }
  static TExpr variable(std::string v) {
    TExpr t;
    t.kind = Kind::Var;
    t.var = std::move(v);
    return t;
  }
  bool isNum() const { return kind == Kind::Num; }

  friend bool operator==(const TExpr& a, const TExpr& b) {
    if (a.kind != b.kind) return false;
    return a.isNum() ? a.num == b.num : a.var == b.var;
  }
};

enum class Op {
  Add,
  Sub,
  Mult,
  Div,
  Lt,
  Leq,
  Eq,
  And,
  Or,
  Not,
  Neg,
  Cond,
};

int opArity(Op op);
const char* opName(Op op);

struct Exp;
using ExpPtr = std::shared_ptr<const Exp>;

struct Exp {
  struct OpE {
    Op op;
    std::vector<ExpPtr> args;
  };
  struct Obs {
    std::string label;
    std::int64_t offset;  // days relative to the node's time; may be negative
  };
  struct RealLit {
    double value;
  };
  struct BoolLit {
    bool value;
  };
  struct VarE {
    std::string name;
  };
  // Accumulate `body` over the last `days` days, seeded by `init`.
  struct Acc {
    std::string binder;
    ExpPtr body;
    std::uint64_t days;
    ExpPtr init;
  };

  std::variant<OpE, Obs, RealLit, BoolLit, VarE, Acc> node;
};

ExpPtr mkOp(Op op, std::vector<ExpPtr> args);
ExpPtr mkObs(std::string label, std::int64_t offset);
ExpPtr mkReal(double v);
ExpPtr mkBool(bool v);
ExpPtr mkVar(std::string name);
ExpPtr mkAcc(std::string binder, ExpPtr body, std::uint64_t days, ExpPtr init);

bool expEqual(const ExpPtr& a, const ExpPtr& b);

struct Contr;
using ContrPtr = std::shared_ptr<const Contr>;

struct Contr {
  struct Zero {};
  struct Let {
    std::string binder;
    ExpPtr bound;
    ContrPtr body;
  };
  struct Transfer {
    Party from;
    Party to;
    Asset asset;
  };
  struct Scale {
    ExpPtr factor;
    ContrPtr body;
  };
  struct Translate {
    TExpr shift;
    ContrPtr body;
  };
  struct Both {
    ContrPtr left;
    ContrPtr right;
  };
  struct IfWithin {
    ExpPtr cond;
    TExpr window;
    ContrPtr thenC;
    ContrPtr elseC;
  };

  std::variant<Zero, Let, Transfer, Scale, Translate, Both, IfWithin> node;
};

ContrPtr mkZero();
ContrPtr mkLet(std::string binder, ExpPtr bound, ContrPtr body);
ContrPtr mkTransfer(Party from, Party to, Asset asset);
ContrPtr mkScale(ExpPtr factor, ContrPtr body);
ContrPtr mkTranslate(TExpr shift, ContrPtr body);
ContrPtr mkBoth(ContrPtr left, ContrPtr right);
ContrPtr mkIfWithin(ExpPtr cond, TExpr window, ContrPtr thenC, ContrPtr elseC);

bool contrEqual(const ContrPtr& a, const ContrPtr& b);

}  // namespace cltk
