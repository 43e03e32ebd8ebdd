#include "cltk/kernel.hpp"

#include <map>
#include <sstream>

#include "cltk/compile.hpp"
#include "cltk/errors.hpp"
#include "cltk/json_io.hpp"
#include "cltk/printer.hpp"
#include "cltk/semantics.hpp"

namespace cltk {

namespace {

KPtr mk(KExpr e) { return std::make_shared<KExpr>(std::move(e)); }

class KernelBuilder {
 public:
  explicit KernelBuilder(const TEnv& tenv) : tenv_(tenv) {}

  Kernel build(const ILPtr& il) {
    Kernel k;
    k.body = rewrite(il, 0);
    k.rows = std::move(rows_);
    k.cols = std::move(cols_);
    k.tvars = std::move(tvars_);
    k.parties = std::move(parties_);
    std::int64_t maxDay = 0;
    for (std::int64_t d : k.rows) maxDay = std::max(maxDay, d);
    k.horizon = static_cast<std::uint64_t>(maxDay) + 1;
    return k;
  }

 private:
  const TEnv& tenv_;
  std::vector<std::int64_t> rows_;
  std::map<std::int64_t, std::size_t> firstRow_;
  std::vector<std::string> cols_;
  std::map<std::string, std::size_t> colIndex_;
  std::vector<std::string> tvars_;
  std::map<std::string, std::size_t> tvarIndex_;
  std::vector<Party> parties_;

  // Materialize rows for days [day, day+slack]; the block must be
  // contiguous so loop-relative lookups stay in range.
  std::size_t ensureRows(std::int64_t day, std::uint64_t slack) {
    auto it = firstRow_.find(day);
    if (it != firstRow_.end()) {
      std::size_t r = it->second;
      bool contiguous = true;
      for (std::uint64_t k = 1; k <= slack; ++k) {
        std::size_t want = r + k;
        if (want < rows_.size() &&
            rows_[want] != day + static_cast<std::int64_t>(k)) {
          contiguous = false;
          break;
        }
      }
      if (contiguous) {
        for (std::uint64_t k = 1; k <= slack; ++k) {
          std::size_t want = r + k;
          if (want >= rows_.size()) {
            rows_.push_back(day + static_cast<std::int64_t>(k));
            firstRow_.emplace(rows_.back(), want);
          }
        }
        return r;
      }
    }
    // Fresh contiguous block at the end. Days may repeat across blocks when
    // loop windows overlap scattered singleton rows.
    std::size_t r = rows_.size();
    for (std::uint64_t k = 0; k <= slack; ++k) {
      rows_.push_back(day + static_cast<std::int64_t>(k));
      firstRow_.emplace(rows_.back(), rows_.size() - 1);
    }
    return r;
  }

  std::size_t colOf(const std::string& label) {
    auto [it, inserted] = colIndex_.try_emplace(label, cols_.size());
    if (inserted) cols_.push_back(label);
    return it->second;
  }

  std::size_t tvarOf(const std::string& name) {
    auto [it, inserted] = tvarIndex_.try_emplace(name, tvars_.size());
    if (inserted) tvars_.push_back(name);
    return it->second;
  }

  void noteParty(const Party& p) {
    for (const auto& q : parties_)
      if (q == p) return;
    parties_.push_back(p);
  }

  void collectTVarsT(const ILTExprPtr& t) {
    if (const auto* p = std::get_if<ILTExpr::Tplus>(&t->node)) {
      collectTVarsT(p->left);
      collectTVarsT(p->right);
      return;
    }
    const TExpr& te = std::get<TExpr>(t->node);
    if (!te.isNum()) tvarOf(te.var);
  }
  void collectTVarsZ(const ILTExprZPtr& t) {
    if (const auto* p = std::get_if<ILTExprZ::TplusZ>(&t->node)) {
      collectTVarsZ(p->left);
      collectTVarsZ(p->right);
      return;
    }
    if (const auto* p = std::get_if<ILTExprPtr>(&t->node)) collectTVarsT(*p);
  }

  KPtr rewrite(const ILPtr& il, std::uint64_t slack) {
    struct Visitor {
      KernelBuilder& b;
      std::uint64_t slack;
      KPtr operator()(const ILExpr::If& x) const {
        KPtr c = b.rewrite(x.cond, slack);
        KPtr t = b.rewrite(x.thenE, slack);
        KPtr e = b.rewrite(x.elseE, slack);
        return mk(KExpr{KExpr::If{c, t, e}});
      }
      KPtr operator()(const ILExpr::FloatLit& x) const {
        return mk(KExpr{KExpr::FloatLit{x.value}});
      }
      KPtr operator()(const ILExpr::NatLit& x) const {
        return mk(KExpr{KExpr::NatLit{x.value}});
      }
      KPtr operator()(const ILExpr::BoolLit& x) const {
        return mk(KExpr{KExpr::BoolLit{x.value}});
      }
      KPtr operator()(const ILExpr::TExprVal& x) const {
        b.collectTVarsT(x.value);
        std::int64_t day =
            static_cast<std::int64_t>(tExprSem(x.value, b.tenv_));
        return mk(KExpr{KExpr::TimeRef{b.ensureRows(day, slack)}});
      }
      KPtr operator()(const ILExpr::Now&) const {
        return mk(KExpr{KExpr::Now{}});
      }
      KPtr operator()(const ILExpr::Model& x) const {
        b.collectTVarsZ(x.time);
        std::int64_t day = tExprZSem(x.time, b.tenv_);
        std::size_t row = b.ensureRows(day, slack);
        std::size_t col = b.colOf(x.label);
        return mk(KExpr{KExpr::ObsRef{row, col}});
      }
      KPtr operator()(const ILExpr::UnOp& x) const {
        return mk(KExpr{KExpr::UnOp{x.op, b.rewrite(x.arg, slack)}});
      }
      KPtr operator()(const ILExpr::BinOp& x) const {
        KPtr l = b.rewrite(x.left, slack);
        KPtr r = b.rewrite(x.right, slack);
        return mk(KExpr{KExpr::BinOp{x.op, l, r}});
      }
      KPtr operator()(const ILExpr::LoopIf& x) const {
        std::uint64_t w = tSem(x.window, b.tenv_);
        std::optional<std::size_t> wVar;
        if (!x.window.isNum()) wVar = b.tvarOf(x.window.var);
        KPtr c = b.rewrite(x.cond, slack + w);
        KPtr t = b.rewrite(x.thenE, slack + w);
        KPtr e = b.rewrite(x.elseE, slack + w);
        return mk(KExpr{KExpr::LoopIf{c, t, e, w, wVar}});
      }
      KPtr operator()(const ILExpr::Payoff& x) const {
        b.collectTVarsT(x.time);
        b.noteParty(x.from);
        b.noteParty(x.to);
        std::int64_t day = static_cast<std::int64_t>(tExprSem(x.time, b.tenv_));
        std::size_t row = b.ensureRows(day, slack);
        return mk(KExpr{KExpr::PayRef{row, x.from, x.to}});
      }
    };
    return std::visit(Visitor{*this, slack}, il->node);
  }
};

using KVal = std::variant<std::int64_t, double, bool>;

double kAsReal(const KVal& v) {
  if (const auto* p = std::get_if<double>(&v)) return *p;
  throw TypeError("kernel: expected a Real value");
}
bool kAsBool(const KVal& v) {
  if (const auto* p = std::get_if<bool>(&v)) return *p;
  throw TypeError("kernel: expected a Bool value");
}

KVal kApplyBin(ILBinOp op, const KVal& a, const KVal& b) {
  auto bothInt = [&]() {
    return std::holds_alternative<std::int64_t>(a) &&
           std::holds_alternative<std::int64_t>(b);
  };
  switch (op) {
    case ILBinOp::Add:
      if (bothInt()) return std::get<std::int64_t>(a) + std::get<std::int64_t>(b);
      return kAsReal(a) + kAsReal(b);
    case ILBinOp::Sub:
      if (bothInt()) return std::get<std::int64_t>(a) - std::get<std::int64_t>(b);
      return kAsReal(a) - kAsReal(b);
    case ILBinOp::Mult:
      return kAsReal(a) * kAsReal(b);
    case ILBinOp::Div: {
      double d = kAsReal(b);
      if (d == 0.0) throw EvalError("kernel: division by zero");
      return kAsReal(a) / d;
    }
    case ILBinOp::Lt:
      if (bothInt()) return std::get<std::int64_t>(a) < std::get<std::int64_t>(b);
      return kAsReal(a) < kAsReal(b);
    case ILBinOp::Leq:
      if (bothInt()) return std::get<std::int64_t>(a) <= std::get<std::int64_t>(b);
      return kAsReal(a) <= kAsReal(b);
    case ILBinOp::Eq:
      if (bothInt()) return std::get<std::int64_t>(a) == std::get<std::int64_t>(b);
      return kAsReal(a) == kAsReal(b);
    case ILBinOp::And:
      return kAsBool(a) && kAsBool(b);
    case ILBinOp::Or:
      return kAsBool(a) || kAsBool(b);
  }
  throw std::logic_error("unknown kernel operator");
}

struct KEval {
  const Kernel& k;
  const KernelInput& in;
  const Party& p1;
  const Party& p2;

  double ext(std::size_t row, std::size_t col) const {
    if (row >= in.ext.size() || col >= in.ext[row].size())
      throw EvalError("kernel input shape mismatch at ext[" +
                      std::to_string(row) + "," + std::to_string(col) + "]");
    return in.ext[row][col];
  }

  KVal eval(const KPtr& e, std::uint64_t off) const {
    struct Visitor {
      const KEval& s;
      std::uint64_t off;
      KVal operator()(const KExpr::If& x) const {
        return kAsBool(s.eval(x.cond, off)) ? s.eval(x.thenE, off)
                                            : s.eval(x.elseE, off);
      }
      KVal operator()(const KExpr::FloatLit& x) const { return x.value; }
      KVal operator()(const KExpr::NatLit& x) const {
        return static_cast<std::int64_t>(x.value);
      }
      KVal operator()(const KExpr::BoolLit& x) const { return x.value; }
      KVal operator()(const KExpr::Now&) const {
        return static_cast<std::int64_t>(s.in.tNow);
      }
      KVal operator()(const KExpr::TimeRef& x) const {
        std::size_t r = x.row + off;
        if (r >= s.k.rows.size())
          throw EvalError("kernel row index out of range");
        return s.k.rows[r];
      }
      KVal operator()(const KExpr::ObsRef& x) const {
        return s.ext(x.row + off, x.col);
      }
      KVal operator()(const KExpr::PayRef& x) const {
        std::size_t r = x.row + off;
        if (r >= s.in.disc.size())
          throw EvalError("kernel disc index out of range");
        double d = s.in.disc[r];
        if (x.from == s.p1 && x.to == s.p2) return d;
        if (x.from == s.p2 && x.to == s.p1) return -d;
        return 0.0;
      }
      KVal operator()(const KExpr::UnOp& x) const {
        KVal v = s.eval(x.arg, off);
        if (x.op == ILUnOp::Neg) return -kAsReal(v);
        return !kAsBool(v);
      }
      KVal operator()(const KExpr::BinOp& x) const {
        KVal a = s.eval(x.left, off);
        KVal b = s.eval(x.right, off);
        return kApplyBin(x.op, a, b);
      }
      KVal operator()(const KExpr::LoopIf& x) const {
        std::uint64_t n = x.window;
        std::uint64_t cur = off;
        for (;; --n, ++cur) {
          if (kAsBool(s.eval(x.cond, cur))) return s.eval(x.thenE, cur);
          if (n == 0) return s.eval(x.elseE, cur);
        }
      }
    };
    return std::visit(Visitor{*this, off}, e->node);
  }
};

}  // namespace

Kernel reindex(const ILPtr& il, const TEnv& tenv) {
  return KernelBuilder(tenv).build(il);
}

double evalKernel(const Kernel& k, const KernelInput& in, const Party& p1,
                  const Party& p2) {
  KVal v = KEval{k, in, p1, p2}.eval(k.body, 0);
  if (const auto* p = std::get_if<double>(&v)) return *p;
  throw EvalError("kernel did not evaluate to a real");
}

KernelInput sampleKernelInput(const Kernel& k, const ExtEnv& env,
                              const Discount& disc, std::uint64_t tNow,
                              const TEnv& tenv) {
  KernelInput in;
  in.tNow = tNow;
  in.ext.resize(k.rows.size());
  in.disc.resize(k.rows.size());
  for (std::size_t r = 0; r < k.rows.size(); ++r) {
    in.ext[r].resize(k.cols.size());
    for (std::size_t c = 0; c < k.cols.size(); ++c)
      in.ext[r][c] = asReal(env.lookup(k.cols[c], k.rows[r]));
    in.disc[r] = k.rows[r] >= 0
                     ? disc(static_cast<std::uint64_t>(k.rows[r]))
                     : 1.0;
  }
  in.tenv.reserve(k.tvars.size());
  for (const auto& v : k.tvars) in.tenv.push_back(tenv.lookup(v));
  return in;
}

namespace {

std::string idxExpr(std::size_t row, const std::string& offVar) {
  if (row == 0) return offVar;
  return std::to_string(row) + " + " + offVar;
}

struct KPrinter {
  const Kernel& k;
  int nextVar = 1;

  std::string print(const KPtr& e, const std::string& off) {
    struct Visitor {
      KPrinter& p;
      const std::string& off;
      std::string operator()(const KExpr::If& x) const {
        return "(if " + p.print(x.cond, off) + " then " +
               p.print(x.thenE, off) + " else " + p.print(x.elseE, off) + ")";
      }
      std::string operator()(const KExpr::FloatLit& x) const {
        return formatReal(x.value);
      }
      std::string operator()(const KExpr::NatLit& x) const {
        return std::to_string(x.value);
      }
      std::string operator()(const KExpr::BoolLit& x) const {
        return x.value ? "true" : "false";
      }
      std::string operator()(const KExpr::Now&) const { return "t_now"; }
      std::string operator()(const KExpr::TimeRef& x) const {
        return "rows[" + idxExpr(x.row, off) + "]";
      }
      std::string operator()(const KExpr::ObsRef& x) const {
        return "ext[" + idxExpr(x.row, off) + ", " + std::to_string(x.col) +
               "]";
      }
      std::string operator()(const KExpr::PayRef& x) const {
        return "pay[" + idxExpr(x.row, off) + ", " + x.from + ", " + x.to +
               "]";
      }
      std::string operator()(const KExpr::UnOp& x) const {
        // Parenthesized so nested negation never lexes as a `--` comment.
        return std::string(x.op == ILUnOp::Neg ? "(-" : "(!") +
               p.print(x.arg, off) + ")";
      }
      std::string operator()(const KExpr::BinOp& x) const {
        const char* sym = nullptr;
        switch (x.op) {
          case ILBinOp::Add: sym = "+"; break;
          case ILBinOp::Sub: sym = "-"; break;
          case ILBinOp::Mult: sym = "*"; break;
          case ILBinOp::Div: sym = "/"; break;
          case ILBinOp::Lt: sym = "<"; break;
          case ILBinOp::Leq: sym = "<="; break;
          case ILBinOp::Eq: sym = "=="; break;
          case ILBinOp::And: sym = "&"; break;
          case ILBinOp::Or: sym = "|"; break;
        }
        return "(" + p.print(x.left, off) + " " + sym + " " +
               p.print(x.right, off) + ")";
      }
      std::string operator()(const KExpr::LoopIf& x) const {
        if (x.window == 0 && !x.windowVarIndex) {
          // A zero-window loop never iterates; emit a plain conditional.
          return "(if " + p.print(x.cond, off) + " then " +
                 p.print(x.thenE, off) + " else " + p.print(x.elseE, off) +
                 ")";
        }
        std::string v = "t" + std::to_string(p.nextVar++);
        std::string w = x.windowVarIndex
                            ? "tenv[" + std::to_string(*x.windowVarIndex) + "]"
                            : std::to_string(x.window);
        std::string cond = p.print(x.cond, v);
        return "(let " + v + " = loop " + v + " = " + off + " while (!" +
               cond + " & (" + v + " < " + off + " + " + w + ")) do " + v +
               " + 1 in if " + cond + " then " + p.print(x.thenE, v) +
               " else " + p.print(x.elseE, v) + ")";
      }
    };
    return std::visit(Visitor{*this, off}, e->node);
  }
};

}  // namespace

std::string emitKernelSource(const Kernel& k) {
  std::ostringstream out;
  out << "-- cltk kernel v1\n";
  out << "let rows = [";
  for (std::size_t i = 0; i < k.rows.size(); ++i)
    out << (i ? ", " : "") << k.rows[i];
  out << "]\n";
  out << "let cols = [";
  for (std::size_t i = 0; i < k.cols.size(); ++i)
    out << (i ? ", " : "") << "\"" << k.cols[i] << "\"";
  out << "]\n";
  KPrinter printer{k};
  std::string body = printer.print(k.body, "t0");
  out << "let payoffInternal(ext, tenv, disc, t0, t_now) =\n  " << body
      << "\n";
  out << "let payoff(ext, tenv, disc, t_now) =\n  payoffInternal(ext, tenv, "
         "disc, 0, t_now)\n";
  return out.str();
}

std::string emitFunctionalSource(const ILPtr& il) {
  struct Printer {
    static std::string texpr(const TExpr& t) {
      if (t.isNum()) return std::to_string(t.num);
      return "(tenv ! \"" + t.var + "\")";
    }
    static std::string ilt(const ILTExprPtr& t) {
      if (const auto* p = std::get_if<ILTExpr::Tplus>(&t->node))
        return "(" + ilt(p->left) + " + " + ilt(p->right) + ")";
      return texpr(std::get<TExpr>(t->node));
    }
    static std::string iltz(const ILTExprZPtr& t) {
      if (const auto* p = std::get_if<ILTExprZ::TplusZ>(&t->node))
        return "(" + iltz(p->left) + " + " + iltz(p->right) + ")";
      if (const auto* p = std::get_if<ILTExprPtr>(&t->node)) return ilt(*p);
      return std::to_string(std::get<ILTExprZ::TnumZ>(t->node).value);
    }
    static std::string print(const ILPtr& e) {
      struct Visitor {
        std::string operator()(const ILExpr::If& x) const {
          return "(if " + print(x.cond) + " then " + print(x.thenE) +
                 " else " + print(x.elseE) + ")";
        }
        std::string operator()(const ILExpr::FloatLit& x) const {
          return formatReal(x.value);
        }
        std::string operator()(const ILExpr::NatLit& x) const {
          return std::to_string(x.value);
        }
        std::string operator()(const ILExpr::BoolLit& x) const {
          return x.value ? "True" : "False";
        }
        std::string operator()(const ILExpr::TExprVal& x) const {
          return "(" + ilt(x.value) + " + t0)";
        }
        std::string operator()(const ILExpr::Now&) const { return "t_now"; }
        std::string operator()(const ILExpr::Model& x) const {
          return "(ext ! (\"" + x.label + "\", " + iltz(x.time) + " + t0))";
        }
        std::string operator()(const ILExpr::UnOp& x) const {
          return std::string(x.op == ILUnOp::Neg ? "negate " : "not ") +
                 print(x.arg);
        }
        std::string operator()(const ILExpr::BinOp& x) const {
          const char* sym = nullptr;
          switch (x.op) {
            case ILBinOp::Add: sym = "+"; break;
            case ILBinOp::Sub: sym = "-"; break;
            case ILBinOp::Mult: sym = "*"; break;
            case ILBinOp::Div: sym = "/"; break;
            case ILBinOp::Lt: sym = "<"; break;
            case ILBinOp::Leq: sym = "<="; break;
            case ILBinOp::Eq: sym = "=="; break;
            case ILBinOp::And: sym = "&&"; break;
            case ILBinOp::Or: sym = "||"; break;
          }
          return "(" + print(x.left) + " " + sym + " " + print(x.right) + ")";
        }
        std::string operator()(const ILExpr::LoopIf& x) const {
          return "(loopif " + texpr(x.window) + " t0 (\\t0 -> " +
                 print(x.cond) + ") (\\t0 -> " + print(x.thenE) +
                 ") (\\t0 -> " + print(x.elseE) + "))";
        }
        std::string operator()(const ILExpr::Payoff& x) const {
          std::string d = "disc (" + ilt(x.time) + " + t0)";
          return "(if (\"" + x.from + "\" == p1 && \"" + x.to +
                 "\" == p2) then " + d + " else if (\"" + x.from +
                 "\" == p2 && \"" + x.to + "\" == p1) then negate (" + d +
                 ") else 0.0)";
        }
      };
      return std::visit(Visitor{}, e->node);
    }
  };
  std::ostringstream out;
  out << "-- generated payoff function\n";
  out << "payoffInternal ext tenv disc t0 t_now p1 p2 =\n  "
      << Printer::print(il) << "\n\n";
  out << "payoff ext tenv disc t_now p1 p2 = payoffInternal ext tenv disc 0 "
         "t_now p1 p2\n";
  return out.str();
}

namespace {

Json kexprToJson(const KPtr& e) {
  struct Visitor {
    Json operator()(const KExpr::If& x) const {
      return {{"kind", "if"},
              {"cond", kexprToJson(x.cond)},
              {"then", kexprToJson(x.thenE)},
              {"else", kexprToJson(x.elseE)}};
    }
    Json operator()(const KExpr::FloatLit& x) const {
      return {{"kind", "float"}, {"value", x.value}};
    }
    Json operator()(const KExpr::NatLit& x) const {
      return {{"kind", "nat"}, {"value", x.value}};
    }
    Json operator()(const KExpr::BoolLit& x) const {
      return {{"kind", "bool"}, {"value", x.value}};
    }
    Json operator()(const KExpr::Now&) const { return {{"kind", "now"}}; }
    Json operator()(const KExpr::TimeRef& x) const {
      return {{"kind", "timeref"}, {"row", x.row}};
    }
    Json operator()(const KExpr::ObsRef& x) const {
      return {{"kind", "obsref"}, {"row", x.row}, {"col", x.col}};
    }
    Json operator()(const KExpr::PayRef& x) const {
      return {{"kind", "payref"},
              {"row", x.row},
              {"from", x.from},
              {"to", x.to}};
    }
    Json operator()(const KExpr::UnOp& x) const {
      return {{"kind", "unop"},
              {"op", ilUnOpName(x.op)},
              {"arg", kexprToJson(x.arg)}};
    }
    Json operator()(const KExpr::BinOp& x) const {
      return {{"kind", "binop"},
              {"op", ilBinOpName(x.op)},
              {"left", kexprToJson(x.left)},
              {"right", kexprToJson(x.right)}};
    }
    Json operator()(const KExpr::LoopIf& x) const {
      Json j = {{"kind", "loopif"},
                {"cond", kexprToJson(x.cond)},
                {"then", kexprToJson(x.thenE)},
                {"else", kexprToJson(x.elseE)},
                {"window", x.window}};
      if (x.windowVarIndex) j["windowVar"] = *x.windowVarIndex;
      return j;
    }
  };
  return std::visit(Visitor{}, e->node);
}

KPtr kexprFromJson(const Json& j) {
  std::string k = j.at("kind").get<std::string>();
  if (k == "if")
    return mk(KExpr{KExpr::If{kexprFromJson(j.at("cond")),
                              kexprFromJson(j.at("then")),
                              kexprFromJson(j.at("else"))}});
  if (k == "float") return mk(KExpr{KExpr::FloatLit{j.at("value").get<double>()}});
  if (k == "nat")
    return mk(KExpr{KExpr::NatLit{j.at("value").get<std::uint64_t>()}});
  if (k == "bool") return mk(KExpr{KExpr::BoolLit{j.at("value").get<bool>()}});
  if (k == "now") return mk(KExpr{KExpr::Now{}});
  if (k == "timeref")
    return mk(KExpr{KExpr::TimeRef{j.at("row").get<std::size_t>()}});
  if (k == "obsref")
    return mk(KExpr{KExpr::ObsRef{j.at("row").get<std::size_t>(),
                                  j.at("col").get<std::size_t>()}});
  if (k == "payref")
    return mk(KExpr{KExpr::PayRef{j.at("row").get<std::size_t>(),
                                  j.at("from").get<std::string>(),
                                  j.at("to").get<std::string>()}});
  if (k == "unop") {
    ILUnOp op = j.at("op").get<std::string>() == "neg" ? ILUnOp::Neg
                                                       : ILUnOp::Not;
    return mk(KExpr{KExpr::UnOp{op, kexprFromJson(j.at("arg"))}});
  }
  if (k == "binop") {
    static const std::map<std::string, ILBinOp> kOps = {
        {"add", ILBinOp::Add}, {"sub", ILBinOp::Sub}, {"mult", ILBinOp::Mult},
        {"div", ILBinOp::Div}, {"lt", ILBinOp::Lt},   {"leq", ILBinOp::Leq},
        {"eq", ILBinOp::Eq},   {"and", ILBinOp::And}, {"or", ILBinOp::Or}};
    return mk(KExpr{KExpr::BinOp{kOps.at(j.at("op").get<std::string>()),
                                 kexprFromJson(j.at("left")),
                                 kexprFromJson(j.at("right"))}});
  }
  if (k == "loopif") {
    KExpr::LoopIf l{kexprFromJson(j.at("cond")), kexprFromJson(j.at("then")),
                    kexprFromJson(j.at("else")),
                    j.at("window").get<std::uint64_t>(), std::nullopt};
    if (j.contains("windowVar"))
      l.windowVarIndex = j.at("windowVar").get<std::size_t>();
    return mk(KExpr{std::move(l)});
  }
  throw ParseError(0, 0, "unknown kernel node kind " + k);
}

}  // namespace

nlohmann::json kernelToJson(const Kernel& k) {
  return {{"body", kexprToJson(k.body)}, {"rows", k.rows},
          {"cols", k.cols},             {"tvars", k.tvars},
          {"parties", k.parties},       {"horizon", k.horizon}};
}

Kernel kernelFromJson(const nlohmann::json& j) {
  Kernel k;
  k.body = kexprFromJson(j.at("body"));
  k.rows = j.at("rows").get<std::vector<std::int64_t>>();
  k.cols = j.at("cols").get<std::vector<std::string>>();
  k.tvars = j.at("tvars").get<std::vector<std::string>>();
  k.parties = j.at("parties").get<std::vector<Party>>();
  k.horizon = j.at("horizon").get<std::uint64_t>();
  return k;
}

}  // namespace cltk
