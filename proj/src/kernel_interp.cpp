#include <cctype>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cltk/errors.hpp"
#include "cltk/kernel.hpp"

// A reference interpreter for the textual kernel format produced by
// emitKernelSource. It exists so the emitted source can be tested
// differentially against the in-memory kernel evaluator.

namespace cltk {

namespace {

struct Tok {
  enum class Kind { Ident, Int, Float, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::uint64_t intVal = 0;
  double floatVal = 0.0;
  std::size_t line = 1, col = 1;
};

class SrcLexer {
 public:
  explicit SrcLexer(const std::string& src) : src_(src) { advance(); }

  const Tok& peek() const { return tok_; }
  Tok take() {
    Tok t = tok_;
    advance();
    return t;
  }
  bool isPunct(const char* s) const {
    return tok_.kind == Tok::Kind::Punct && tok_.text == s;
  }
  bool isIdent(const char* s) const {
    return tok_.kind == Tok::Kind::Ident && tok_.text == s;
  }
  void expectPunct(const char* s) {
    if (!isPunct(s)) fail(std::string("expected '") + s + "'");
    advance();
  }
  void expectIdent(const char* s) {
    if (!isIdent(s)) fail(std::string("expected '") + s + "'");
    advance();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(tok_.line, tok_.col,
                     "kernel source: " + msg + " (got '" + tok_.text + "')");
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  Tok tok_;

  char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  char next() const { return pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0'; }
  void bump() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void advance() {
    for (;;) {
      while (std::isspace(static_cast<unsigned char>(cur()))) bump();
      if (cur() == '-' && next() == '-') {
        while (cur() != '\0' && cur() != '\n') bump();
        continue;
      }
      break;
    }
    tok_ = Tok{};
    tok_.line = line_;
    tok_.col = col_;
    char c = cur();
    if (c == '\0') {
      tok_.kind = Tok::Kind::End;
      tok_.text = "<end>";
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
        s += cur();
        bump();
      }
      tok_.kind = Tok::Kind::Ident;
      tok_.text = std::move(s);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      bool isFloat = false;
      while (std::isdigit(static_cast<unsigned char>(cur()))) {
        s += cur();
        bump();
      }
      if (cur() == '.' && std::isdigit(static_cast<unsigned char>(next()))) {
        isFloat = true;
        s += cur();
        bump();
        while (std::isdigit(static_cast<unsigned char>(cur())) ||
               cur() == 'e' || cur() == 'E' || cur() == '-' || cur() == '+') {
          s += cur();
          bump();
        }
      }
      if (isFloat) {
        tok_.kind = Tok::Kind::Float;
        tok_.floatVal = std::stod(s);
      } else {
        tok_.kind = Tok::Kind::Int;
        tok_.intVal = std::stoull(s);
      }
      tok_.text = std::move(s);
      return;
    }
    if (c == '"') {
      bump();
      std::string s;
      while (cur() != '"' && cur() != '\0') {
        s += cur();
        bump();
      }
      if (cur() != '"') fail("unterminated string literal");
      bump();
      tok_.kind = Tok::Kind::String;
      tok_.text = std::move(s);
      return;
    }
    std::string s(1, c);
    bump();
    if ((s == "<" || s == "=") && cur() == '=') {
      s += cur();
      bump();
    } else if (s == "<" && cur() == '=') {
      s += cur();
      bump();
    }
    tok_.kind = Tok::Kind::Punct;
    tok_.text = std::move(s);
  }
};

using SVal = std::variant<std::int64_t, double, bool>;

double sAsReal(const SVal& v) {
  if (const auto* p = std::get_if<double>(&v)) return *p;
  if (const auto* p = std::get_if<std::int64_t>(&v))
    return static_cast<double>(*p);
  throw EvalError("kernel source: expected a numeric value");
}
std::int64_t sAsInt(const SVal& v) {
  if (const auto* p = std::get_if<std::int64_t>(&v)) return *p;
  throw EvalError("kernel source: expected an integer value");
}
bool sAsBool(const SVal& v) {
  if (const auto* p = std::get_if<bool>(&v)) return *p;
  throw EvalError("kernel source: expected a boolean value");
}

// Source expression tree.
struct SExpr;
using SPtr = std::shared_ptr<SExpr>;
struct SExpr {
  enum class Kind {
    IntLit, FloatLit, BoolLit, Var,
    Ext, Rows, Tenv, Disc, Pay,
    Un, Bin, If, Let, Loop
  };
  Kind kind;
  std::uint64_t intVal = 0;
  double floatVal = 0.0;
  bool boolVal = false;
  std::string name;        // Var binder name; Bin/Un operator; Pay parties
  std::string name2;       // Pay "to" party
  std::vector<SPtr> args;  // operands / indices / let parts
};

SPtr mkS(SExpr::Kind k) {
  auto p = std::make_shared<SExpr>();
  p->kind = k;
  return p;
}

class SrcParser {
 public:
  explicit SrcParser(const std::string& src) : lx_(src) {}

  // Returns (rows, body). The trailing payoff wrapper is validated loosely.
  std::pair<std::vector<std::int64_t>, SPtr> parse() {
    std::vector<std::int64_t> rows;
    SPtr body;
    while (lx_.peek().kind != Tok::Kind::End) {
      lx_.expectIdent("let");
      Tok name = lx_.take();
      if (name.kind != Tok::Kind::Ident) lx_.fail("expected a binding name");
      if (name.text == "rows") {
        lx_.expectPunct("=");
        rows = intList();
      } else if (name.text == "cols") {
        lx_.expectPunct("=");
        stringList();
      } else if (name.text == "payoffInternal") {
        paramList();
        lx_.expectPunct("=");
        body = expr();
      } else if (name.text == "payoff") {
        paramList();
        lx_.expectPunct("=");
        skipWrapperCall();
      } else {
        lx_.fail("unknown top-level binding " + name.text);
      }
    }
    if (!body) lx_.fail("missing payoffInternal definition");
    return {std::move(rows), std::move(body)};
  }

 private:
  SrcLexer lx_;

  std::vector<std::int64_t> intList() {
    std::vector<std::int64_t> out;
    lx_.expectPunct("[");
    if (!lx_.isPunct("]")) {
      for (;;) {
        bool neg = false;
        if (lx_.isPunct("-")) {
          neg = true;
          lx_.take();
        }
        Tok t = lx_.take();
        if (t.kind != Tok::Kind::Int) lx_.fail("expected an integer");
        std::int64_t v = static_cast<std::int64_t>(t.intVal);
        out.push_back(neg ? -v : v);
        if (!lx_.isPunct(",")) break;
        lx_.take();
      }
    }
    lx_.expectPunct("]");
    return out;
  }

  void stringList() {
    lx_.expectPunct("[");
    while (!lx_.isPunct("]")) lx_.take();
    lx_.expectPunct("]");
  }

  void paramList() {
    lx_.expectPunct("(");
    while (!lx_.isPunct(")")) lx_.take();
    lx_.expectPunct(")");
  }

  void skipWrapperCall() {
    lx_.expectIdent("payoffInternal");
    paramList();
  }

  SPtr expr() { return orExpr(); }

  SPtr orExpr() {
    SPtr l = andExpr();
    while (lx_.isPunct("|")) {
      lx_.take();
      l = binNode("|", l, andExpr());
    }
    return l;
  }
  SPtr andExpr() {
    SPtr l = cmpExpr();
    while (lx_.isPunct("&")) {
      lx_.take();
      l = binNode("&", l, cmpExpr());
    }
    return l;
  }
  SPtr cmpExpr() {
    SPtr l = addExpr();
    if (lx_.isPunct("<") || lx_.isPunct("<=") || lx_.isPunct("==")) {
      std::string op = lx_.take().text;
      l = binNode(op, l, addExpr());
    }
    return l;
  }
  SPtr addExpr() {
    SPtr l = mulExpr();
    while (lx_.isPunct("+") || lx_.isPunct("-")) {
      std::string op = lx_.take().text;
      l = binNode(op, l, mulExpr());
    }
    return l;
  }
  SPtr mulExpr() {
    SPtr l = unExpr();
    while (lx_.isPunct("*") || lx_.isPunct("/")) {
      std::string op = lx_.take().text;
      l = binNode(op, l, unExpr());
    }
    return l;
  }
  SPtr unExpr() {
    if (lx_.isPunct("-") || lx_.isPunct("!")) {
      std::string op = lx_.take().text;
      SPtr n = mkS(SExpr::Kind::Un);
      n->name = op;
      n->args = {unExpr()};
      return n;
    }
    return atom();
  }

  SPtr indexed(SExpr::Kind kind, std::size_t arity) {
    SPtr n = mkS(kind);
    lx_.expectPunct("[");
    for (std::size_t i = 0; i < arity; ++i) {
      if (i) lx_.expectPunct(",");
      n->args.push_back(expr());
    }
    if (kind == SExpr::Kind::Pay) {
      lx_.expectPunct(",");
      Tok from = lx_.take();
      lx_.expectPunct(",");
      Tok to = lx_.take();
      if (from.kind != Tok::Kind::Ident || to.kind != Tok::Kind::Ident)
        lx_.fail("expected party names in pay[...]");
      n->name = from.text;
      n->name2 = to.text;
    }
    lx_.expectPunct("]");
    return n;
  }

  SPtr atom() {
    const Tok& t = lx_.peek();
    if (t.kind == Tok::Kind::Int) {
      SPtr n = mkS(SExpr::Kind::IntLit);
      n->intVal = lx_.take().intVal;
      return n;
    }
    if (t.kind == Tok::Kind::Float) {
      SPtr n = mkS(SExpr::Kind::FloatLit);
      n->floatVal = lx_.take().floatVal;
      return n;
    }
    if (lx_.isPunct("(")) {
      lx_.take();
      SPtr n = expr();
      lx_.expectPunct(")");
      return n;
    }
    if (t.kind == Tok::Kind::Ident) {
      if (t.text == "true" || t.text == "false") {
        SPtr n = mkS(SExpr::Kind::BoolLit);
        n->boolVal = lx_.take().text == "true";
        return n;
      }
      if (t.text == "ext") {
        lx_.take();
        return indexed(SExpr::Kind::Ext, 2);
      }
      if (t.text == "rows") {
        lx_.take();
        return indexed(SExpr::Kind::Rows, 1);
      }
      if (t.text == "tenv") {
        lx_.take();
        return indexed(SExpr::Kind::Tenv, 1);
      }
      if (t.text == "disc") {
        lx_.take();
        return indexed(SExpr::Kind::Disc, 1);
      }
      if (t.text == "pay") {
        lx_.take();
        return indexed(SExpr::Kind::Pay, 1);
      }
      if (t.text == "if") {
        lx_.take();
        SPtr n = mkS(SExpr::Kind::If);
        n->args.push_back(expr());
        lx_.expectIdent("then");
        n->args.push_back(expr());
        lx_.expectIdent("else");
        n->args.push_back(expr());
        return n;
      }
      if (t.text == "let") {
        lx_.take();
        SPtr n = mkS(SExpr::Kind::Let);
        Tok v = lx_.take();
        if (v.kind != Tok::Kind::Ident) lx_.fail("expected a let binder");
        n->name = v.text;
        lx_.expectPunct("=");
        n->args.push_back(expr());
        lx_.expectIdent("in");
        n->args.push_back(expr());
        return n;
      }
      if (t.text == "loop") {
        lx_.take();
        SPtr n = mkS(SExpr::Kind::Loop);
        Tok v = lx_.take();
        if (v.kind != Tok::Kind::Ident) lx_.fail("expected a loop binder");
        n->name = v.text;
        lx_.expectPunct("=");
        n->args.push_back(expr());  // init
        lx_.expectIdent("while");
        n->args.push_back(expr());  // condition
        lx_.expectIdent("do");
        n->args.push_back(expr());  // step
        return n;
      }
      SPtr n = mkS(SExpr::Kind::Var);
      n->name = lx_.take().text;
      return n;
    }
    lx_.fail("unexpected token in expression");
  }

  SPtr binNode(std::string op, SPtr l, SPtr r) {
    SPtr n = mkS(SExpr::Kind::Bin);
    n->name = std::move(op);
    n->args = {std::move(l), std::move(r)};
    return n;
  }
};

struct SrcEval {
  const std::vector<std::int64_t>& rows;
  const KernelInput& in;
  const Party& p1;
  const Party& p2;

  SVal eval(const SPtr& e, std::map<std::string, SVal>& env) const {
    switch (e->kind) {
      case SExpr::Kind::IntLit:
        return static_cast<std::int64_t>(e->intVal);
      case SExpr::Kind::FloatLit:
        return e->floatVal;
      case SExpr::Kind::BoolLit:
        return e->boolVal;
      case SExpr::Kind::Var: {
        if (e->name == "t_now") return static_cast<std::int64_t>(in.tNow);
        auto it = env.find(e->name);
        if (it == env.end())
          throw EvalError("kernel source: unbound variable " + e->name);
        return it->second;
      }
      case SExpr::Kind::Ext: {
        std::size_t r = idx(e->args[0], env, in.ext.size(), "ext");
        std::size_t c = idx(e->args[1], env, in.ext[r].size(), "ext col");
        return in.ext[r][c];
      }
      case SExpr::Kind::Rows:
        return rows[idx(e->args[0], env, rows.size(), "rows")];
      case SExpr::Kind::Tenv:
        return static_cast<std::int64_t>(
            in.tenv[idx(e->args[0], env, in.tenv.size(), "tenv")]);
      case SExpr::Kind::Disc:
        return in.disc[idx(e->args[0], env, in.disc.size(), "disc")];
      case SExpr::Kind::Pay: {
        double d = in.disc[idx(e->args[0], env, in.disc.size(), "pay")];
        if (e->name == p1 && e->name2 == p2) return d;
        if (e->name == p2 && e->name2 == p1) return -d;
        return 0.0;
      }
      case SExpr::Kind::Un: {
        SVal v = eval(e->args[0], env);
        if (e->name == "!") return !sAsBool(v);
        if (std::holds_alternative<std::int64_t>(v))
          return -std::get<std::int64_t>(v);
        return -sAsReal(v);
      }
      case SExpr::Kind::Bin:
        return binop(e->name, eval(e->args[0], env), eval(e->args[1], env));
      case SExpr::Kind::If:
        return sAsBool(eval(e->args[0], env)) ? eval(e->args[1], env)
                                              : eval(e->args[2], env);
      case SExpr::Kind::Let: {
        SVal v = eval(e->args[0], env);
        auto saved = env.find(e->name) != env.end()
                         ? std::optional<SVal>(env[e->name])
                         : std::nullopt;
        env[e->name] = v;
        SVal out = eval(e->args[1], env);
        if (saved)
          env[e->name] = *saved;
        else
          env.erase(e->name);
        return out;
      }
      case SExpr::Kind::Loop: {
        SVal v = eval(e->args[0], env);
        auto saved = env.find(e->name) != env.end()
                         ? std::optional<SVal>(env[e->name])
                         : std::nullopt;
        env[e->name] = v;
        while (sAsBool(eval(e->args[1], env)))
          env[e->name] = eval(e->args[2], env);
        SVal out = env[e->name];
        if (saved)
          env[e->name] = *saved;
        else
          env.erase(e->name);
        return out;
      }
    }
    throw std::logic_error("unknown kernel source node");
  }

  std::size_t idx(const SPtr& e, std::map<std::string, SVal>& env,
                  std::size_t bound, const char* what) const {
    std::int64_t i = sAsInt(eval(e, env));
    if (i < 0 || static_cast<std::size_t>(i) >= bound)
      throw EvalError(std::string("kernel source: ") + what +
                      " index out of range: " + std::to_string(i));
    return static_cast<std::size_t>(i);
  }

  static SVal binop(const std::string& op, const SVal& a, const SVal& b) {
    bool ints = std::holds_alternative<std::int64_t>(a) &&
                std::holds_alternative<std::int64_t>(b);
    if (op == "+") {
      if (ints) return std::get<std::int64_t>(a) + std::get<std::int64_t>(b);
      return sAsReal(a) + sAsReal(b);
    }
    if (op == "-") {
      if (ints) return std::get<std::int64_t>(a) - std::get<std::int64_t>(b);
      return sAsReal(a) - sAsReal(b);
    }
    if (op == "*") return sAsReal(a) * sAsReal(b);
    if (op == "/") {
      double d = sAsReal(b);
      if (d == 0.0) throw EvalError("kernel source: division by zero");
      return sAsReal(a) / d;
    }
    if (op == "<") {
      if (ints) return std::get<std::int64_t>(a) < std::get<std::int64_t>(b);
      return sAsReal(a) < sAsReal(b);
    }
    if (op == "<=") {
      if (ints) return std::get<std::int64_t>(a) <= std::get<std::int64_t>(b);
      return sAsReal(a) <= sAsReal(b);
    }
    if (op == "==") {
      if (ints) return std::get<std::int64_t>(a) == std::get<std::int64_t>(b);
      return sAsReal(a) == sAsReal(b);
    }
    if (op == "&") return sAsBool(a) && sAsBool(b);
    if (op == "|") return sAsBool(a) || sAsBool(b);
    throw std::logic_error("unknown kernel source operator " + op);
  }
};

}  // namespace

double interpretKernelSource(const std::string& source, const KernelInput& in,
                             const Party& p1, const Party& p2) {
  auto [rows, body] = SrcParser(source).parse();
  std::map<std::string, SVal> env;
  env["t0"] = std::int64_t{0};
  SVal v = SrcEval{rows, in, p1, p2}.eval(body, env);
  if (const auto* p = std::get_if<double>(&v)) return *p;
  throw EvalError("kernel source did not evaluate to a real");
}

}  // namespace cltk
