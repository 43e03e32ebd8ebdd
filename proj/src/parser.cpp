#include "cltk/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <set>
#include <vector>

#include "cltk/errors.hpp"

namespace cltk {

namespace {

const std::set<std::string> kContractKeywords = {
    "zero", "transfer", "scale", "translate", "both", "all", "if", "let"};

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind;
  std::string text;
  double numValue = 0.0;
  bool isIntegral = false;
  std::int64_t intValue = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { next(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    next();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(tok_.line, tok_.col, msg);
  }

 private:
  void next() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else if (c == '-' && pos_ + 1 < text_.size() &&
                 text_[pos_ + 1] == '-') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      tok_.kind = Token::Kind::Ident;
      tok_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lexNumber();
      return;
    }
    // Multi-char operators.
    static const char* kTwoChar[] = {"<=", ">=", "=="};
    for (const char* op : kTwoChar) {
      if (text_.compare(pos_, 2, op) == 0) {
        tok_.kind = Token::Kind::Punct;
        tok_.text = op;
        pos_ += 2;
        col_ += 2;
        return;
      }
    }
    tok_.kind = Token::Kind::Punct;
    tok_.text = std::string(1, c);
    ++pos_;
    ++col_;
  }

  void lexNumber() {
    // Digit groups separated by dots. A single dot is a decimal point;
    // multiple dots with three-digit groups are thousands separators
    // (as in the listings' 1.000.000).
    std::size_t start = pos_;
    std::vector<std::string> groups;
    std::string cur;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        cur.push_back(c);
        ++pos_;
        ++col_;
      } else if (c == '.' && pos_ + 1 < text_.size() &&
                 std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        groups.push_back(cur);
        cur.clear();
        ++pos_;
        ++col_;
      } else {
        break;
      }
    }
    groups.push_back(cur);
    tok_.kind = Token::Kind::Number;
    tok_.text = text_.substr(start, pos_ - start);
    if (groups.size() == 1) {
      tok_.isIntegral = true;
      tok_.intValue = std::strtoll(groups[0].c_str(), nullptr, 10);
      tok_.numValue = static_cast<double>(tok_.intValue);
      return;
    }
    bool grouping = groups.size() > 2;
    if (grouping) {
      for (std::size_t i = 1; i < groups.size(); ++i)
        if (groups[i].size() != 3) grouping = false;
    }
    if (grouping) {
      std::string digits;
      for (const auto& g : groups) digits += g;
      tok_.isIntegral = true;
      tok_.intValue = std::strtoll(digits.c_str(), nullptr, 10);
      tok_.numValue = static_cast<double>(tok_.intValue);
    } else {
      tok_.isIntegral = false;
      tok_.numValue = std::strtod(tok_.text.c_str(), nullptr);
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  ContrPtr contractTop() {
    ContrPtr c = contract();
    expectEnd();
    return c;
  }
  ExpPtr expTop() {
    ExpPtr e = expr();
    expectEnd();
    return e;
  }

 private:
  Lexer lex_;

  void expectEnd() {
    if (lex_.peek().kind != Token::Kind::End)
      lex_.fail("trailing input after expression");
  }

  bool atPunct(const std::string& p) const {
    return lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p;
  }
  void expectPunct(const std::string& p) {
    if (!atPunct(p)) lex_.fail("expected '" + p + "'");
    lex_.take();
  }
  bool atIdent(const std::string& s) const {
    return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == s;
  }
  std::string expectIdent() {
    if (lex_.peek().kind != Token::Kind::Ident) lex_.fail("expected identifier");
    return lex_.take().text;
  }

  TExpr texpr() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Number) {
      Token n = lex_.take();
      if (!n.isIntegral || n.intValue < 0)
        lex_.fail("temporal argument must be a natural number");
      return TExpr::number(static_cast<std::uint64_t>(n.intValue));
    }
    if (t.kind == Token::Kind::Ident) return TExpr::variable(lex_.take().text);
    lex_.fail("expected a numeral or template variable");
  }

  ContrPtr contract() {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::Ident) lex_.fail("expected a contract");
    if (atIdent("zero")) {
      lex_.take();
      return mkZero();
    }
    if (atIdent("transfer")) {
      lex_.take();
      expectPunct("(");
      std::string from = expectIdent();
      expectPunct(",");
      std::string to = expectIdent();
      expectPunct(",");
      std::string asset = expectIdent();
      expectPunct(")");
      return mkTransfer(from, to, asset);
    }
    if (atIdent("scale")) {
      lex_.take();
      expectPunct("(");
      ExpPtr e = expr();
      expectPunct(",");
      ContrPtr c = contract();
      expectPunct(")");
      return mkScale(e, c);
    }
    if (atIdent("translate")) {
      lex_.take();
      expectPunct("(");
      TExpr sh = texpr();
      expectPunct(",");
      ContrPtr c = contract();
      expectPunct(")");
      return mkTranslate(sh, c);
    }
    if (atIdent("both")) {
      lex_.take();
      expectPunct("(");
      ContrPtr a = contract();
      expectPunct(",");
      ContrPtr b = contract();
      expectPunct(")");
      return mkBoth(a, b);
    }
    if (atIdent("all")) {
      lex_.take();
      expectPunct("[");
      std::vector<ContrPtr> cs;
      cs.push_back(contract());
      while (atPunct(",")) {
        lex_.take();
        cs.push_back(contract());
      }
      expectPunct("]");
      // all[c1,...,cn] = both(c1, both(..., cn))
      ContrPtr acc = cs.back();
      for (std::size_t i = cs.size() - 1; i-- > 0;) acc = mkBoth(cs[i], acc);
      return acc;
    }
    if (atIdent("if")) {
      lex_.take();
      expectPunct("(");
      ExpPtr cond = expr();
      expectPunct(",");
      // 4-arg form carries a window; 3-arg form means window 0. A window is
      // a numeral or an identifier that is not a contract keyword.
      TExpr window = TExpr::number(0);
      const Token& la = lex_.peek();
      bool hasWindow =
          la.kind == Token::Kind::Number ||
          (la.kind == Token::Kind::Ident && !kContractKeywords.count(la.text));
      if (hasWindow) {
        window = texpr();
        expectPunct(",");
      }
      ContrPtr thenC = contract();
      expectPunct(",");
      ContrPtr elseC = contract();
      expectPunct(")");
      return mkIfWithin(cond, window, thenC, elseC);
    }
    if (atIdent("let")) {
      lex_.take();
      std::string name = expectIdent();
      expectPunct("=");
      ExpPtr e = expr();
      if (!atIdent("in")) lex_.fail("expected 'in'");
      lex_.take();
      ContrPtr c = contract();
      return mkLet(name, e, c);
    }
    lex_.fail("unknown contract construct '" + t.text + "'");
  }

  // expr := orExp
  ExpPtr expr() { return orExp(); }

  ExpPtr orExp() {
    ExpPtr e = andExp();
    while (atPunct("|")) {
      lex_.take();
      e = mkOp(Op::Or, {e, andExp()});
    }
    return e;
  }
  ExpPtr andExp() {
    ExpPtr e = cmpExp();
    while (atPunct("&")) {
      lex_.take();
      e = mkOp(Op::And, {e, cmpExp()});
    }
    return e;
  }
  ExpPtr cmpExp() {
    ExpPtr e = addExp();
    if (atPunct("<")) {
      lex_.take();
      return mkOp(Op::Lt, {e, addExp()});
    }
    if (atPunct("<=")) {
      lex_.take();
      return mkOp(Op::Leq, {e, addExp()});
    }
    if (atPunct("==")) {
      lex_.take();
      return mkOp(Op::Eq, {e, addExp()});
    }
    if (atPunct(">")) {
      lex_.take();
      return mkOp(Op::Lt, {addExp(), e});
    }
    if (atPunct(">=")) {
      lex_.take();
      return mkOp(Op::Leq, {addExp(), e});
    }
    return e;
  }
  ExpPtr addExp() {
    ExpPtr e = mulExp();
    for (;;) {
      if (atPunct("+")) {
        lex_.take();
        e = mkOp(Op::Add, {e, mulExp()});
      } else if (atPunct("-")) {
        lex_.take();
        e = mkOp(Op::Sub, {e, mulExp()});
      } else {
        return e;
      }
    }
  }
  ExpPtr mulExp() {
    ExpPtr e = unaryExp();
    for (;;) {
      if (atPunct("*")) {
        lex_.take();
        e = mkOp(Op::Mult, {e, unaryExp()});
      } else if (atPunct("/")) {
        lex_.take();
        e = mkOp(Op::Div, {e, unaryExp()});
      } else {
        return e;
      }
    }
  }
  ExpPtr unaryExp() {
    if (atPunct("-")) {
      lex_.take();
      // A minus directly on a number literal is a negative literal, so
      // negative constants round-trip through the printer unchanged.
      if (lex_.peek().kind == Token::Kind::Number) {
        Token t = lex_.take();
        return mkReal(-t.numValue);
      }
      return mkOp(Op::Neg, {unaryExp()});
    }
    if (atPunct("!")) {
      lex_.take();
      return mkOp(Op::Not, {unaryExp()});
    }
    return atom();
  }

  std::int64_t signedInt() {
    bool neg = false;
    if (atPunct("-")) {
      lex_.take();
      neg = true;
    }
    if (lex_.peek().kind != Token::Kind::Number || !lex_.peek().isIntegral)
      lex_.fail("expected an integer");
    std::int64_t v = lex_.take().intValue;
    return neg ? -v : v;
  }

  ExpPtr atom() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Number) {
      Token n = lex_.take();
      return mkReal(n.numValue);
    }
    if (atPunct("(")) {
      lex_.take();
      ExpPtr e = expr();
      expectPunct(")");
      return e;
    }
    if (t.kind == Token::Kind::Ident) {
      if (atIdent("true")) {
        lex_.take();
        return mkBool(true);
      }
      if (atIdent("false")) {
        lex_.take();
        return mkBool(false);
      }
      if (atIdent("obs")) {
        lex_.take();
        expectPunct("(");
        std::string label = expectIdent();
        expectPunct(",");
        std::int64_t off = signedInt();
        expectPunct(")");
        return mkObs(label, off);
      }
      if (atIdent("cond")) {
        lex_.take();
        expectPunct("(");
        ExpPtr b = expr();
        expectPunct(",");
        ExpPtr e1 = expr();
        expectPunct(",");
        ExpPtr e2 = expr();
        expectPunct(")");
        return mkOp(Op::Cond, {b, e1, e2});
      }
      if (atIdent("not")) {
        lex_.take();
        expectPunct("(");
        ExpPtr e = expr();
        expectPunct(")");
        return mkOp(Op::Not, {e});
      }
      if (atIdent("acc")) {
        lex_.take();
        expectPunct("(");
        std::string binder = expectIdent();
        expectPunct(".");
        ExpPtr body = expr();
        expectPunct(",");
        if (lex_.peek().kind != Token::Kind::Number ||
            !lex_.peek().isIntegral || lex_.peek().intValue < 0)
          lex_.fail("acc day count must be a natural number");
        std::uint64_t days =
            static_cast<std::uint64_t>(lex_.take().intValue);
        expectPunct(",");
        ExpPtr init = expr();
        expectPunct(")");
        return mkAcc(binder, body, days, init);
      }
      // Free expression variable (bound by let or acc).
      return mkVar(lex_.take().text);
    }
    lex_.fail("expected an expression");
  }
};

}  // namespace

ContrPtr parseContract(const std::string& text) {
  return Parser(text).contractTop();
}

ExpPtr parseExp(const std::string& text) { return Parser(text).expTop(); }

}  // namespace cltk
