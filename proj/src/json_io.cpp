#include "cltk/json_io.hpp"

#include "cltk/errors.hpp"

namespace cltk {

namespace {

[[noreturn]] void badJson(const std::string& what) {
  throw ParseError(0, 0, "malformed JSON: " + what);
}

std::string kindOf(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    badJson("node without a \"kind\" tag");
  return j["kind"].get<std::string>();
}

Json iltToJson(const ILTExprPtr& t);
ILTExprPtr iltFromJson(const Json& j);
Json iltzToJson(const ILTExprZPtr& t);
ILTExprZPtr iltzFromJson(const Json& j);

Json iltToJson(const ILTExprPtr& t) {
  if (const auto* p = std::get_if<ILTExpr::Tplus>(&t->node))
    return {{"kind", "tplus"},
            {"left", iltToJson(p->left)},
            {"right", iltToJson(p->right)}};
  return {{"kind", "texpr"}, {"value", texprToJson(std::get<TExpr>(t->node))}};
}

ILTExprPtr iltFromJson(const Json& j) {
  std::string k = kindOf(j);
  if (k == "tplus") return mkTplus(iltFromJson(j.at("left")), iltFromJson(j.at("right")));
  if (k == "texpr") return mkTexpr(texprFromJson(j.at("value")));
  badJson("unknown ILTExpr kind " + k);
}

Json iltzToJson(const ILTExprZPtr& t) {
  if (const auto* p = std::get_if<ILTExprZ::TplusZ>(&t->node))
    return {{"kind", "tplusz"},
            {"left", iltzToJson(p->left)},
            {"right", iltzToJson(p->right)}};
  if (const auto* p = std::get_if<ILTExprPtr>(&t->node))
    return {{"kind", "texprz"}, {"value", iltToJson(*p)}};
  return {{"kind", "tnumz"},
          {"value", std::get<ILTExprZ::TnumZ>(t->node).value}};
}

ILTExprZPtr iltzFromJson(const Json& j) {
  std::string k = kindOf(j);
  if (k == "tplusz")
    return mkTplusZ(iltzFromJson(j.at("left")), iltzFromJson(j.at("right")));
  if (k == "texprz") return mkTexprZ(iltFromJson(j.at("value")));
  if (k == "tnumz") return mkTnumZ(j.at("value").get<std::int64_t>());
  badJson("unknown ILTExprZ kind " + k);
}

}  // namespace

Json texprToJson(const TExpr& t) {
  if (t.isNum()) return {{"kind", "tnum"}, {"value", t.num}};
  return {{"kind", "tvar"}, {"name", t.var}};
}

TExpr texprFromJson(const Json& j) {
  std::string k = kindOf(j);
  if (k == "tnum") return TExpr::number(j.at("value").get<std::uint64_t>());
  if (k == "tvar") return TExpr::variable(j.at("name").get<std::string>());
  badJson("unknown TExpr kind " + k);
}

Json expToJson(const ExpPtr& e) {
  struct Visitor {
    Json operator()(const Exp::OpE& x) const {
      Json args = Json::array();
      for (const auto& a : x.args) args.push_back(expToJson(a));
      return {{"kind", "op"}, {"op", opName(x.op)}, {"args", args}};
    }
    Json operator()(const Exp::Obs& x) const {
      return {{"kind", "obs"}, {"label", x.label}, {"offset", x.offset}};
    }
    Json operator()(const Exp::RealLit& x) const {
      return {{"kind", "real"}, {"value", x.value}};
    }
    Json operator()(const Exp::BoolLit& x) const {
      return {{"kind", "bool"}, {"value", x.value}};
    }
    Json operator()(const Exp::VarE& x) const {
      return {{"kind", "var"}, {"name", x.name}};
    }
    Json operator()(const Exp::Acc& x) const {
      return {{"kind", "acc"},
              {"binder", x.binder},
              {"body", expToJson(x.body)},
              {"days", x.days},
              {"init", expToJson(x.init)}};
    }
  };
  return std::visit(Visitor{}, e->node);
}

namespace {

Op opFromName(const std::string& s) {
  static const std::map<std::string, Op> kOps = {
      {"add", Op::Add}, {"sub", Op::Sub},   {"mult", Op::Mult},
      {"div", Op::Div}, {"lt", Op::Lt},     {"leq", Op::Leq},
      {"eq", Op::Eq},   {"and", Op::And},   {"or", Op::Or},
      {"not", Op::Not}, {"neg", Op::Neg},   {"cond", Op::Cond}};
  auto it = kOps.find(s);
  if (it == kOps.end()) badJson("unknown operator " + s);
  return it->second;
}

}  // namespace

ExpPtr expFromJson(const Json& j) {
  std::string k = kindOf(j);
  if (k == "op") {
    std::vector<ExpPtr> args;
    for (const auto& a : j.at("args")) args.push_back(expFromJson(a));
    return mkOp(opFromName(j.at("op").get<std::string>()), std::move(args));
  }
  if (k == "obs")
    return mkObs(j.at("label").get<std::string>(),
                 j.at("offset").get<std::int64_t>());
  if (k == "real") return mkReal(j.at("value").get<double>());
  if (k == "bool") return mkBool(j.at("value").get<bool>());
  if (k == "var") return mkVar(j.at("name").get<std::string>());
  if (k == "acc")
    return mkAcc(j.at("binder").get<std::string>(), expFromJson(j.at("body")),
                 j.at("days").get<std::uint64_t>(), expFromJson(j.at("init")));
  badJson("unknown Exp kind " + k);
}

Json contractToJson(const ContrPtr& c) {
  struct Visitor {
    Json operator()(const Contr::Zero&) const { return {{"kind", "zero"}}; }
    Json operator()(const Contr::Let& x) const {
      return {{"kind", "let"},
              {"binder", x.binder},
              {"bound", expToJson(x.bound)},
              {"body", contractToJson(x.body)}};
    }
    Json operator()(const Contr::Transfer& x) const {
      return {{"kind", "transfer"},
              {"from", x.from},
              {"to", x.to},
              {"asset", x.asset}};
    }
    Json operator()(const Contr::Scale& x) const {
      return {{"kind", "scale"},
              {"factor", expToJson(x.factor)},
              {"body", contractToJson(x.body)}};
    }
    Json operator()(const Contr::Translate& x) const {
      return {{"kind", "translate"},
              {"shift", texprToJson(x.shift)},
              {"body", contractToJson(x.body)}};
    }
    Json operator()(const Contr::Both& x) const {
      return {{"kind", "both"},
              {"left", contractToJson(x.left)},
              {"right", contractToJson(x.right)}};
    }
    Json operator()(const Contr::IfWithin& x) const {
      return {{"kind", "ifwithin"},
              {"cond", expToJson(x.cond)},
              {"window", texprToJson(x.window)},
              {"then", contractToJson(x.thenC)},
              {"else", contractToJson(x.elseC)}};
    }
  };
  return std::visit(Visitor{}, c->node);
}

ContrPtr contractFromJson(const Json& j) {
  std::string k = kindOf(j);
  if (k == "zero") return mkZero();
  if (k == "let")
    return mkLet(j.at("binder").get<std::string>(), expFromJson(j.at("bound")),
                 contractFromJson(j.at("body")));
  if (k == "transfer")
    return mkTransfer(j.at("from").get<std::string>(),
                      j.at("to").get<std::string>(),
                      j.at("asset").get<std::string>());
  if (k == "scale")
    return mkScale(expFromJson(j.at("factor")), contractFromJson(j.at("body")));
  if (k == "translate")
    return mkTranslate(texprFromJson(j.at("shift")),
                       contractFromJson(j.at("body")));
  if (k == "both")
    return mkBoth(contractFromJson(j.at("left")),
                  contractFromJson(j.at("right")));
  if (k == "ifwithin")
    return mkIfWithin(expFromJson(j.at("cond")), texprFromJson(j.at("window")),
                      contractFromJson(j.at("then")),
                      contractFromJson(j.at("else")));
  badJson("unknown Contr kind " + k);
}

Json ilToJson(const ILPtr& il) {
  struct Visitor {
    Json operator()(const ILExpr::If& x) const {
      return {{"kind", "if"},
              {"cond", ilToJson(x.cond)},
              {"then", ilToJson(x.thenE)},
              {"else", ilToJson(x.elseE)}};
    }
    Json operator()(const ILExpr::FloatLit& x) const {
      return {{"kind", "float"}, {"value", x.value}};
    }
    Json operator()(const ILExpr::NatLit& x) const {
      return {{"kind", "nat"}, {"value", x.value}};
    }
    Json operator()(const ILExpr::BoolLit& x) const {
      return {{"kind", "bool"}, {"value", x.value}};
    }
    Json operator()(const ILExpr::TExprVal& x) const {
      return {{"kind", "texprval"}, {"value", iltToJson(x.value)}};
    }
    Json operator()(const ILExpr::Now&) const { return {{"kind", "now"}}; }
    Json operator()(const ILExpr::Model& x) const {
      return {{"kind", "model"},
              {"label", x.label},
              {"time", iltzToJson(x.time)}};
    }
    Json operator()(const ILExpr::UnOp& x) const {
      return {{"kind", "unop"},
              {"op", ilUnOpName(x.op)},
              {"arg", ilToJson(x.arg)}};
    }
    Json operator()(const ILExpr::BinOp& x) const {
      return {{"kind", "binop"},
              {"op", ilBinOpName(x.op)},
              {"left", ilToJson(x.left)},
              {"right", ilToJson(x.right)}};
    }
    Json operator()(const ILExpr::LoopIf& x) const {
      return {{"kind", "loopif"},
              {"cond", ilToJson(x.cond)},
              {"then", ilToJson(x.thenE)},
              {"else", ilToJson(x.elseE)},
              {"window", texprToJson(x.window)}};
    }
    Json operator()(const ILExpr::Payoff& x) const {
      return {{"kind", "payoff"},
              {"time", iltToJson(x.time)},
              {"from", x.from},
              {"to", x.to}};
    }
  };
  return std::visit(Visitor{}, il->node);
}

namespace {

ILUnOp ilUnOpFromName(const std::string& s) {
  if (s == "neg") return ILUnOp::Neg;
  if (s == "not") return ILUnOp::Not;
  badJson("unknown IL unary operator " + s);
}

ILBinOp ilBinOpFromName(const std::string& s) {
  static const std::map<std::string, ILBinOp> kOps = {
      {"add", ILBinOp::Add}, {"sub", ILBinOp::Sub}, {"mult", ILBinOp::Mult},
      {"div", ILBinOp::Div}, {"lt", ILBinOp::Lt},   {"leq", ILBinOp::Leq},
      {"eq", ILBinOp::Eq},   {"and", ILBinOp::And}, {"or", ILBinOp::Or}};
  auto it = kOps.find(s);
  if (it == kOps.end()) badJson("unknown IL binary operator " + s);
  return it->second;
}

}  // namespace

ILPtr ilFromJson(const Json& j) {
  std::string k = kindOf(j);
  if (k == "if")
    return mkIf(ilFromJson(j.at("cond")), ilFromJson(j.at("then")),
                ilFromJson(j.at("else")));
  if (k == "float") return mkFloat(j.at("value").get<double>());
  if (k == "nat") return mkNat(j.at("value").get<std::uint64_t>());
  if (k == "bool") return mkILBool(j.at("value").get<bool>());
  if (k == "texprval") return mkTExprVal(iltFromJson(j.at("value")));
  if (k == "now") return mkNow();
  if (k == "model")
    return mkModel(j.at("label").get<std::string>(),
                   iltzFromJson(j.at("time")));
  if (k == "unop")
    return mkUnOp(ilUnOpFromName(j.at("op").get<std::string>()),
                  ilFromJson(j.at("arg")));
  if (k == "binop")
    return mkBinOp(ilBinOpFromName(j.at("op").get<std::string>()),
                   ilFromJson(j.at("left")), ilFromJson(j.at("right")));
  if (k == "loopif")
    return mkLoopIf(ilFromJson(j.at("cond")), ilFromJson(j.at("then")),
                    ilFromJson(j.at("else")), texprFromJson(j.at("window")));
  if (k == "payoff")
    return mkPayoff(iltFromJson(j.at("time")), j.at("from").get<std::string>(),
                    j.at("to").get<std::string>());
  badJson("unknown ILExpr kind " + k);
}

Json tenvToJson(const TEnv& tenv) {
  Json j = Json::object();
  for (const auto& [k, v] : tenv.entries()) j[k] = v;
  return j;
}

TEnv tenvFromJson(const Json& j) {
  if (!j.is_object()) badJson("template environment must be an object");
  std::map<std::string, std::uint64_t> m;
  for (auto it = j.begin(); it != j.end(); ++it)
    m[it.key()] = it.value().get<std::uint64_t>();
  return TEnv(std::move(m));
}

ExtEnv extEnvFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("labels"))
    badJson("environment must be {\"labels\": {...}}");
  std::map<std::pair<std::string, std::int64_t>, Value> values;
  const Json& labels = j.at("labels");
  for (auto it = labels.begin(); it != labels.end(); ++it) {
    std::int64_t base = it.value().at("base").get<std::int64_t>();
    const Json& vals = it.value().at("values");
    std::int64_t day = base;
    for (const auto& v : vals) {
      if (v.is_boolean())
        values[{it.key(), day}] = v.get<bool>();
      else
        values[{it.key(), day}] = v.get<double>();
      ++day;
    }
  }
  return ExtEnv::partial(std::move(values));
}

Discount discountFromJson(const Json& j) {
  if (j.is_object() && j.contains("rate")) {
    double dayCount = j.value("dayCount", 365.0);
    return Discount::flatRate(j.at("rate").get<double>(), dayCount);
  }
  if (j.is_object() && j.contains("table"))
    return Discount::table(j.at("table").get<std::vector<double>>());
  badJson("discount must be {\"rate\": r} or {\"table\": [...]}");
}

}  // namespace cltk
