#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cltk/ast.hpp"
#include "cltk/env.hpp"
#include "cltk/trace.hpp"

namespace cltk {

enum class Type { Real, Bool };

const char* typeName(Type t);

// Typing context: kinds of observable labels (defaulting to Real) and the
// types of bound expression variables.
struct TypeCtx {
  std::map<std::string, Type> labels;
  std::map<std::string, Type> vars;

  Type labelKind(const std::string& label) const {
    auto it = labels.find(label);
    return it == labels.end() ? Type::Real : it->second;
  }
};

Type typeCheckExp(const TypeCtx& ctx, const ExpPtr& e);
void typeCheckContr(const TypeCtx& ctx, const ContrPtr& c);

// Semantics of template expressions.
std::uint64_t tSem(const TExpr& t, const TEnv& tenv);

Value evalExp(const ExpPtr& e, VarEnv& vars, const ExtEnv& env);

// Denotational trace semantics.
Trace contractTrace(const ContrPtr& c, VarEnv& vars, const ExtEnv& env,
                    const TEnv& tenv);
Trace contractTrace(const ContrPtr& c, const ExtEnv& env, const TEnv& tenv);

// Replace every template variable by its binding in tenv.
ContrPtr instantiate(const ContrPtr& c, const TEnv& tenv);

bool isTemplateClosed(const ContrPtr& c);

// Conservative upper bound on the contract length: the trace is the zero
// transfer at every day >= horizon.
std::uint64_t horizon(const ContrPtr& c, const TEnv& tenv);

// One-day advancement of a template-closed contract: the advanced contract
// and the transfers due at day 0.
std::pair<ContrPtr, Trans> reduceStep(const ContrPtr& c, const ExtEnv& env);

// n-fold reduceStep with environment shifting.
std::pair<ContrPtr, std::vector<Trans>> advance(const ContrPtr& c,
                                                const ExtEnv& env,
                                                std::uint64_t n);

}  // namespace cltk
