#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "cltk/ast.hpp"
#include "cltk/env.hpp"
#include "cltk/il.hpp"

namespace cltk {

using Json = nlohmann::json;

// Canonical JSON: every AST node carries a "kind" tag; objects serialize
// with sorted keys (nlohmann's default ordering).

Json texprToJson(const TExpr& t);
TExpr texprFromJson(const Json& j);

Json expToJson(const ExpPtr& e);
ExpPtr expFromJson(const Json& j);

Json contractToJson(const ContrPtr& c);
ContrPtr contractFromJson(const Json& j);

Json ilToJson(const ILPtr& il);
ILPtr ilFromJson(const Json& j);

Json tenvToJson(const TEnv& tenv);
TEnv tenvFromJson(const Json& j);

// ExtEnv file schema:
//   {"labels": {LABEL: {"base": int, "values": [num|bool, ...]}}}
// where base is the day index of values[0].
ExtEnv extEnvFromJson(const Json& j);

Discount discountFromJson(const Json& j);

}  // namespace cltk
