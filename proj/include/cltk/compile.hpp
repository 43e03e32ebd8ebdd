#pragma once

#include <cstdint>
#include <optional>

#include "cltk/ast.hpp"
#include "cltk/errors.hpp"
#include "cltk/il.hpp"

namespace cltk {

struct CompileError : UnsupportedError {
  explicit CompileError(const std::string& construct, const std::string& path)
      : UnsupportedError("unsupported construct " + construct + " at " + path) {}
};

// Fully folded numeral value, if the template expression is one.
std::optional<std::int64_t> iltzAsNum(const ILTExprZPtr& t);
std::optional<std::uint64_t> iltAsNum(const ILTExprPtr& t);

// Smart constructors: constant-fold numeral leaves (and additive zero),
// otherwise build a syntactic plus. Semantics is preserved.
ILTExprZPtr tplusSmart(const ILTExprZPtr& a, const ILTExprZPtr& b);
ILTExprPtr tplusSmartT(const ILTExprPtr& a, const ILTExprPtr& b);

ILPtr fromExp(const ExpPtr& e, const ILTExprPtr& t0);
ILPtr fromContr(const ContrPtr& c, const ILTExprPtr& t0);

// Convenience entry points starting at t0 = 0. These bump the compile
// counter used by the no-recompilation checks.
ILPtr compileContract(const ContrPtr& c);

// Instrumentation: number of compileContract invocations since the last
// reset.
std::uint64_t compileCount();
void resetCompileCount();

}  // namespace cltk
