#pragma once

#include <string>

#include "cltk/ast.hpp"
#include "cltk/il.hpp"

namespace cltk {

// Shortest round-trip decimal representation, always containing a decimal
// point or exponent so reals stay reals after reparsing.
std::string formatReal(double v);

std::string printTExpr(const TExpr& t);
std::string printExp(const ExpPtr& e);
std::string printContract(const ContrPtr& c);

std::string printILTExpr(const ILTExprPtr& t);
std::string printILTExprZ(const ILTExprZPtr& t);
std::string printIL(const ILPtr& il);

}  // namespace cltk
