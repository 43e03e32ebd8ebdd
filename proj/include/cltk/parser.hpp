#pragma once

#include <string>

#include "cltk/ast.hpp"

namespace cltk {

// Parse the keyword/parenthesis contract syntax:
//   zero | transfer(p1,p2,ASSET) | scale(e,c) | translate(t,c)
//   both(c1,c2) | all[c1,...,cn] | if(e, c1, c2) | if(e, t, c1, c2)
//   let x = e in c
// Expressions: obs(LABEL,i), infix + - * / < <= == > >= & |, cond(b,e1,e2),
// acc(x. e, d, e0), real/bool literals. `>`/`>=` desugar to lt/leq with the
// operands swapped.
ContrPtr parseContract(const std::string& text);
ExpPtr parseExp(const std::string& text);

}  // namespace cltk
