#pragma once

#include <string>

#include "specjudge/ast.h"

namespace specjudge {

/// Renders an expression as Dafny source. Parentheses are inserted exactly
/// where re-parsing would otherwise build a different tree, so
/// parseExpression(printExpr(e)) is structurally equal to e.
std::string printExpr(const ExprPtr& e);

}  // namespace specjudge
