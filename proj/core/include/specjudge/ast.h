#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specjudge/source.h"
#include "specjudge/value.h"

namespace specjudge {

struct Expr;
/// Expression trees are immutable once built and shared freely.
using ExprPtr = std::shared_ptr<const Expr>;

enum class UnaryOp { Not, Neg };

enum class BinaryOp {
  Add, Sub, Mul, Div, Mod,
  Eq, Ne, Lt, Le, Gt, Ge, In, NotIn,
  And, Or, Implies, Explies, Iff,
};

enum class QuantKind { Forall, Exists };

struct BoolLit {
  bool value = false;
};

struct IntLit {
  BigInt value;
};

/// String literal; a char literal is a one-character string with `isChar`.
struct StrLit {
  std::string value;
  bool isChar = false;
};

/// `[e1, ..., en]`
struct SeqDisplay {
  std::vector<ExprPtr> elems;
};

struct VarRef {
  std::string name;
};

struct Unary {
  UnaryOp op;
  ExprPtr operand;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

/// `s[i]`
struct Index {
  ExprPtr seq;
  ExprPtr index;
};

/// `s[lo..hi]`; either bound may be null.
struct Slice {
  ExprPtr seq;
  ExprPtr lo;
  ExprPtr hi;
};

/// `a.Length`
struct Length {
  ExprPtr array;
};

/// `|s|`
struct Cardinality {
  ExprPtr operand;
};

struct BoundVar {
  std::string name;
  std::string typeName;  // "", "int", "nat" or "char"
  friend bool operator==(const BoundVar&, const BoundVar&) = default;
};

/// `forall x, y :: body`. A range `| r` is folded into the body when parsed
/// (`r ==> body` for forall, `r && body` for exists).
struct Quantifier {
  QuantKind kind;
  std::vector<BoundVar> vars;
  ExprPtr body;
};

struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
};

struct Ite {
  ExprPtr cond;
  ExprPtr thenExpr;
  ExprPtr elseExpr;
};

/// `var name := value; body`
struct Let {
  std::string name;
  ExprPtr value;
  ExprPtr body;
};

using ExprNode = std::variant<BoolLit, IntLit, StrLit, SeqDisplay, VarRef, Unary, Binary, Index,
                              Slice, Length, Cardinality, Quantifier, Call, Ite, Let>;

struct Expr {
  SourceLoc loc;
  ExprNode node;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

template <typename T>
ExprPtr makeExpr(SourceLoc loc, T node) {
  return std::make_shared<const Expr>(Expr{loc, ExprNode(std::move(node))});
}

/// Structural equality, ignoring source locations.
bool structurallyEqual(const Expr& a, const Expr& b);
bool structurallyEqual(const ExprPtr& a, const ExprPtr& b);

/// Calls `fn` on each direct child of `e` (null slice bounds are skipped).
void forEachChild(const Expr& e, const std::function<void(const ExprPtr&)>& fn);

/// Pre-order walk over the whole tree.
void walk(const ExprPtr& e, const std::function<void(const Expr&)>& fn);

std::string_view spelling(BinaryOp op);

bool isRelational(BinaryOp op);

/// Flattens nested `&&` into a list of conjuncts.
void collectConjuncts(const ExprPtr& e, std::vector<ExprPtr>& out);

/// Replaces free occurrences of variables by the mapped expressions.
ExprPtr substitute(const ExprPtr& e,
                   const std::function<ExprPtr(const std::string&)>& lookup);

}  // namespace specjudge
