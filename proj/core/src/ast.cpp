#include "specjudge/ast.h"

#include <set>

namespace specjudge {

namespace {

bool eqVec(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structurallyEqual(a[i], b[i])) return false;
  }
  return true;
}

struct EqVisitor {
  const ExprNode& other;

  bool operator()(const BoolLit& a) const { return a.value == std::get<BoolLit>(other).value; }
  bool operator()(const IntLit& a) const { return a.value == std::get<IntLit>(other).value; }
  bool operator()(const StrLit& a) const {
    const auto& b = std::get<StrLit>(other);
    return a.value == b.value && a.isChar == b.isChar;
  }
  bool operator()(const SeqDisplay& a) const { return eqVec(a.elems, std::get<SeqDisplay>(other).elems); }
  bool operator()(const VarRef& a) const { return a.name == std::get<VarRef>(other).name; }
  bool operator()(const Unary& a) const {
    const auto& b = std::get<Unary>(other);
    return a.op == b.op && structurallyEqual(a.operand, b.operand);
  }
  bool operator()(const Binary& a) const {
    const auto& b = std::get<Binary>(other);
    return a.op == b.op && structurallyEqual(a.lhs, b.lhs) && structurallyEqual(a.rhs, b.rhs);
  }
  bool operator()(const Index& a) const {
    const auto& b = std::get<Index>(other);
    return structurallyEqual(a.seq, b.seq) && structurallyEqual(a.index, b.index);
  }
  bool operator()(const Slice& a) const {
    const auto& b = std::get<Slice>(other);
    return structurallyEqual(a.seq, b.seq) && structurallyEqual(a.lo, b.lo) &&
           structurallyEqual(a.hi, b.hi);
  }
  bool operator()(const Length& a) const { return structurallyEqual(a.array, std::get<Length>(other).array); }
  bool operator()(const Cardinality& a) const {
    return structurallyEqual(a.operand, std::get<Cardinality>(other).operand);
  }
  bool operator()(const Quantifier& a) const {
    const auto& b = std::get<Quantifier>(other);
    return a.kind == b.kind && a.vars == b.vars && structurallyEqual(a.body, b.body);
  }
  bool operator()(const Call& a) const {
    const auto& b = std::get<Call>(other);
    return a.callee == b.callee && eqVec(a.args, b.args);
  }
  bool operator()(const Ite& a) const {
    const auto& b = std::get<Ite>(other);
    return structurallyEqual(a.cond, b.cond) && structurallyEqual(a.thenExpr, b.thenExpr) &&
           structurallyEqual(a.elseExpr, b.elseExpr);
  }
  bool operator()(const Let& a) const {
    const auto& b = std::get<Let>(other);
    return a.name == b.name && structurallyEqual(a.value, b.value) && structurallyEqual(a.body, b.body);
  }
};

}  // namespace

bool structurallyEqual(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(EqVisitor{b.node}, a.node);
}

bool structurallyEqual(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurallyEqual(*a, *b);
}

void forEachChild(const Expr& e, const std::function<void(const ExprPtr&)>& fn) {
  auto visit = [&](const ExprPtr& p) {
    if (p) fn(p);
  };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SeqDisplay>) {
          for (const auto& x : n.elems) visit(x);
        } else if constexpr (std::is_same_v<T, Unary>) {
          visit(n.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          visit(n.lhs);
          visit(n.rhs);
        } else if constexpr (std::is_same_v<T, Index>) {
          visit(n.seq);
          visit(n.index);
        } else if constexpr (std::is_same_v<T, Slice>) {
          visit(n.seq);
          visit(n.lo);
          visit(n.hi);
        } else if constexpr (std::is_same_v<T, Length>) {
          visit(n.array);
        } else if constexpr (std::is_same_v<T, Cardinality>) {
          visit(n.operand);
        } else if constexpr (std::is_same_v<T, Quantifier>) {
          visit(n.body);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& x : n.args) visit(x);
        } else if constexpr (std::is_same_v<T, Ite>) {
          visit(n.cond);
          visit(n.thenExpr);
          visit(n.elseExpr);
        } else if constexpr (std::is_same_v<T, Let>) {
          visit(n.value);
          visit(n.body);
        }
      },
      e.node);
}

void walk(const ExprPtr& e, const std::function<void(const Expr&)>& fn) {
  if (!e) return;
  fn(*e);
  forEachChild(*e, [&](const ExprPtr& c) { walk(c, fn); });
}

std::string_view spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::In: return "in";
    case BinaryOp::NotIn: return "!in";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    case BinaryOp::Implies: return "==>";
    case BinaryOp::Explies: return "<==";
    case BinaryOp::Iff: return "<==>";
  }
  return "?";
}

bool isRelational(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
    case BinaryOp::In:
    case BinaryOp::NotIn: return true;
    default: return false;
  }
}

void collectConjuncts(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (const auto* b = e->as<Binary>(); b && b->op == BinaryOp::And) {
    collectConjuncts(b->lhs, out);
    collectConjuncts(b->rhs, out);
    return;
  }
  out.push_back(e);
}

namespace {

ExprPtr substituteImpl(const ExprPtr& e, const std::function<ExprPtr(const std::string&)>& lookup,
                       std::set<std::string>& shadowed) {
  if (!e) return e;
  const SourceLoc loc = e->loc;
  auto rec = [&](const ExprPtr& c) { return substituteImpl(c, lookup, shadowed); };
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRef>) {
          if (shadowed.count(n.name)) return e;
          if (auto r = lookup(n.name)) return r;
          return e;
        } else if constexpr (std::is_same_v<T, SeqDisplay>) {
          SeqDisplay out;
          for (const auto& x : n.elems) out.elems.push_back(rec(x));
          return makeExpr(loc, std::move(out));
        } else if constexpr (std::is_same_v<T, Unary>) {
          return makeExpr(loc, Unary{n.op, rec(n.operand)});
        } else if constexpr (std::is_same_v<T, Binary>) {
          return makeExpr(loc, Binary{n.op, rec(n.lhs), rec(n.rhs)});
        } else if constexpr (std::is_same_v<T, Index>) {
          return makeExpr(loc, Index{rec(n.seq), rec(n.index)});
        } else if constexpr (std::is_same_v<T, Slice>) {
          return makeExpr(loc, Slice{rec(n.seq), rec(n.lo), rec(n.hi)});
        } else if constexpr (std::is_same_v<T, Length>) {
          return makeExpr(loc, Length{rec(n.array)});
        } else if constexpr (std::is_same_v<T, Cardinality>) {
          return makeExpr(loc, Cardinality{rec(n.operand)});
        } else if constexpr (std::is_same_v<T, Quantifier>) {
          std::vector<std::string> added;
          for (const auto& v : n.vars) {
            if (shadowed.insert(v.name).second) added.push_back(v.name);
          }
          auto body = rec(n.body);
          for (const auto& a : added) shadowed.erase(a);
          return makeExpr(loc, Quantifier{n.kind, n.vars, body});
        } else if constexpr (std::is_same_v<T, Call>) {
          Call out{n.callee, {}};
          for (const auto& x : n.args) out.args.push_back(rec(x));
          return makeExpr(loc, std::move(out));
        } else if constexpr (std::is_same_v<T, Ite>) {
          return makeExpr(loc, Ite{rec(n.cond), rec(n.thenExpr), rec(n.elseExpr)});
        } else if constexpr (std::is_same_v<T, Let>) {
          auto value = rec(n.value);
          bool added = shadowed.insert(n.name).second;
          auto body = rec(n.body);
          if (added) shadowed.erase(n.name);
          return makeExpr(loc, Let{n.name, value, body});
        } else {
          return e;
        }
      },
      e->node);
}

}  // namespace

ExprPtr substitute(const ExprPtr& e, const std::function<ExprPtr(const std::string&)>& lookup) {
  std::set<std::string> shadowed;
  return substituteImpl(e, lookup, shadowed);
}

}  // namespace specjudge
