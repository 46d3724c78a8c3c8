#include "specjudge/resolver.h"

#include <deque>
#include <functional>
#include <set>

namespace specjudge {

StaticType staticTypeOf(ValueType t) {
  switch (t) {
    case ValueType::Bool: return StaticType::Bool;
    case ValueType::Int: return StaticType::Int;
    case ValueType::Str: return StaticType::Str;
    case ValueType::ArrayInt: return StaticType::ArrayInt;
    case ValueType::SeqInt: return StaticType::SeqInt;
  }
  return StaticType::Unknown;
}

namespace {

std::string_view name(StaticType t) {
  switch (t) {
    case StaticType::Bool: return "bool";
    case StaticType::Int: return "int";
    case StaticType::Char: return "char";
    case StaticType::Str: return "string";
    case StaticType::ArrayInt: return "array<int>";
    case StaticType::SeqInt: return "seq<int>";
    case StaticType::Unknown: return "?";
  }
  return "?";
}

bool isSeqLike(StaticType t) {
  return t == StaticType::SeqInt || t == StaticType::ArrayInt || t == StaticType::Str ||
         t == StaticType::Unknown;
}

bool compatible(StaticType a, StaticType b) {
  if (a == b || a == StaticType::Unknown || b == StaticType::Unknown) return true;
  // Arrays and int sequences share a runtime representation.
  auto coll = [](StaticType t) { return t == StaticType::ArrayInt || t == StaticType::SeqInt; };
  return coll(a) && coll(b);
}

StaticType elementType(StaticType seq) {
  switch (seq) {
    case StaticType::Str: return StaticType::Char;
    case StaticType::ArrayInt:
    case StaticType::SeqInt: return StaticType::Int;
    default: return StaticType::Unknown;
  }
}

using Scope = std::map<std::string, StaticType>;

class Resolver {
 public:
  explicit Resolver(const std::map<std::string, FunctionDef>& all) : all_(all) {}

  StaticType check(const ExprPtr& e, const Scope& scope, const std::string& owner) {
    owner_ = owner;
    return type(e, scope);
  }

  void expectType(const ExprPtr& e, StaticType want, const Scope& scope, std::string_view what) {
    StaticType got = type(e, scope);
    if (!compatible(got, want)) {
      throw ParseError(std::string(what) + " must be " + std::string(name(want)) + ", got " +
                           std::string(name(got)),
                       e->loc, "type error");
    }
  }

  std::deque<std::string> pending;
  std::set<std::string> reached;
  std::map<std::string, std::set<std::string>> calls;

 private:
  [[noreturn]] void typeError(const Expr& e, const std::string& msg) {
    throw ParseError(msg, e.loc, "type error");
  }

  StaticType type(const ExprPtr& e, const Scope& scope) {
    return std::visit([&](const auto& n) { return typeOf(*e, n, scope); }, e->node);
  }

  StaticType typeOf(const Expr&, const BoolLit&, const Scope&) { return StaticType::Bool; }
  StaticType typeOf(const Expr&, const IntLit&, const Scope&) { return StaticType::Int; }
  StaticType typeOf(const Expr&, const StrLit& s, const Scope&) {
    return s.isChar ? StaticType::Char : StaticType::Str;
  }

  StaticType typeOf(const Expr& e, const SeqDisplay& d, const Scope& scope) {
    StaticType elem = StaticType::Unknown;
    for (const auto& x : d.elems) {
      StaticType t = type(x, scope);
      if (elem == StaticType::Unknown) elem = t;
      if (t != elem) typeError(e, "sequence display mixes element types");
    }
    if (elem == StaticType::Unknown) return StaticType::Unknown;
    if (elem == StaticType::Int) return StaticType::SeqInt;
    if (elem == StaticType::Char) return StaticType::Str;
    typeError(e, "sequence displays of " + std::string(name(elem)) + " are not supported");
  }

  StaticType typeOf(const Expr& e, const VarRef& v, const Scope& scope) {
    auto it = scope.find(v.name);
    if (it != scope.end()) return it->second;
    if (all_.count(v.name)) typeError(e, "helper '" + v.name + "' used as a value");
    throw ParseError("unresolved identifier '" + v.name + "'", e.loc, v.name);
  }

  StaticType typeOf(const Expr& e, const Unary& u, const Scope& scope) {
    if (u.op == UnaryOp::Not) {
      expectType(u.operand, StaticType::Bool, scope, "operand of '!'");
      return StaticType::Bool;
    }
    expectType(u.operand, StaticType::Int, scope, "operand of unary '-'");
    (void)e;
    return StaticType::Int;
  }

  StaticType typeOf(const Expr& e, const Binary& b, const Scope& scope) {
    switch (b.op) {
      case BinaryOp::And:
      case BinaryOp::Or:
      case BinaryOp::Implies:
      case BinaryOp::Explies:
      case BinaryOp::Iff:
        expectType(b.lhs, StaticType::Bool, scope, "operand of '" + std::string(spelling(b.op)) + "'");
        expectType(b.rhs, StaticType::Bool, scope, "operand of '" + std::string(spelling(b.op)) + "'");
        return StaticType::Bool;
      case BinaryOp::Add: {
        StaticType l = type(b.lhs, scope);
        StaticType r = type(b.rhs, scope);
        if (!compatible(l, r)) typeError(e, "operands of '+' have different types");
        StaticType t = l == StaticType::Unknown ? r : l;
        if (t == StaticType::Int || isSeqLike(t)) return t == StaticType::ArrayInt ? StaticType::SeqInt : t;
        typeError(e, "'+' is not defined on " + std::string(name(t)));
      }
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
      case BinaryOp::Mod:
        expectType(b.lhs, StaticType::Int, scope, "arithmetic operand");
        expectType(b.rhs, StaticType::Int, scope, "arithmetic operand");
        return StaticType::Int;
      case BinaryOp::Eq:
      case BinaryOp::Ne: {
        StaticType l = type(b.lhs, scope);
        StaticType r = type(b.rhs, scope);
        if (!compatible(l, r)) {
          typeError(e, "cannot compare " + std::string(name(l)) + " with " + std::string(name(r)));
        }
        return StaticType::Bool;
      }
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: {
        StaticType l = type(b.lhs, scope);
        StaticType r = type(b.rhs, scope);
        if (!compatible(l, r) || l == StaticType::Bool || l == StaticType::ArrayInt) {
          typeError(e, "'" + std::string(spelling(b.op)) + "' is not defined on " + std::string(name(l)) +
                           " and " + std::string(name(r)));
        }
        return StaticType::Bool;
      }
      case BinaryOp::In:
      case BinaryOp::NotIn: {
        StaticType coll = type(b.rhs, scope);
        if (!isSeqLike(coll)) typeError(e, "right operand of 'in' must be a sequence");
        StaticType elem = type(b.lhs, scope);
        if (!compatible(elem, elementType(coll))) typeError(e, "element type does not match the sequence");
        return StaticType::Bool;
      }
    }
    return StaticType::Unknown;
  }

  StaticType typeOf(const Expr& e, const Index& i, const Scope& scope) {
    StaticType s = type(i.seq, scope);
    if (!isSeqLike(s)) typeError(e, "cannot index a value of type " + std::string(name(s)));
    expectType(i.index, StaticType::Int, scope, "index");
    return elementType(s);
  }

  StaticType typeOf(const Expr& e, const Slice& sl, const Scope& scope) {
    StaticType s = type(sl.seq, scope);
    if (!isSeqLike(s)) typeError(e, "cannot slice a value of type " + std::string(name(s)));
    if (sl.lo) expectType(sl.lo, StaticType::Int, scope, "slice bound");
    if (sl.hi) expectType(sl.hi, StaticType::Int, scope, "slice bound");
    return s == StaticType::ArrayInt ? StaticType::SeqInt : s;
  }

  StaticType typeOf(const Expr& e, const Length& l, const Scope& scope) {
    StaticType s = type(l.array, scope);
    if (s != StaticType::ArrayInt && s != StaticType::Unknown) {
      typeError(e, "'.Length' needs an array, got " + std::string(name(s)));
    }
    return StaticType::Int;
  }

  StaticType typeOf(const Expr& e, const Cardinality& c, const Scope& scope) {
    StaticType s = type(c.operand, scope);
    if (s != StaticType::SeqInt && s != StaticType::Str && s != StaticType::Unknown) {
      typeError(e, "'|...|' needs a sequence, got " + std::string(name(s)));
    }
    return StaticType::Int;
  }

  StaticType typeOf(const Expr& e, const Quantifier& q, const Scope& scope) {
    Scope inner = scope;
    for (const auto& v : q.vars) {
      StaticType t = StaticType::Int;
      if (v.typeName == "char") {
        t = StaticType::Char;
      } else if (v.typeName.empty()) {
        t = inferBoundType(v.name, q.body, scope);
      }
      inner[v.name] = t;
    }
    StaticType body = type(q.body, inner);
    if (!compatible(body, StaticType::Bool)) typeError(e, "quantifier body must be bool");
    return StaticType::Bool;
  }

  /// An unannotated bound variable is a char when it is drawn from a string
  /// (`c in s`), otherwise an int.
  StaticType inferBoundType(const std::string& var, const ExprPtr& body, const Scope& scope) {
    StaticType result = StaticType::Int;
    walk(body, [&](const Expr& x) {
      const auto* b = x.as<Binary>();
      if (!b || (b->op != BinaryOp::In && b->op != BinaryOp::NotIn)) return;
      const auto* v = b->lhs->as<VarRef>();
      if (!v || v->name != var) return;
      try {
        if (type(b->rhs, scope) == StaticType::Str) result = StaticType::Char;
      } catch (const ParseError&) {
        // The rhs may mention other bound variables; the full check reports it.
      }
    });
    return result;
  }

  StaticType typeOf(const Expr& e, const Call& c, const Scope& scope) {
    auto it = all_.find(c.callee);
    if (it == all_.end()) throw ParseError("unresolved identifier '" + c.callee + "'", e.loc, c.callee);
    const FunctionDef& f = it->second;
    if (f.deferredError) throw *f.deferredError;
    if (f.params.size() != c.args.size()) {
      typeError(e, "'" + c.callee + "' expects " + std::to_string(f.params.size()) + " arguments, got " +
                       std::to_string(c.args.size()));
    }
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      expectType(c.args[i], staticTypeOf(f.params[i].type), scope,
                 "argument '" + f.params[i].name + "' of '" + c.callee + "'");
    }
    calls[owner_].insert(c.callee);
    if (reached.insert(c.callee).second) pending.push_back(c.callee);
    return staticTypeOf(f.returnType);
  }

  StaticType typeOf(const Expr& e, const Ite& i, const Scope& scope) {
    expectType(i.cond, StaticType::Bool, scope, "if condition");
    StaticType a = type(i.thenExpr, scope);
    StaticType b = type(i.elseExpr, scope);
    if (!compatible(a, b)) typeError(e, "if branches have different types");
    return a == StaticType::Unknown ? b : a;
  }

  StaticType typeOf(const Expr&, const Let& l, const Scope& scope) {
    Scope inner = scope;
    inner[l.name] = type(l.value, scope);
    return type(l.body, inner);
  }

  const std::map<std::string, FunctionDef>& all_;
  std::string owner_;
};

/// Any cycle through more than one helper.
void rejectMutualRecursion(const std::map<std::string, std::set<std::string>>& calls) {
  std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::function<void(const std::string&)> dfs = [&](const std::string& n) {
    state[n] = 1;
    stack.push_back(n);
    auto it = calls.find(n);
    if (it != calls.end()) {
      for (const auto& m : it->second) {
        if (m == n) continue;
        if (state[m] == 1) {
          throw ParseError("mutual recursion between '" + m + "' and '" + n + "' is not supported",
                           SourceLoc{}, "mutual recursion");
        }
        if (state[m] == 0) dfs(m);
      }
    }
    stack.pop_back();
    state[n] = 2;
  };
  for (const auto& [n, _] : calls) {
    if (state[n] == 0) dfs(n);
  }
}

}  // namespace

void resolveSpec(SpecUnit& unit, const std::map<std::string, FunctionDef>& all,
                 const std::vector<std::string>& sourceOrder) {
  Resolver r(all);
  Scope params;
  std::set<std::string> names;
  for (const auto* list : {&unit.method.inputs, &unit.method.outputs}) {
    for (const auto& p : *list) {
      if (!names.insert(p.name).second) {
        throw ParseError("duplicate parameter name '" + p.name + "'", SourceLoc{});
      }
      params[p.name] = staticTypeOf(p.type);
    }
  }

  Scope inputsOnly;
  for (const auto& p : unit.method.inputs) inputsOnly[p.name] = staticTypeOf(p.type);
  for (const auto& c : unit.preconditions) r.expectType(c.expr, StaticType::Bool, inputsOnly, "requires clause");
  for (const auto& c : unit.ensures) r.expectType(c.expr, StaticType::Bool, params, "ensures clause");
  while (!r.pending.empty()) {
    std::string h = r.pending.front();
    r.pending.pop_front();
    const FunctionDef& f = all.at(h);
    Scope scope;
    for (const auto& p : f.params) scope[p.name] = staticTypeOf(p.type);
    for (const auto& c : f.preconditions) {
      r.check(c.expr, scope, h);
    }
    StaticType body = r.check(f.body, scope, h);
    if (!compatible(body, staticTypeOf(f.returnType))) {
      throw ParseError("body of '" + h + "' does not match its result type", f.loc, "type error");
    }
  }
  rejectMutualRecursion(r.calls);

  unit.helpers.clear();
  unit.helperOrder.clear();
  for (const auto& n : sourceOrder) {
    if (!r.reached.count(n)) continue;
    FunctionDef f = all.at(n);
    auto it = r.calls.find(n);
    f.isRecursive = it != r.calls.end() && it->second.count(n) > 0;
    unit.helpers.emplace(n, std::move(f));
    unit.helperOrder.push_back(n);
  }
}

}  // namespace specjudge
