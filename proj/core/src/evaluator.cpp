#include "specjudge/evaluator.h"

#include <pthread.h>

#include <algorithm>
#include <exception>
#include <set>
#include <unordered_map>

#include "specjudge/printer.h"

namespace specjudge {

std::string_view toString(EvalErrorKind kind) {
  switch (kind) {
    case EvalErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case EvalErrorKind::DivisionByZero: return "DivisionByZero";
    case EvalErrorKind::RecursionLimit: return "RecursionLimit";
    case EvalErrorKind::UnboundedQuantifier: return "UnboundedQuantifier";
    case EvalErrorKind::QuantifierDomainTooLarge: return "QuantifierDomainTooLarge";
    case EvalErrorKind::PreconditionViolation: return "PreconditionViolation";
    case EvalErrorKind::TypeError: return "TypeError";
  }
  return "?";
}

std::string_view toString(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

EvalError::EvalError(EvalErrorKind kind, std::string message, SourceLoc loc)
    : std::runtime_error(std::string(toString(kind)) + (loc.valid() ? " at " + loc.str() : "") + ": " + message),
      kind_(kind),
      loc_(loc) {}

Environment makeEnvironment(const MethodSignature& method, std::span<const Value> inputs,
                            std::span<const Value> outputs) {
  if (inputs.size() != method.inputs.size() || outputs.size() != method.outputs.size()) {
    throw ValueError("environment arity mismatch for '" + method.name + "'");
  }
  Environment env;
  auto bind = [&](const Param& p, const Value& v) {
    if (!compatibleTypes(p.type, v.type())) {
      throw ValueError("'" + p.name + "' is " + std::string(toString(p.type)) + " but the value is " +
                       std::string(toString(v.type())));
    }
    env.insert_or_assign(p.name, v.coercedTo(p.type));
  };
  for (std::size_t i = 0; i < inputs.size(); ++i) bind(method.inputs[i], inputs[i]);
  for (std::size_t i = 0; i < outputs.size(); ++i) bind(method.outputs[i], outputs[i]);
  return env;
}

namespace {

// ---- runtime values ----

struct CharV {
  unsigned char c;
};

/// A view into a shared buffer, so slicing is O(1).
struct SeqV {
  std::shared_ptr<const std::vector<BigInt>> buf;
  std::size_t off = 0;
  std::size_t len = 0;
  bool isArray = false;

  const BigInt& at(std::size_t i) const { return (*buf)[off + i]; }
  auto begin() const { return buf->begin() + static_cast<std::ptrdiff_t>(off); }
  auto end() const { return begin() + static_cast<std::ptrdiff_t>(len); }
};

using EVal = std::variant<bool, BigInt, CharV, std::string, SeqV>;

SeqV makeSeq(std::vector<BigInt> elems, bool isArray = false) {
  auto buf = std::make_shared<const std::vector<BigInt>>(std::move(elems));
  std::size_t n = buf->size();
  return SeqV{std::move(buf), 0, n, isArray};
}

EVal fromValue(const Value& v) {
  switch (v.type()) {
    case ValueType::Bool: return v.asBool();
    case ValueType::Int: return v.asInt();
    case ValueType::Str: return v.asStr();
    case ValueType::ArrayInt:
    case ValueType::SeqInt: {
      auto e = v.elements();
      return makeSeq(std::vector<BigInt>(e.begin(), e.end()), v.type() == ValueType::ArrayInt);
    }
  }
  return false;
}

Value toValue(const EVal& v) {
  return std::visit(
      [](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return Value::boolean(x);
        } else if constexpr (std::is_same_v<T, BigInt>) {
          return Value::integer(x);
        } else if constexpr (std::is_same_v<T, CharV>) {
          return Value::string(std::string(1, static_cast<char>(x.c)));
        } else if constexpr (std::is_same_v<T, std::string>) {
          return Value::string(x);
        } else {
          return Value::collection(x.isArray ? ValueType::ArrayInt : ValueType::SeqInt,
                                   std::vector<BigInt>(x.begin(), x.end()));
        }
      },
      v);
}

std::string_view kindName(const EVal& v) {
  switch (v.index()) {
    case 0: return "bool";
    case 1: return "int";
    case 2: return "char";
    case 3: return "string";
    default: return std::get<SeqV>(v).isArray ? "array<int>" : "seq<int>";
  }
}

bool evalEqual(const EVal& a, const EVal& b) {
  if (a.index() != b.index()) return false;
  switch (a.index()) {
    case 0: return std::get<bool>(a) == std::get<bool>(b);
    case 1: return std::get<BigInt>(a) == std::get<BigInt>(b);
    case 2: return std::get<CharV>(a).c == std::get<CharV>(b).c;
    case 3: return std::get<std::string>(a) == std::get<std::string>(b);
    default: {
      const auto& x = std::get<SeqV>(a);
      const auto& y = std::get<SeqV>(b);
      return x.len == y.len && std::equal(x.begin(), x.end(), y.begin());
    }
  }
}

/// Dafny's Euclidean division: the remainder is never negative.
BigInt euclidMod(const BigInt& a, const BigInt& b) {
  BigInt r = a % b;  // truncated, sign of a
  if (r < 0) r += b < 0 ? BigInt(-b) : b;
  return r;
}

BigInt euclidDiv(const BigInt& a, const BigInt& b) { return (a - euclidMod(a, b)) / b; }

// ---- static helpers over the AST ----

/// Whether any free occurrence of a name in `names` appears in `e`.
bool mentionsAny(const ExprPtr& e, const std::set<std::string>& names) {
  if (names.empty()) return false;
  if (const auto* v = e->as<VarRef>()) return names.count(v->name) > 0;
  if (const auto* q = e->as<Quantifier>()) {
    std::set<std::string> rest = names;
    for (const auto& bv : q->vars) rest.erase(bv.name);
    return mentionsAny(q->body, rest);
  }
  if (const auto* l = e->as<Let>()) {
    if (mentionsAny(l->value, names)) return true;
    std::set<std::string> rest = names;
    rest.erase(l->name);
    return mentionsAny(l->body, rest);
  }
  bool found = false;
  forEachChild(*e, [&](const ExprPtr& c) { found = found || mentionsAny(c, names); });
  return found;
}

enum class Rel { Lt, Le, Eq, Gt, Ge };

std::optional<Rel> relOf(BinaryOp op) {
  switch (op) {
    case BinaryOp::Lt: return Rel::Lt;
    case BinaryOp::Le: return Rel::Le;
    case BinaryOp::Eq: return Rel::Eq;
    case BinaryOp::Gt: return Rel::Gt;
    case BinaryOp::Ge: return Rel::Ge;
    default: return std::nullopt;
  }
}

Rel flip(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Gt;
    case Rel::Le: return Rel::Ge;
    case Rel::Gt: return Rel::Lt;
    case Rel::Ge: return Rel::Le;
    case Rel::Eq: return Rel::Eq;
  }
  return r;
}

/// `v REL rhs` with rhs free of the quantifier's variables.
struct GroundAtom {
  std::size_t var;
  Rel rel;
  ExprPtr rhs;
};

/// `v REL w + offset` between two variables of the same quantifier; the
/// offset expression is free of them (null means 0).
struct PairAtom {
  std::size_t var;
  Rel rel;
  std::size_t other;
  ExprPtr offset;
  bool negate = false;  // offset is subtracted
};

struct VarPlan {
  std::string name;
  bool isChar = false;
  bool isNat = false;
  std::vector<ExprPtr> members;  // `v in S`, S free of the quantifier's variables
  bool fallbackOk = false;
  std::vector<ExprPtr> partners;  // ground expressions v is compared with
};

struct QuantPlan {
  std::vector<VarPlan> vars;
  std::vector<GroundAtom> ground;
  std::vector<PairAtom> pairs;
};

void guardConjuncts(const Quantifier& q, std::vector<ExprPtr>& out) {
  if (q.kind == QuantKind::Exists) {
    collectConjuncts(q.body, out);
    return;
  }
  ExprPtr cur = q.body;
  while (true) {
    const auto* b = cur->as<Binary>();
    if (!b) return;
    if (b->op == BinaryOp::Implies) {
      collectConjuncts(b->lhs, out);
      cur = b->rhs;
    } else if (b->op == BinaryOp::Explies) {
      collectConjuncts(b->rhs, out);
      cur = b->lhs;
    } else {
      return;
    }
  }
}

// ---- the interpreter ----

class Scope {
 public:
  void push(std::string name, EVal v) { vars_.emplace_back(std::move(name), std::move(v)); }
  void pop(std::size_t n = 1) { vars_.resize(vars_.size() - n); }
  EVal& back() { return vars_.back().second; }
  EVal& slot(std::size_t fromTop) { return vars_[vars_.size() - 1 - fromTop].second; }

  const EVal* find(const std::string& name) const {
    for (auto it = vars_.rbegin(); it != vars_.rend(); ++it) {
      if (it->first == name) return &it->second;
    }
    return nullptr;
  }

 private:
  std::vector<std::pair<std::string, EVal>> vars_;
};

class Evaluator {
 public:
  Evaluator(const SpecUnit& unit, const Environment& env, const EvalLimits& limits,
            std::vector<ExprPtr> roots)
      : unit_(unit), limits_(limits), roots_(std::move(roots)) {
    for (const auto& [name, v] : env) {
      top_.push(name, fromValue(v));
      topValues_.push_back(v);
    }
  }

  EVal eval(const ExprPtr& e) { return eval(e, top_); }

  std::vector<std::vector<EVal>> domainOf(const ExprPtr& qe) {
    const auto* q = qe->as<Quantifier>();
    if (!q) throw EvalError(EvalErrorKind::TypeError, "not a quantifier", qe->loc);
    std::vector<std::vector<EVal>> out;
    enumerate(*qe, *q, top_, [&](const std::vector<EVal>& t) {
      out.push_back(t);
      return true;
    });
    return out;
  }

 private:
  [[noreturn]] static void typeError(const Expr& e, const std::string& msg) {
    throw EvalError(EvalErrorKind::TypeError, msg, e.loc);
  }

  bool evalBool(const ExprPtr& e, Scope& s) {
    EVal v = eval(e, s);
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    typeError(*e, "expected bool, got " + std::string(kindName(v)));
  }

  BigInt evalInt(const ExprPtr& e, Scope& s) {
    EVal v = eval(e, s);
    if (auto* i = std::get_if<BigInt>(&v)) return std::move(*i);
    typeError(*e, "expected int, got " + std::string(kindName(v)));
  }

  EVal eval(const ExprPtr& e, Scope& s) {
    return std::visit([&](const auto& n) -> EVal { return evalNode(*e, e, n, s); }, e->node);
  }

  EVal evalNode(const Expr&, const ExprPtr&, const BoolLit& n, Scope&) { return n.value; }
  EVal evalNode(const Expr&, const ExprPtr&, const IntLit& n, Scope&) { return n.value; }

  EVal evalNode(const Expr&, const ExprPtr&, const StrLit& n, Scope&) {
    if (n.isChar) return CharV{static_cast<unsigned char>(n.value.empty() ? 0 : n.value[0])};
    return n.value;
  }

  EVal evalNode(const Expr& e, const ExprPtr&, const SeqDisplay& n, Scope& s) {
    std::vector<EVal> elems;
    for (const auto& x : n.elems) elems.push_back(eval(x, s));
    if (!elems.empty() && std::holds_alternative<CharV>(elems.front())) {
      std::string out;
      for (const auto& x : elems) {
        if (!std::holds_alternative<CharV>(x)) typeError(e, "sequence display mixes element types");
        out += static_cast<char>(std::get<CharV>(x).c);
      }
      return out;
    }
    std::vector<BigInt> ints;
    for (auto& x : elems) {
      if (!std::holds_alternative<BigInt>(x)) typeError(e, "unsupported sequence element type");
      ints.push_back(std::move(std::get<BigInt>(x)));
    }
    return makeSeq(std::move(ints));
  }

  EVal evalNode(const Expr& e, const ExprPtr&, const VarRef& n, Scope& s) {
    if (const EVal* v = s.find(n.name)) return *v;
    typeError(e, "unbound identifier '" + n.name + "'");
  }

  EVal evalNode(const Expr&, const ExprPtr&, const Unary& n, Scope& s) {
    if (n.op == UnaryOp::Not) return !evalBool(n.operand, s);
    return BigInt(-evalInt(n.operand, s));
  }

  static int compareForOrder(const Expr& e, const EVal& a, const EVal& b) {
    if (a.index() != b.index()) typeError(e, "cannot order " + std::string(kindName(a)) + " and " + std::string(kindName(b)));
    if (const auto* x = std::get_if<BigInt>(&a)) {
      const auto& y = std::get<BigInt>(b);
      return *x < y ? -1 : (*x == y ? 0 : 1);
    }
    if (const auto* x = std::get_if<CharV>(&a)) {
      unsigned char y = std::get<CharV>(b).c;
      return x->c < y ? -1 : (x->c == y ? 0 : 1);
    }
    typeError(e, "cannot order values of type " + std::string(kindName(a)));
  }

  /// Sequence ordering in Dafny is the prefix relation.
  static bool isPrefix(const EVal& a, const EVal& b, bool proper) {
    if (const auto* x = std::get_if<std::string>(&a)) {
      const auto& y = std::get<std::string>(b);
      if (x->size() > y.size() || (proper && x->size() == y.size())) return false;
      return y.compare(0, x->size(), *x) == 0;
    }
    const auto& x = std::get<SeqV>(a);
    const auto& y = std::get<SeqV>(b);
    if (x.len > y.len || (proper && x.len == y.len)) return false;
    return std::equal(x.begin(), x.end(), y.begin());
  }

  EVal evalNode(const Expr& e, const ExprPtr&, const Binary& n, Scope& s) {
    switch (n.op) {
      case BinaryOp::And: return evalBool(n.lhs, s) && evalBool(n.rhs, s);
      case BinaryOp::Or: return evalBool(n.lhs, s) || evalBool(n.rhs, s);
      case BinaryOp::Implies: return !evalBool(n.lhs, s) || evalBool(n.rhs, s);
      case BinaryOp::Explies: return !evalBool(n.rhs, s) || evalBool(n.lhs, s);
      case BinaryOp::Iff: {
        bool a = evalBool(n.lhs, s);
        return a == evalBool(n.rhs, s);
      }
      default: break;
    }

    EVal a = eval(n.lhs, s);
    EVal b = eval(n.rhs, s);
    switch (n.op) {
      case BinaryOp::Eq:
      case BinaryOp::Ne: {
        if (a.index() != b.index()) {
          typeError(e, "cannot compare " + std::string(kindName(a)) + " with " + std::string(kindName(b)));
        }
        bool eq = evalEqual(a, b);
        return n.op == BinaryOp::Eq ? eq : !eq;
      }
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: {
        bool strict = n.op == BinaryOp::Lt || n.op == BinaryOp::Gt;
        bool swap = n.op == BinaryOp::Gt || n.op == BinaryOp::Ge;
        const EVal& x = swap ? b : a;
        const EVal& y = swap ? a : b;
        if ((std::holds_alternative<std::string>(x) || std::holds_alternative<SeqV>(x)) && x.index() == y.index()) {
          return isPrefix(x, y, strict);
        }
        int c = compareForOrder(e, x, y);
        return strict ? c < 0 : c <= 0;
      }
      case BinaryOp::In:
      case BinaryOp::NotIn: {
        bool found = false;
        if (const auto* str = std::get_if<std::string>(&b)) {
          const auto* ch = std::get_if<CharV>(&a);
          if (!ch) typeError(e, "'in' on a string needs a char");
          found = str->find(static_cast<char>(ch->c)) != std::string::npos;
        } else if (const auto* seq = std::get_if<SeqV>(&b)) {
          const auto* x = std::get_if<BigInt>(&a);
          if (!x) typeError(e, "'in' on a sequence of ints needs an int");
          found = std::find(seq->begin(), seq->end(), *x) != seq->end();
        } else {
          typeError(e, "right operand of 'in' must be a sequence");
        }
        return n.op == BinaryOp::In ? found : !found;
      }
      case BinaryOp::Add: {
        if (auto* x = std::get_if<BigInt>(&a)) {
          if (const auto* y = std::get_if<BigInt>(&b)) return BigInt(*x + *y);
        } else if (auto* x = std::get_if<std::string>(&a)) {
          if (const auto* y = std::get_if<std::string>(&b)) return *x + *y;
        } else if (const auto* x = std::get_if<SeqV>(&a)) {
          if (const auto* y = std::get_if<SeqV>(&b)) {
            std::vector<BigInt> out(x->begin(), x->end());
            out.insert(out.end(), y->begin(), y->end());
            return makeSeq(std::move(out));
          }
        }
        typeError(e, "'+' on " + std::string(kindName(a)) + " and " + std::string(kindName(b)));
      }
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
      case BinaryOp::Mod: {
        const auto* x = std::get_if<BigInt>(&a);
        const auto* y = std::get_if<BigInt>(&b);
        if (!x || !y) typeError(e, "arithmetic on non-integers");
        if (n.op == BinaryOp::Sub) return BigInt(*x - *y);
        if (n.op == BinaryOp::Mul) return BigInt(*x * *y);
        if (*y == 0) throw EvalError(EvalErrorKind::DivisionByZero, printExpr(n.rhs) + " is zero", e.loc);
        return n.op == BinaryOp::Div ? euclidDiv(*x, *y) : euclidMod(*x, *y);
      }
      default: break;
    }
    typeError(e, "unsupported operator");
  }

  static std::size_t checkedIndex(const Expr& e, const BigInt& i, std::size_t len, bool inclusiveEnd) {
    BigInt limit = len;
    if (i < 0 || i > limit || (!inclusiveEnd && i == limit)) {
      throw EvalError(EvalErrorKind::IndexOutOfRange,
                      "index " + i.str() + " out of range for length " + std::to_string(len) + " in " +
                          printExpr(std::make_shared<const Expr>(e)),
                      e.loc);
    }
    return static_cast<std::size_t>(i);
  }

  EVal evalNode(const Expr& e, const ExprPtr&, const Index& n, Scope& s) {
    EVal seq = eval(n.seq, s);
    BigInt i = evalInt(n.index, s);
    if (const auto* str = std::get_if<std::string>(&seq)) {
      return CharV{static_cast<unsigned char>((*str)[checkedIndex(e, i, str->size(), false)])};
    }
    if (const auto* sv = std::get_if<SeqV>(&seq)) return sv->at(checkedIndex(e, i, sv->len, false));
    typeError(e, "cannot index a value of type " + std::string(kindName(seq)));
  }

  EVal evalNode(const Expr& e, const ExprPtr&, const Slice& n, Scope& s) {
    EVal seq = eval(n.seq, s);
    std::size_t len = 0;
    if (const auto* str = std::get_if<std::string>(&seq)) {
      len = str->size();
    } else if (const auto* sv = std::get_if<SeqV>(&seq)) {
      len = sv->len;
    } else {
      typeError(e, "cannot slice a value of type " + std::string(kindName(seq)));
    }
    std::size_t hi = n.hi ? checkedIndex(e, evalInt(n.hi, s), len, true) : len;
    std::size_t lo = n.lo ? checkedIndex(e, evalInt(n.lo, s), hi, true) : 0;
    if (auto* str = std::get_if<std::string>(&seq)) return str->substr(lo, hi - lo);
    SeqV out = std::get<SeqV>(seq);
    out.off += lo;
    out.len = hi - lo;
    out.isArray = false;
    return out;
  }

  EVal evalNode(const Expr& e, const ExprPtr&, const Length& n, Scope& s) {
    EVal v = eval(n.array, s);
    const auto* sv = std::get_if<SeqV>(&v);
    if (!sv) typeError(e, "'.Length' needs an array");
    return BigInt(sv->len);
  }

  EVal evalNode(const Expr& e, const ExprPtr&, const Cardinality& n, Scope& s) {
    EVal v = eval(n.operand, s);
    if (const auto* str = std::get_if<std::string>(&v)) return BigInt(str->size());
    if (const auto* sv = std::get_if<SeqV>(&v)) return BigInt(sv->len);
    typeError(e, "'|...|' needs a sequence");
  }

  EVal evalNode(const Expr& e, const ExprPtr& self, const Quantifier& q, Scope& s) {
    bool forall = q.kind == QuantKind::Forall;
    bool result = forall;
    enumerate(*self, q, s, [&](const std::vector<EVal>& tuple) {
      for (std::size_t i = 0; i < tuple.size(); ++i) s.slot(tuple.size() - 1 - i) = tuple[i];
      bool b = evalBool(q.body, s);
      if (b != forall) {
        result = !forall;
        return false;
      }
      return true;
    }, true);
    (void)e;
    return result;
  }

  EVal evalNode(const Expr& e, const ExprPtr&, const Call& n, Scope& s) {
    const FunctionDef* f = unit_.helper(n.callee);
    if (!f) typeError(e, "unknown function '" + n.callee + "'");
    if (f->params.size() != n.args.size()) typeError(e, "wrong number of arguments to '" + n.callee + "'");
    std::vector<EVal> args;
    args.reserve(n.args.size());
    for (const auto& a : n.args) args.push_back(eval(a, s));

    std::string key;
    if (f->isRecursive) {
      key = memoKey(n.callee, args);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second.result;
    }

    if (depth_ >= limits_.maxRecursionDepth) {
      throw EvalError(EvalErrorKind::RecursionLimit,
                      "call depth exceeds " + std::to_string(limits_.maxRecursionDepth) + " at '" + n.callee + "'",
                      e.loc);
    }
    Scope frame;
    for (std::size_t i = 0; i < args.size(); ++i) frame.push(f->params[i].name, args[i]);
    ++depth_;
    struct Leave {
      std::size_t& d;
      ~Leave() { --d; }
    } leave{depth_};
    for (const auto& c : f->preconditions) {
      if (!evalBool(c.expr, frame)) {
        throw EvalError(EvalErrorKind::PreconditionViolation,
                        "call to '" + n.callee + "' violates 'requires " + c.text + "'", e.loc);
      }
    }
    EVal result = eval(f->body, frame);
    if (f->isRecursive) memo_.emplace(std::move(key), Memo{std::move(args), result});
    return result;
  }

  EVal evalNode(const Expr&, const ExprPtr&, const Ite& n, Scope& s) {
    return evalBool(n.cond, s) ? eval(n.thenExpr, s) : eval(n.elseExpr, s);
  }

  EVal evalNode(const Expr&, const ExprPtr&, const Let& n, Scope& s) {
    s.push(n.name, eval(n.value, s));
    struct Pop {
      Scope& s;
      ~Pop() { s.pop(); }
    } pop{s};
    return eval(n.body, s);
  }

  // ---- memoization of recursive helpers ----

  struct Memo {
    std::vector<EVal> args;  // keeps the buffers named in the key alive
    EVal result;
  };

  static std::string memoKey(const std::string& callee, const std::vector<EVal>& args) {
    std::string key = callee;
    for (const auto& a : args) {
      key += '\x1f';
      switch (a.index()) {
        case 0: key += std::get<bool>(a) ? "T" : "F"; break;
        case 1: key += "i" + std::get<BigInt>(a).str(); break;
        case 2: key += "c" + std::to_string(std::get<CharV>(a).c); break;
        case 3: key += "s" + std::to_string(std::get<std::string>(a).size()) + ":" + std::get<std::string>(a); break;
        default: {
          const auto& sv = std::get<SeqV>(a);
          key += "q" + std::to_string(reinterpret_cast<std::uintptr_t>(sv.buf.get())) + "," +
                 std::to_string(sv.off) + "," + std::to_string(sv.len) + (sv.isArray ? "a" : "");
        }
      }
    }
    return key;
  }

  // ---- quantifier domains ----

  const QuantPlan& planFor(const Expr& qe, const Quantifier& q) {
    auto it = plans_.find(&qe);
    if (it != plans_.end()) return it->second;

    QuantPlan plan;
    std::set<std::string> qvars;
    std::map<std::string, std::size_t> indexOf;
    for (std::size_t i = 0; i < q.vars.size(); ++i) {
      VarPlan vp;
      vp.name = q.vars[i].name;
      vp.isChar = q.vars[i].typeName == "char";
      vp.isNat = q.vars[i].typeName == "nat";
      plan.vars.push_back(vp);
      qvars.insert(vp.name);
      indexOf[vp.name] = i;
    }

    std::vector<ExprPtr> guards;
    guardConjuncts(q, guards);
    auto varIndex = [&](const ExprPtr& x) -> std::optional<std::size_t> {
      if (const auto* v = x->as<VarRef>()) {
        auto f = indexOf.find(v->name);
        if (f != indexOf.end()) return f->second;
      }
      return std::nullopt;
    };
    auto addRelation = [&](std::size_t v, Rel rel, const ExprPtr& other) {
      if (!mentionsAny(other, qvars)) {
        plan.ground.push_back(GroundAtom{v, rel, other});
        return;
      }
      if (auto w = varIndex(other)) {
        if (*w != v) plan.pairs.push_back(PairAtom{v, rel, *w, nullptr});
        return;
      }
      if (const auto* b = other->as<Binary>(); b && (b->op == BinaryOp::Add || b->op == BinaryOp::Sub)) {
        auto w = varIndex(b->lhs);
        if (w && *w != v && !mentionsAny(b->rhs, qvars)) {
          plan.pairs.push_back(PairAtom{v, rel, *w, b->rhs, b->op == BinaryOp::Sub});
        }
      }
    };
    for (const auto& g : guards) {
      const auto* b = g->as<Binary>();
      if (!b) continue;
      if (b->op == BinaryOp::In) {
        if (auto v = varIndex(b->lhs); v && !mentionsAny(b->rhs, qvars)) plan.vars[*v].members.push_back(b->rhs);
        continue;
      }
      auto rel = relOf(b->op);
      if (!rel) continue;
      if (auto v = varIndex(b->lhs)) addRelation(*v, *rel, b->rhs);
      if (auto v = varIndex(b->rhs)) addRelation(*v, flip(*rel), b->lhs);
    }

    // Char-typed variables drawn from a string are chars even unannotated.
    for (auto& vp : plan.vars) {
      if (vp.isChar || !vp.members.empty()) continue;
      walk(q.body, [&](const Expr& x) {
        const auto* b = x.as<Binary>();
        if (!b || (b->op != BinaryOp::In && b->op != BinaryOp::NotIn)) return;
        const auto* v = b->lhs->as<VarRef>();
        if (v && v->name == vp.name && looksLikeString(b->rhs)) vp.isChar = true;
      });
    }

    for (auto& vp : plan.vars) {
      std::set<std::string> bound = qvars;
      vp.fallbackOk = displaysAreLiteral() && fragmentOk(q.body, vp.name, bound, true, &vp.partners);
    }
    return plans_.emplace(&qe, std::move(plan)).first->second;
  }

  /// Best-effort static guess used only to type unannotated bound variables.
  bool looksLikeString(const ExprPtr& e) const {
    if (const auto* s = e->as<StrLit>()) return !s->isChar;
    if (const auto* v = e->as<VarRef>()) {
      const EVal* x = top_.find(v->name);
      return x && std::holds_alternative<std::string>(*x);
    }
    if (const auto* sl = e->as<Slice>()) return looksLikeString(sl->seq);
    if (const auto* c = e->as<Call>()) {
      const FunctionDef* f = unit_.helper(c->callee);
      return f && f->returnType == ValueType::Str;
    }
    if (const auto* b = e->as<Binary>(); b && b->op == BinaryOp::Add) {
      return looksLikeString(b->lhs) || looksLikeString(b->rhs);
    }
    return false;
  }

  /// All sequence displays in the spec and its helpers hold only literals,
  /// so every sequence element at run time comes from the store or a literal.
  bool displaysAreLiteral() {
    if (displaysLiteral_) return *displaysLiteral_;
    bool ok = true;
    auto check = [&](const Expr& x) {
      if (const auto* d = x.as<SeqDisplay>()) {
        for (const auto& el : d->elems) {
          if (!el->is<IntLit>() && !el->is<StrLit>()) ok = false;
        }
      }
    };
    for (const auto& r : roots_) walk(r, check);
    for (const auto& [_, f] : unit_.helpers) {
      if (f.body) walk(f.body, check);
      for (const auto& c : f.preconditions) walk(c.expr, check);
    }
    displaysLiteral_ = ok;
    return ok;
  }

  /// Whether every free occurrence of `x` in `e` is a membership test
  /// (`x in S`), an (in)equality against an indexed element, a literal or a
  /// ground variable, or an argument to a helper whose parameter obeys the
  /// same rule. Under that condition all values outside the scoped universe
  /// behave alike, so one fresh representative stands in for all of them.
  bool fragmentOk(const ExprPtr& e, const std::string& x, std::set<std::string>& boundInside, bool top,
                  std::vector<ExprPtr>* partners) {
    auto isX = [&](const ExprPtr& p) {
      const auto* v = p->as<VarRef>();
      return v && v->name == x;
    };
    auto partnerOk = [&](const ExprPtr& o) {
      if (mentionsAny(o, {x})) return false;
      if (o->is<Index>()) return fragmentOk(o, x, boundInside, top, partners);
      if (o->is<IntLit>() || o->is<StrLit>()) return true;
      if (const auto* v = o->as<VarRef>(); v && top && !boundInside.count(v->name)) {
        partners->push_back(o);
        return true;
      }
      return false;
    };

    if (isX(e)) return false;
    if (const auto* b = e->as<Binary>()) {
      if ((b->op == BinaryOp::In || b->op == BinaryOp::NotIn) && isX(b->lhs)) {
        return fragmentOk(b->rhs, x, boundInside, top, partners);
      }
      if (b->op == BinaryOp::Eq || b->op == BinaryOp::Ne) {
        if (isX(b->lhs)) return partnerOk(b->rhs);
        if (isX(b->rhs)) return partnerOk(b->lhs);
      }
    }
    if (const auto* c = e->as<Call>()) {
      for (std::size_t i = 0; i < c->args.size(); ++i) {
        if (isX(c->args[i])) {
          if (!helperParamOk(c->callee, i)) return false;
        } else if (!fragmentOk(c->args[i], x, boundInside, top, partners)) {
          return false;
        }
      }
      return true;
    }
    if (const auto* q = e->as<Quantifier>()) {
      std::vector<std::string> added;
      for (const auto& v : q->vars) {
        if (v.name == x) return true;  // shadowed
        if (boundInside.insert(v.name).second) added.push_back(v.name);
      }
      bool ok = fragmentOk(q->body, x, boundInside, top, partners);
      for (const auto& n : added) boundInside.erase(n);
      return ok;
    }
    if (const auto* l = e->as<Let>()) {
      if (!fragmentOk(l->value, x, boundInside, top, partners)) return false;
      if (l->name == x) return true;
      bool added = boundInside.insert(l->name).second;
      bool ok = fragmentOk(l->body, x, boundInside, top, partners);
      if (added) boundInside.erase(l->name);
      return ok;
    }
    bool ok = true;
    forEachChild(*e, [&](const ExprPtr& c) { ok = ok && fragmentOk(c, x, boundInside, top, partners); });
    return ok;
  }

  bool helperParamOk(const std::string& callee, std::size_t index) {
    auto key = std::make_pair(callee, index);
    auto it = paramOk_.find(key);
    if (it != paramOk_.end()) return it->second;
    const FunctionDef* f = unit_.helper(callee);
    if (!f || index >= f->params.size() || !f->body) return false;
    paramOk_[key] = true;  // assumed while checking recursive uses
    std::set<std::string> bound;
    const std::string& p = f->params[index].name;
    bool ok = fragmentOk(f->body, p, bound, false, nullptr);
    for (const auto& c : f->preconditions) ok = ok && fragmentOk(c.expr, p, bound, false, nullptr);
    paramOk_[key] = ok;
    return ok;
  }

  /// Every int in the store (scalars and collection elements) and every int
  /// literal of the spec; likewise for chars.
  void buildUniverse() {
    if (universeBuilt_) return;
    universeBuilt_ = true;
    std::set<BigInt> ints;
    std::set<unsigned char> chars;
    for (const auto& v : topValues_) {
      switch (v.type()) {
        case ValueType::Int: ints.insert(v.asInt()); break;
        case ValueType::Str:
          for (char c : v.asStr()) chars.insert(static_cast<unsigned char>(c));
          break;
        case ValueType::ArrayInt:
        case ValueType::SeqInt:
          for (const auto& x : v.elements()) ints.insert(x);
          break;
        case ValueType::Bool: break;
      }
    }
    auto lits = [&](const Expr& x) {
      if (const auto* i = x.as<IntLit>()) ints.insert(i->value);
      if (const auto* s = x.as<StrLit>()) {
        for (char c : s->value) chars.insert(static_cast<unsigned char>(c));
      }
    };
    for (const auto& r : roots_) walk(r, lits);
    for (const auto& [_, f] : unit_.helpers) {
      if (f.body) walk(f.body, lits);
      for (const auto& c : f.preconditions) walk(c.expr, lits);
    }
    intUniverse_.assign(ints.begin(), ints.end());
    charUniverse_.assign(chars.begin(), chars.end());
  }

  std::vector<EVal> fallbackDomain(const VarPlan& vp, Scope& s) {
    buildUniverse();
    if (vp.isChar) {
      std::set<unsigned char> cs(charUniverse_.begin(), charUniverse_.end());
      for (const auto& p : vp.partners) {
        EVal v = eval(p, s);
        if (const auto* c = std::get_if<CharV>(&v)) cs.insert(c->c);
      }
      std::vector<EVal> out;
      for (unsigned char c : cs) out.push_back(CharV{c});
      for (int c = 0; c < 256; ++c) {
        if (!cs.count(static_cast<unsigned char>(c))) {
          out.push_back(CharV{static_cast<unsigned char>(c)});
          break;
        }
      }
      return out;
    }
    std::set<BigInt> is(intUniverse_.begin(), intUniverse_.end());
    for (const auto& p : vp.partners) {
      EVal v = eval(p, s);
      if (const auto* i = std::get_if<BigInt>(&v)) is.insert(*i);
    }
    std::vector<EVal> out;
    for (const auto& i : is) {
      if (vp.isNat && i < 0) continue;
      out.push_back(i);
    }
    out.push_back(is.empty() ? BigInt(0) : std::max(BigInt(*is.rbegin() + 1), BigInt(0)));
    return out;
  }

  struct Box {
    std::optional<BigInt> lo, hi;
  };

  static void tightenLo(Box& b, const BigInt& v, bool& changed) {
    if (!b.lo || v > *b.lo) {
      b.lo = v;
      changed = true;
    }
  }
  static void tightenHi(Box& b, const BigInt& v, bool& changed) {
    if (!b.hi || v < *b.hi) {
      b.hi = v;
      changed = true;
    }
  }

  /// Applies `v REL r` to the box of v.
  static void applyGround(Box& b, Rel rel, const BigInt& r, bool& changed) {
    switch (rel) {
      case Rel::Lt: tightenHi(b, r - 1, changed); break;
      case Rel::Le: tightenHi(b, r, changed); break;
      case Rel::Gt: tightenLo(b, r + 1, changed); break;
      case Rel::Ge: tightenLo(b, r, changed); break;
      case Rel::Eq:
        tightenLo(b, r, changed);
        tightenHi(b, r, changed);
        break;
    }
  }

  using TupleFn = std::function<bool(const std::vector<EVal>&)>;

  /// Enumerates the domain of `q`, calling `fn` per tuple until it returns
  /// false. With `bindInScope`, the variables are pushed on `s` for the
  /// duration (the callback writes them).
  void enumerate(const Expr& qe, const Quantifier& q, Scope& s, const TupleFn& fn, bool bindInScope = false) {
    const QuantPlan& plan = planFor(qe, q);
    const std::size_t n = plan.vars.size();

    std::vector<std::optional<std::vector<EVal>>> fixed(n);
    std::vector<Box> box(n);
    std::vector<bool> isRange(n, false);

    for (std::size_t i = 0; i < n; ++i) {
      const VarPlan& vp = plan.vars[i];
      if (vp.isNat) box[i].lo = BigInt(0);
      if (!vp.members.empty()) {
        // The smallest membership source is the domain; the guard filters
        // anything outside the others.
        std::optional<std::vector<EVal>> best;
        for (const auto& m : vp.members) {
          std::vector<EVal> d = elementsOf(m, s);
          if (!best || d.size() < best->size()) best = std::move(d);
        }
        fixed[i] = std::move(best);
      }
    }

    bool changed = false;
    for (const auto& a : plan.ground) {
      if (plan.vars[a.var].isChar) continue;
      EVal r = eval(a.rhs, s);
      if (const auto* ri = std::get_if<BigInt>(&r)) applyGround(box[a.var], a.rel, *ri, changed);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!fixed[i] || fixed[i]->empty() || !std::holds_alternative<BigInt>(fixed[i]->front())) continue;
      BigInt lo = std::get<BigInt>(fixed[i]->front()), hi = lo;
      for (const auto& v : *fixed[i]) {
        const auto& x = std::get<BigInt>(v);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      applyGround(box[i], Rel::Ge, lo, changed);
      applyGround(box[i], Rel::Le, hi, changed);
    }

    std::vector<BigInt> offsets;
    for (const auto& p : plan.pairs) {
      BigInt c = p.offset ? evalInt(p.offset, s) : BigInt(0);
      offsets.push_back(p.negate ? BigInt(-c) : c);
    }
    // v REL w + c, both directions, to a fixpoint (bounded for cyclic sets).
    for (std::size_t round = 0; round < 4 * (plan.pairs.size() + n) + 4; ++round) {
      changed = false;
      for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
        const auto& p = plan.pairs[k];
        if (plan.vars[p.var].isChar || plan.vars[p.other].isChar) continue;
        const BigInt& c = offsets[k];
        Box& bv = box[p.var];
        Box& bw = box[p.other];
        switch (p.rel) {
          case Rel::Lt:
            if (bw.hi) tightenHi(bv, *bw.hi + c - 1, changed);
            if (bv.lo) tightenLo(bw, *bv.lo - c + 1, changed);
            break;
          case Rel::Le:
            if (bw.hi) tightenHi(bv, *bw.hi + c, changed);
            if (bv.lo) tightenLo(bw, *bv.lo - c, changed);
            break;
          case Rel::Gt:
            if (bw.lo) tightenLo(bv, *bw.lo + c + 1, changed);
            if (bv.hi) tightenHi(bw, *bv.hi - c - 1, changed);
            break;
          case Rel::Ge:
            if (bw.lo) tightenLo(bv, *bw.lo + c, changed);
            if (bv.hi) tightenHi(bw, *bv.hi - c, changed);
            break;
          case Rel::Eq:
            if (bw.hi) tightenHi(bv, *bw.hi + c, changed);
            if (bw.lo) tightenLo(bv, *bw.lo + c, changed);
            if (bv.hi) tightenHi(bw, *bv.hi - c, changed);
            if (bv.lo) tightenLo(bw, *bv.lo - c, changed);
            break;
        }
      }
      if (!changed) break;
    }

    const BigInt cap = limits_.maxQuantifierDomain;
    for (std::size_t i = 0; i < n; ++i) {
      if (fixed[i]) continue;
      const VarPlan& vp = plan.vars[i];
      if (!vp.isChar && box[i].lo && box[i].hi) {
        isRange[i] = true;
        if (*box[i].hi - *box[i].lo + 1 > cap) {
          throw EvalError(EvalErrorKind::QuantifierDomainTooLarge,
                          "'" + vp.name + "' ranges over " + BigInt(*box[i].hi - *box[i].lo + 1).str() +
                              " values, more than " + cap.str(),
                          qe.loc);
        }
        continue;
      }
      if (vp.fallbackOk) {
        fixed[i] = fallbackDomain(vp, s);
        continue;
      }
      throw EvalError(EvalErrorKind::UnboundedQuantifier,
                      "no finite domain for '" + vp.name + "' in " + printExpr(std::make_shared<const Expr>(qe)),
                      qe.loc);
    }

    std::vector<EVal> tuple(n);
    std::size_t count = 0;
    if (bindInScope) {
      for (const auto& vp : plan.vars) s.push(vp.name, false);
    }
    struct Unbind {
      Scope& s;
      std::size_t n;
      bool active;
      ~Unbind() {
        if (active) s.pop(n);
      }
    } unbind{s, n, bindInScope};

    // Pair atoms against already-chosen variables narrow the range further.
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
      if (i == n) {
        if (++count > limits_.maxQuantifierDomain) {
          throw EvalError(EvalErrorKind::QuantifierDomainTooLarge,
                          "more than " + std::to_string(limits_.maxQuantifierDomain) + " tuples", qe.loc);
        }
        return fn(tuple);
      }
      if (!isRange[i]) {
        for (const auto& v : *fixed[i]) {
          tuple[i] = v;
          if (!rec(i + 1)) return false;
        }
        return true;
      }
      Box b = box[i];
      bool ignored = false;
      for (std::size_t k = 0; k < plan.pairs.size(); ++k) {
        const auto& p = plan.pairs[k];
        if (p.var == i && p.other < i && std::holds_alternative<BigInt>(tuple[p.other])) {
          applyGround(b, p.rel, std::get<BigInt>(tuple[p.other]) + offsets[k], ignored);
        } else if (p.other == i && p.var < i && std::holds_alternative<BigInt>(tuple[p.var])) {
          // x REL i + c  ==>  i flip(REL) x - c
          applyGround(b, flip(p.rel), std::get<BigInt>(tuple[p.var]) - offsets[k], ignored);
        }
      }
      for (BigInt v = *b.lo; v <= *b.hi; ++v) {
        tuple[i] = v;
        if (!rec(i + 1)) return false;
      }
      return true;
    };
    rec(0);
  }

  std::vector<EVal> elementsOf(const ExprPtr& m, Scope& s) {
    EVal coll = eval(m, s);
    std::vector<EVal> out;
    if (const auto* str = std::get_if<std::string>(&coll)) {
      std::set<unsigned char> seen;
      for (char c : *str) {
        if (seen.insert(static_cast<unsigned char>(c)).second) out.push_back(CharV{static_cast<unsigned char>(c)});
      }
    } else if (const auto* sv = std::get_if<SeqV>(&coll)) {
      std::set<BigInt> seen;
      for (const auto& x : *sv) {
        if (seen.insert(x).second) out.push_back(x);
      }
    } else {
      typeError(*m, "right operand of 'in' must be a sequence");
    }
    return out;
  }

  const SpecUnit& unit_;
  const EvalLimits& limits_;
  std::vector<ExprPtr> roots_;
  Scope top_;
  std::vector<Value> topValues_;
  std::size_t depth_ = 0;
  std::unordered_map<const Expr*, QuantPlan> plans_;
  std::unordered_map<std::string, Memo> memo_;
  std::map<std::pair<std::string, std::size_t>, bool> paramOk_;
  std::optional<bool> displaysLiteral_;
  bool universeBuilt_ = false;
  std::vector<BigInt> intUniverse_;
  std::vector<unsigned char> charUniverse_;
};

std::vector<ExprPtr> clauseExprs(const std::vector<Clause>& clauses) {
  std::vector<ExprPtr> out;
  for (const auto& c : clauses) out.push_back(c.expr);
  return out;
}

bool hasRecursion(const SpecUnit& unit) {
  return std::any_of(unit.helpers.begin(), unit.helpers.end(), [](const auto& kv) { return kv.second.isRecursive; });
}

template <typename Fn>
auto maybeOnLargeStack(const SpecUnit& unit, Fn&& fn) {
  if (!hasRecursion(unit)) return fn();
  decltype(fn()) result{};
  runOnLargeStack([&] { result = fn(); });
  return result;
}

SpecVerdict evalClauses(const SpecUnit& unit, const std::vector<Clause>& clauses, const Environment& env,
                        const EvalLimits& limits) {
  return maybeOnLargeStack(unit, [&]() {
    Evaluator ev(unit, env, limits, clauseExprs(clauses));
    SpecVerdict out;
    out.verdict = Verdict::True;
    std::optional<SpecVerdict> firstError;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      try {
        EVal v = ev.eval(clauses[i].expr);
        const bool* b = std::get_if<bool>(&v);
        if (!b) throw EvalError(EvalErrorKind::TypeError, "clause is not boolean", clauses[i].loc);
        if (!*b) {
          out.verdict = Verdict::False;
          out.clause = i;
          out.diagnosis = "clause " + std::to_string(i + 1) + " is false: " + clauses[i].text;
          return out;
        }
      } catch (const EvalError& e) {
        if (!firstError) {
          SpecVerdict u;
          u.verdict = Verdict::Unknown;
          u.clause = i;
          u.error = e.kind();
          u.diagnosis = "clause " + std::to_string(i + 1) + ": " + e.what();
          firstError = std::move(u);
        }
      }
    }
    return firstError ? *firstError : out;
  });
}

}  // namespace

Value evalExpr(const ExprPtr& e, const Environment& env, const SpecUnit& unit, const EvalLimits& limits) {
  return maybeOnLargeStack(unit, [&]() {
    Evaluator ev(unit, env, limits, {e});
    return toValue(ev.eval(e));
  });
}

std::vector<std::vector<Value>> boundQuantifierDomain(const ExprPtr& quantifier, const Environment& env,
                                                      const SpecUnit& unit, const EvalLimits& limits) {
  Evaluator ev(unit, env, limits, {quantifier});
  std::vector<std::vector<Value>> out;
  for (const auto& t : ev.domainOf(quantifier)) {
    std::vector<Value> row;
    for (const auto& v : t) row.push_back(toValue(v));
    out.push_back(std::move(row));
  }
  return out;
}

SpecVerdict evalSpec(const SpecUnit& unit, const Environment& env, const EvalLimits& limits) {
  return evalClauses(unit, unit.ensures, env, limits);
}

SpecVerdict evalRequires(const SpecUnit& unit, const Environment& env, const EvalLimits& limits) {
  return evalClauses(unit, unit.preconditions, env, limits);
}

void runOnLargeStack(const std::function<void()>& fn) {
  constexpr std::size_t kStack = std::size_t{1} << 30;  // reserved, committed lazily
  struct Job {
    const std::function<void()>* fn;
    std::exception_ptr error;
  } job{&fn, nullptr};

  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, kStack);
  pthread_t thread;
  auto entry = [](void* p) -> void* {
    auto* j = static_cast<Job*>(p);
    try {
      (*j->fn)();
    } catch (...) {
      j->error = std::current_exception();
    }
    return nullptr;
  };
  int rc = pthread_create(&thread, &attr, entry, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) {
    fn();  // could not get a big stack; run in place
    return;
  }
  pthread_join(thread, nullptr);
  if (job.error) std::rethrow_exception(job.error);
}

}  // namespace specjudge
