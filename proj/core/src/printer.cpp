#include "specjudge/printer.h"

namespace specjudge {

namespace {

// Binding strength, loosest first. Quantifiers, if-then-else and let extend
// as far right as possible, so they only go unparenthesized in delimited
// positions (top level, brackets, argument lists, bodies), printed at kOpen.
enum Level : int {
  kOpen = -1,
  kIff = 0,
  kImplies = 1,
  kLogical = 2,
  kRelation = 3,
  kAdditive = 4,
  kMultiplicative = 5,
  kUnary = 6,
  kPostfix = 7,
};

int levelOf(const Expr& e) {
  if (const auto* b = e.as<Binary>()) {
    switch (b->op) {
      case BinaryOp::Iff: return kIff;
      case BinaryOp::Implies:
      case BinaryOp::Explies: return kImplies;
      case BinaryOp::And:
      case BinaryOp::Or: return kLogical;
      case BinaryOp::Add:
      case BinaryOp::Sub: return kAdditive;
      case BinaryOp::Mul:
      case BinaryOp::Div:
      case BinaryOp::Mod: return kMultiplicative;
      default: return kRelation;
    }
  }
  if (e.is<Unary>()) return kUnary;
  if (const auto* i = e.as<IntLit>(); i && i->value < 0) return kUnary;
  if (e.is<Quantifier>() || e.is<Ite>() || e.is<Let>()) return kOpen;
  return kPostfix;
}

std::string quoteChar(const std::string& c) {
  std::string out = "'";
  for (char ch : c) {
    switch (ch) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\0': out += "\\0"; break;
      default: out += ch;
    }
  }
  return out + "'";
}

bool isBinary(const ExprPtr& e, BinaryOp op) {
  const auto* b = e->as<Binary>();
  return b && b->op == op;
}

std::string print(const ExprPtr& e, int ctx);

std::string wrapIf(bool cond, std::string s) { return cond ? "(" + s + ")" : s; }

std::string printList(const std::vector<ExprPtr>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += print(xs[i], kOpen);
  }
  return out;
}

std::string printBinary(const Binary& b) {
  std::string op = " " + std::string(spelling(b.op)) + " ";
  switch (b.op) {
    case BinaryOp::Iff:
      return print(b.lhs, kIff) + op + print(b.rhs, kImplies);
    case BinaryOp::Implies: {
      std::string rhs = isBinary(b.rhs, BinaryOp::Explies) ? "(" + print(b.rhs, kOpen) + ")" : print(b.rhs, kImplies);
      return print(b.lhs, kLogical) + op + rhs;
    }
    case BinaryOp::Explies: {
      std::string lhs = isBinary(b.lhs, BinaryOp::Implies) ? "(" + print(b.lhs, kOpen) + ")" : print(b.lhs, kImplies);
      return lhs + op + print(b.rhs, kLogical);
    }
    case BinaryOp::And:
    case BinaryOp::Or: {
      BinaryOp other = b.op == BinaryOp::And ? BinaryOp::Or : BinaryOp::And;
      std::string lhs = isBinary(b.lhs, other) ? "(" + print(b.lhs, kOpen) + ")" : print(b.lhs, kLogical);
      return lhs + op + print(b.rhs, kRelation);
    }
    case BinaryOp::Add:
    case BinaryOp::Sub:
      return print(b.lhs, kAdditive) + op + print(b.rhs, kMultiplicative);
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod:
      return print(b.lhs, kMultiplicative) + op + print(b.rhs, kUnary);
    default:
      // Relations never nest unparenthesized: `a < b < c` would be a chain.
      return print(b.lhs, kAdditive) + op + print(b.rhs, kAdditive);
  }
}

std::string printNode(const ExprPtr& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BoolLit>) {
          return n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, IntLit>) {
          return n.value.str();
        } else if constexpr (std::is_same_v<T, StrLit>) {
          return n.isChar ? quoteChar(n.value) : quoteDafnyString(n.value);
        } else if constexpr (std::is_same_v<T, SeqDisplay>) {
          return "[" + printList(n.elems) + "]";
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, Unary>) {
          if (n.op == UnaryOp::Not) return "!" + print(n.operand, kUnary);
          // `-5` would re-parse as a literal, and `--x` reads badly.
          if (n.operand->template is<IntLit>() || n.operand->template is<Unary>()) {
            return "-(" + print(n.operand, kOpen) + ")";
          }
          return "-" + print(n.operand, kUnary);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return printBinary(n);
        } else if constexpr (std::is_same_v<T, Index>) {
          return print(n.seq, kPostfix) + "[" + print(n.index, kOpen) + "]";
        } else if constexpr (std::is_same_v<T, Slice>) {
          std::string lo = n.lo ? print(n.lo, kOpen) : "";
          std::string hi = n.hi ? print(n.hi, kOpen) : "";
          return print(n.seq, kPostfix) + "[" + lo + ".." + hi + "]";
        } else if constexpr (std::is_same_v<T, Length>) {
          return print(n.array, kPostfix) + ".Length";
        } else if constexpr (std::is_same_v<T, Cardinality>) {
          std::string inner = print(n.operand, kAdditive);
          if (inner.front() == '|') inner = " " + inner;
          if (inner.back() == '|') inner += " ";
          return "|" + inner + "|";
        } else if constexpr (std::is_same_v<T, Quantifier>) {
          std::string out = n.kind == QuantKind::Forall ? "forall " : "exists ";
          for (std::size_t i = 0; i < n.vars.size(); ++i) {
            if (i) out += ", ";
            out += n.vars[i].name;
            if (!n.vars[i].typeName.empty()) out += ": " + n.vars[i].typeName;
          }
          return out + " :: " + print(n.body, kOpen);
        } else if constexpr (std::is_same_v<T, Call>) {
          return n.callee + "(" + printList(n.args) + ")";
        } else if constexpr (std::is_same_v<T, Ite>) {
          return "if " + print(n.cond, kOpen) + " then " + print(n.thenExpr, kOpen) + " else " +
                 print(n.elseExpr, kOpen);
        } else if constexpr (std::is_same_v<T, Let>) {
          return "var " + n.name + " := " + print(n.value, kOpen) + "; " + print(n.body, kOpen);
        }
      },
      e->node);
}

std::string print(const ExprPtr& e, int ctx) {
  int level = levelOf(*e);
  return wrapIf(level < ctx, printNode(e));
}

}  // namespace

std::string printExpr(const ExprPtr& e) { return print(e, kOpen); }

}  // namespace specjudge
