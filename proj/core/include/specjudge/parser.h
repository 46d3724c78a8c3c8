#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "specjudge/ast.h"
#include "specjudge/task.h"

namespace specjudge {

// Supported grammar subset (anything else is a ParseError with a location):
//
//   program    := { function | predicate | method | lemma }
//   function   := ["ghost"] ("function" | "predicate") ["method"] attrs NAME
//                 "(" params ")" [":" type] { spec } "{" expr "}"
//   method     := "method" attrs NAME "(" params ")" ["returns" "(" params ")"]
//                 { spec } ["{" stmts "}"]
//   spec       := ("requires" | "ensures" | "reads" | "modifies" | "decreases") ...
//   type       := "int" | "nat" | "bool" | "string" | "seq<char>" | "seq<int>"
//               | "array<int>"
//   expr       := iff
//   iff        := implies { "<==>" implies }
//   implies    := logical [ "==>" implies ] | logical { "<==" logical }
//   logical    := relation { "&&" relation } | relation { "||" relation }
//   relation   := additive { relop additive }      (chains desugar to &&)
//   additive   := mult { ("+" | "-") mult }
//   mult       := unary { ("*" | "/" | "%") unary }
//   unary      := ("!" | "-") unary | postfix
//   postfix    := primary { "[" index-or-slice "]" | ".Length" | "(" args ")" }
//   primary    := literal | NAME | "(" expr ")" | "|" expr "|" | "[" exprs "]"
//               | ("forall" | "exists") vars ["|" expr] "::" expr
//               | "if" expr "then" expr "else" expr | "var" NAME ":=" expr ";" expr

ExprPtr parseExpression(std::string_view text);

/// `int`, `array<int>`, ... Throws ParseError (construct = the type text)
/// for anything outside the supported set, e.g. `array2<int>`.
ValueType parseTypeName(std::string_view text);

/// A single `method NAME (params) returns (params)` header.
MethodSignature parseSignature(std::string_view text);

/// Parses a Dafny literal of the given type: `true`, `-3`, `"ab"`,
/// `[1, 2]`, `new int[] [1, 2]`.
Value parseLiteral(std::string_view text, ValueType type);

/// Converts an already-parsed literal expression (a literal, a negative
/// literal, or a display of literals) into a value of `type`.
Value literalExprToValue(const ExprPtr& e, ValueType type);

// ---- statements (test snippets and generated harness bodies) ----

/// `new int[] [e1, ..., en]` (an optional size expression is accepted).
struct NewArray {
  std::vector<ExprPtr> elems;
};

struct Stmt {
  enum class Kind { VarDecl, Assign, Assert, Assume, Expect };
  Kind kind;
  std::vector<std::string> names;  // VarDecl/Assign targets
  std::variant<std::monostate, ExprPtr, NewArray> rhs;
  ExprPtr expr;                    // Assert/Assume/Expect condition
  SourceLoc loc;
};

std::vector<Stmt> parseStatements(std::string_view text);

// ---- whole programs ----

struct MethodDecl {
  MethodSignature signature;
  std::vector<Clause> preconditions;
  std::vector<Clause> ensures;
  std::optional<std::vector<Stmt>> body;  // only when bodies are parsed
  SourceLoc loc;
};

struct Program {
  std::vector<FunctionDef> functions;
  std::vector<MethodDecl> methods;
};

/// Parses the top-level declarations of a Dafny file. Method bodies are
/// skipped by brace matching unless `parseBodies` is set; lemmas are always
/// skipped.
Program parseProgram(std::string_view source, bool parseBodies = false);

/// Extracts the candidate spec for `datasetSignature` from a Dafny source.
/// The target method is the one whose name matches (case-insensitively), or
/// the only method in the file. Its parameters must align positionally with
/// the dataset signature.
SpecUnit parseSpec(std::string_view source, const MethodSignature& datasetSignature);

}  // namespace specjudge
