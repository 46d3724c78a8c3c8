#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specjudge/ast.h"
#include "specjudge/value.h"

namespace specjudge {

struct Param {
  std::string name;
  ValueType type;
  friend bool operator==(const Param&, const Param&) = default;
};

/// `method m(x) returns (y)`: names and types of a test's inputs and outputs.
struct MethodSignature {
  std::string name;
  std::vector<Param> inputs;
  std::vector<Param> outputs;

  const Param* find(std::string_view name) const;
  friend bool operator==(const MethodSignature&, const MethodSignature&) = default;
};

/// A `requires`/`ensures` formula together with its verbatim source text.
struct Clause {
  ExprPtr expr;
  std::string text;
  SourceLoc loc;
};

/// A top-level `function` or `predicate` the spec may call.
struct FunctionDef {
  std::string name;
  std::vector<Param> params;
  ValueType returnType = ValueType::Bool;
  bool isPredicate = false;
  bool isRecursive = false;  // filled in by the resolver
  ExprPtr body;
  std::vector<Clause> preconditions;
  SourceLoc loc;
  /// Verbatim declaration text and the offset of the name inside it.
  std::string text;
  std::size_t nameOffset = 0;
  /// Set when the declaration could not be parsed; reported only if the
  /// spec actually references this helper.
  std::optional<ParseError> deferredError;
};

/// The candidate specification: the conjunction of the ensures clauses of
/// the target method, plus the helpers they reach.
struct SpecUnit {
  MethodSignature method;
  std::vector<Clause> preconditions;
  std::vector<Clause> ensures;
  std::map<std::string, FunctionDef> helpers;
  /// Reachable helpers in source order.
  std::vector<std::string> helperOrder;

  const FunctionDef* helper(const std::string& name) const;
};

enum class SpecLabel { WrongSpec, WeakSpec, StrongSpec };

std::string_view toString(SpecLabel label);
/// Accepts WRONG_SPEC / wrong_spec etc. Throws std::invalid_argument.
SpecLabel parseLabel(std::string_view text);

struct TestCase {
  std::string id;
  std::vector<Value> inputs;
  std::vector<Value> expected;
  Comparator comparator = Comparator::Exact;
};

struct TaskRecord {
  std::string taskId;
  std::string description;
  /// Signature as given by the dataset (used to read the test snippets).
  MethodSignature signature;
  /// Tests, with values coerced to the spec method's parameter types.
  std::vector<TestCase> tests;
  SpecUnit spec;
  std::optional<SpecLabel> label;

  const TestCase* test(std::string_view id) const;
};

/// Orders "test_2" before "test_10" and "9" before "61".
bool naturalLess(std::string_view a, std::string_view b);

}  // namespace specjudge
