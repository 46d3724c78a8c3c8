#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "specjudge/task.h"

namespace specjudge {

enum class EvalErrorKind {
  IndexOutOfRange,
  DivisionByZero,
  RecursionLimit,
  UnboundedQuantifier,
  QuantifierDomainTooLarge,
  PreconditionViolation,
  TypeError,
};

std::string_view toString(EvalErrorKind kind);

class EvalError : public std::runtime_error {
 public:
  EvalError(EvalErrorKind kind, std::string message, SourceLoc loc);

  EvalErrorKind kind() const { return kind_; }
  const SourceLoc& loc() const { return loc_; }

 private:
  EvalErrorKind kind_;
  SourceLoc loc_;
};

struct EvalLimits {
  std::size_t maxRecursionDepth = 10'000;
  /// Per quantifier evaluation, counted in enumerated tuples.
  std::size_t maxQuantifierDomain = 1'000'000;
};

/// Concrete store: every method input and output bound by name.
using Environment = std::map<std::string, Value>;

/// Binds inputs then outputs positionally. Throws ValueError on an arity or
/// type mismatch.
Environment makeEnvironment(const MethodSignature& method, std::span<const Value> inputs,
                            std::span<const Value> outputs);

/// Evaluates `e` with the helpers of `unit`. Chars come back as one-character
/// strings. Throws EvalError.
Value evalExpr(const ExprPtr& e, const Environment& env, const SpecUnit& unit, const EvalLimits& limits = {});

/// The tuples a quantifier ranges over in `env`, one Value per bound
/// variable, in enumeration order. Throws EvalError (UnboundedQuantifier when
/// no finite domain can be derived, QuantifierDomainTooLarge past the cap).
std::vector<std::vector<Value>> boundQuantifierDomain(const ExprPtr& quantifier, const Environment& env,
                                                      const SpecUnit& unit, const EvalLimits& limits = {});

enum class Verdict { True, False, Unknown };

std::string_view toString(Verdict v);

struct SpecVerdict {
  Verdict verdict = Verdict::Unknown;
  /// Empty for True. For False names the first failing clause; for Unknown
  /// the first evaluation error.
  std::string diagnosis;
  std::optional<std::size_t> clause;  // index into the clause list
  std::optional<EvalErrorKind> error;
};

/// Conjunction of the ensures clauses. A clause that is definitely false
/// makes the verdict False even when another clause raised an error; an
/// error with no false clause makes it Unknown.
SpecVerdict evalSpec(const SpecUnit& unit, const Environment& env, const EvalLimits& limits = {});

/// Same over the requires clauses (inputs only need to be bound).
SpecVerdict evalRequires(const SpecUnit& unit, const Environment& env, const EvalLimits& limits = {});

/// Runs `fn` on a thread with a stack large enough for deep helper
/// recursion, rethrowing whatever it throws.
void runOnLargeStack(const std::function<void()>& fn);

}  // namespace specjudge
