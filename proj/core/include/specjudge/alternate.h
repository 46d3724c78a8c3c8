#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specjudge/dafny.h"
#include "specjudge/evaluator.h"

namespace specjudge {

/// Outputs other than `expected` the evaluator tries when deciding the
/// alternate check, deduplicated and in a fixed order:
///   Bool: the negation.
///   Int: expected +/- 1..10.
///   Str: each single-character drop, each replacement by a character of the
///        inputs or the expected string, and each such character appended.
///   Collections: every distinct permutation when the length is at most 7,
///        every single drop, and every single insertion or replacement using
///        elements of the inputs and the expected value, their minimum - 1
///        and maximum + 1.
/// At most `cap` candidates are returned.
std::vector<Value> alternateCandidates(const Value& expected, const std::vector<Value>& inputs,
                                       std::size_t cap = 50'000);

struct AlternateOutcome {
  /// Verified: no candidate other than the expected output satisfies the
  /// ensures clauses. Failed: `witness` does.
  VerifierVerdict verdict = VerifierVerdict::Unknown;
  std::optional<Value> witness;
  std::string detail;
  std::size_t candidates = 0;
};

/// {x == i && phi(x, y)} skip {y == o} decided by search over
/// alternateCandidates. Throws std::invalid_argument for multi-output methods.
AlternateOutcome alternateCheckEval(const TaskRecord& task, const TestCase& test, const EvalLimits& limits = {});

}  // namespace specjudge
