#pragma once

#include <string>

#include "specjudge/mutation.h"
#include "specjudge/task.h"

namespace specjudge {

enum class HarnessKind { Correctness, Completeness, AlternateCheck };

std::string_view toString(HarnessKind kind);

/// A self-contained Dafny program checking one Hoare triple.
struct Harness {
  HarnessKind kind = HarnessKind::Correctness;
  std::string taskId;
  std::string id;  // test id or mutant id
  std::string source;

  /// `<task>__<kind>__<id>.dfy`, with characters outside [A-Za-z0-9._-]
  /// replaced by '_'.
  std::string fileName() const;
};

struct HarnessOptions {
  /// Adds `{:fuel f}` to recursive helpers, f = longest input collection + 1.
  bool fuelHints = false;
};

/// Helpers verbatim, then the spec method with its requires/ensures clauses
/// and a body that fixes the inputs to the test values and assigns the
/// outputs. Layout of the body:
///
///   var a_h1 := new int[] [3, 4, 5, 6];      // one per array/seq input
///   assert <requires>[a := a_h1, n := 5];    // per requires clause
///   assume {:axiom} a[..a.Length] == a_h1[..a_h1.Length];
///   assert a[0] == a_h1[0] && ... ;          // skipped when empty
///   assume {:axiom} n == 5;                  // scalar inputs
///   result := [4, 5];
Harness genCorrectnessHarness(const TaskRecord& task, const TestCase& test, const HarnessOptions& opts = {});

/// Same program with the mutant's outputs assigned; nothing else differs.
Harness genCompletenessHarness(const TaskRecord& task, const TestCase& parent, const MutantCase& mutant,
                               const HarnessOptions& opts = {});

/// {x == i && phi(x, y)} skip {y == o}: inputs fixed as above, the output
/// havocked, each ensures clause assumed, then output equality asserted.
/// Throws std::invalid_argument for methods with more than one output.
Harness genAlternateHarness(const TaskRecord& task, const TestCase& test, const HarnessOptions& opts = {});

}  // namespace specjudge
