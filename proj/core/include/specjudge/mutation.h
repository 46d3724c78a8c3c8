#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "specjudge/task.h"

namespace specjudge {

/// splitmix64: state advances by the golden-ratio increment and each output
/// is the standard 64-bit finalizer of the new state. Fully specified so that
/// mutant sets are identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next();
  /// Uniform integer in [lo, hi] (inclusive), by rejection sampling.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool coin() { return (next() >> 63) != 0; }

  /// The splitmix64 output function applied to a single word.
  static std::uint64_t mix(std::uint64_t x);

 private:
  std::uint64_t state_;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Stream key for one generation attempt:
/// mix(mix(mix(mix(seed) ^ fnv(task)) ^ fnv(test)) ^ attempt).
std::uint64_t mutationKey(std::uint64_t seed, std::string_view taskId, std::string_view testId,
                          std::uint64_t attempt);

struct MutationConfig {
  std::size_t mutantsPerTest = 5;
  std::uint64_t seed = 0;
  std::size_t maxAttempts = 64;
};

enum class MutationKind { BoolFlip, IntDelta, StrReplace, StrAppend, ArrDrop, ArrInsert, Curated };

std::string_view toString(MutationKind kind);

/// What was changed. Fields not used by a kind stay at their defaults:
/// IntDelta uses `amount`; StrReplace uses `index` and `text`; StrAppend uses
/// `text`; ArrDrop uses `index`; ArrInsert uses `index` and `amount` (the
/// inserted element).
struct MutationDescriptor {
  MutationKind kind = MutationKind::Curated;
  std::size_t component = 0;  // which output was mutated
  std::size_t index = 0;
  BigInt amount = 0;
  std::string text;

  friend bool operator==(const MutationDescriptor&, const MutationDescriptor&) = default;
};

/// e.g. `IntDelta(-3)`, `ArrInsert(2, 7)`, `StrReplace(0, 'x')`.
std::string describe(const MutationDescriptor& d);

struct MutantCase {
  std::string id;      // "<test id>/m<k>", k from 1
  std::string parent;  // test id
  std::vector<Value> outputs;
  MutationDescriptor descriptor;
};

/// Applies one random per-type mutation. The result always differs from `v`
/// under exact comparison and has the same type.
Value mutateValue(const Value& v, SplitMix64& rng, MutationDescriptor& descriptor);

/// Up to `cfg.mutantsPerTest` mutants, pairwise distinct and distinct from
/// the expected outputs under the test's comparator. Fewer are returned when
/// `cfg.maxAttempts` attempts cannot fill the quota (a Bool output has only
/// one mutant). Multi-output tests mutate one component per mutant,
/// round-robin over the attempt index.
std::vector<MutantCase> generateMutants(std::string_view taskId, const TestCase& test, const MutationConfig& cfg);

/// Wraps explicitly supplied mutant outputs. Throws ValueError if one equals
/// the expected outputs, repeats an earlier one, or has the wrong arity or
/// types.
std::vector<MutantCase> curatedMutants(const TestCase& test, const std::vector<std::vector<Value>>& outputs);

/// Curated sidecar: {task_id: {test_id: [entry, ...]}}. An entry is a Dafny
/// literal string, a JSON number/bool/array of numbers (single output), or an
/// array of literal strings (one per output).
using CuratedLiterals = std::map<std::string, std::map<std::string, std::vector<std::vector<std::string>>>>;

/// Throws DatasetError on malformed input.
CuratedLiterals loadCurated(std::string_view json);

/// Parses the literal tuples of one test against the output parameters.
std::vector<std::vector<Value>> curatedValues(const std::vector<std::vector<std::string>>& literals,
                                              const std::vector<Param>& outputs);

}  // namespace specjudge
