#pragma once

#include <memory>
#include <optional>
#include <string>

#include "specjudge/alternate.h"
#include "specjudge/dafny.h"
#include "specjudge/evaluator.h"
#include "specjudge/harness.h"
#include "specjudge/mutation.h"

namespace specjudge {

/// Whether the triple under test holds. Only a definite Holds/Refuted counts
/// toward a metric; Unknown never does.
enum class Truth { Holds, Refuted, Unknown };

std::string_view toString(Truth t);

struct BackendVerdict {
  Truth truth = Truth::Unknown;
  std::string detail;
};

/// Decides the three kinds of triple. Implementations are safe to call
/// concurrently.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string name() const = 0;
  virtual std::optional<std::string> toolVersion() const { return std::nullopt; }

  /// {x == i} S {phi}, with S assigning the expected outputs.
  virtual BackendVerdict checkTest(const TaskRecord& task, const TestCase& test) const = 0;
  /// Same with the mutant's outputs.
  virtual BackendVerdict checkMutant(const TaskRecord& task, const TestCase& parent,
                                     const MutantCase& mutant) const = 0;
  /// {x == i && phi(x, y)} skip {y == o}.
  virtual BackendVerdict checkAlternate(const TaskRecord& task, const TestCase& test) const = 0;
};

class EvalBackend : public Backend {
 public:
  explicit EvalBackend(EvalLimits limits = {}) : limits_(limits) {}

  std::string name() const override { return "eval"; }
  BackendVerdict checkTest(const TaskRecord& task, const TestCase& test) const override;
  BackendVerdict checkMutant(const TaskRecord& task, const TestCase& parent, const MutantCase& mutant) const override;
  BackendVerdict checkAlternate(const TaskRecord& task, const TestCase& test) const override;

 private:
  EvalLimits limits_;
};

class DafnyBackend : public Backend {
 public:
  DafnyBackend(std::shared_ptr<const DafnyVerifier> verifier, HarnessOptions opts = {})
      : verifier_(std::move(verifier)), opts_(opts) {}

  std::string name() const override { return "dafny"; }
  std::optional<std::string> toolVersion() const override { return verifier_->tool().version; }
  BackendVerdict checkTest(const TaskRecord& task, const TestCase& test) const override;
  BackendVerdict checkMutant(const TaskRecord& task, const TestCase& parent, const MutantCase& mutant) const override;
  BackendVerdict checkAlternate(const TaskRecord& task, const TestCase& test) const override;

 private:
  BackendVerdict run(const Harness& h) const;

  std::shared_ptr<const DafnyVerifier> verifier_;
  HarnessOptions opts_;
};

}  // namespace specjudge
