#include "specjudge/backend.h"

namespace specjudge {

std::string_view toString(Truth t) {
  switch (t) {
    case Truth::Holds: return "holds";
    case Truth::Refuted: return "refuted";
    case Truth::Unknown: return "unknown";
  }
  return "?";
}

namespace {

BackendVerdict fromSpecVerdict(const SpecVerdict& v) {
  switch (v.verdict) {
    case Verdict::True: return {Truth::Holds, {}};
    case Verdict::False: return {Truth::Refuted, v.diagnosis};
    case Verdict::Unknown: break;
  }
  return {Truth::Unknown, v.diagnosis};
}

BackendVerdict fromVerifier(VerifierVerdict verdict, std::string detail) {
  switch (verdict) {
    case VerifierVerdict::Verified: return {Truth::Holds, std::move(detail)};
    case VerifierVerdict::Failed: return {Truth::Refuted, std::move(detail)};
    case VerifierVerdict::Unknown: break;
  }
  return {Truth::Unknown, std::move(detail)};
}

}  // namespace

BackendVerdict EvalBackend::checkTest(const TaskRecord& task, const TestCase& test) const {
  return fromSpecVerdict(evalSpec(task.spec, makeEnvironment(task.spec.method, test.inputs, test.expected), limits_));
}

BackendVerdict EvalBackend::checkMutant(const TaskRecord& task, const TestCase& parent,
                                        const MutantCase& mutant) const {
  return fromSpecVerdict(
      evalSpec(task.spec, makeEnvironment(task.spec.method, parent.inputs, mutant.outputs), limits_));
}

BackendVerdict EvalBackend::checkAlternate(const TaskRecord& task, const TestCase& test) const {
  AlternateOutcome o = alternateCheckEval(task, test, limits_);
  return fromVerifier(o.verdict, std::move(o.detail));
}

BackendVerdict DafnyBackend::run(const Harness& h) const {
  VerifierOutcome o = verifier_->verify(h);
  std::string detail = o.message;
  if (o.verdict == VerifierVerdict::Unknown) detail = std::string(toString(o.reason)) + ": " + detail;
  return fromVerifier(o.verdict, std::move(detail));
}

BackendVerdict DafnyBackend::checkTest(const TaskRecord& task, const TestCase& test) const {
  return run(genCorrectnessHarness(task, test, opts_));
}

BackendVerdict DafnyBackend::checkMutant(const TaskRecord& task, const TestCase& parent,
                                         const MutantCase& mutant) const {
  return run(genCompletenessHarness(task, parent, mutant, opts_));
}

BackendVerdict DafnyBackend::checkAlternate(const TaskRecord& task, const TestCase& test) const {
  return run(genAlternateHarness(task, test, opts_));
}

}  // namespace specjudge
