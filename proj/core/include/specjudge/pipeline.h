#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specjudge/backend.h"
#include "specjudge/dataset.h"
#include "specjudge/metrics.h"
#include "specjudge/mutation.h"

namespace specjudge {

enum class BackendKind { Eval, Dafny, Both };

std::string_view toString(BackendKind kind);
/// "eval" | "dafny" | "both". Throws std::invalid_argument.
BackendKind parseBackendKind(std::string_view text);

struct RunConfig {
  std::filesystem::path dataset;
  std::vector<std::filesystem::path> specs;
  /// Empty means every task.
  std::vector<std::string> tasks;
  BackendKind backend = BackendKind::Eval;
  MutationConfig mutation;
  Threshold threshold;
  EvalLimits limits;
  std::string dafnyPath;
  std::chrono::seconds timeout{60};
  /// 0 picks the number of hardware threads.
  std::size_t jobs = 0;
  std::optional<std::filesystem::path> emitDir;
  std::optional<std::filesystem::path> curated;
  std::optional<std::filesystem::path> labels;
  bool fuelHints = false;
};

struct TaskOutcome {
  std::string taskId;
  /// Absent for tasks that failed to parse.
  std::optional<SpecReport> report;
  std::string diagnostic;
  /// Test and mutant ids on which the two backends gave opposite definite
  /// answers (only with BackendKind::Both).
  std::vector<std::string> backendMismatch;
};

struct RunSummary {
  std::size_t nTasks = 0;
  std::size_t nUnparsed = 0;
  std::size_t nCorrect = 0;
  std::size_t nWrong = 0;
  std::size_t nUndetermined = 0;
  std::optional<double> meanCompleteness;
  std::optional<double> labelAgreementRate;
};

struct RunReport {
  std::uint64_t seed = 0;
  BackendKind backend = BackendKind::Eval;
  std::optional<std::string> toolVersion;
  std::vector<TaskOutcome> tasks;
  RunSummary summary;
};

/// Everything a run needs besides the dataset itself.
struct RunContext {
  std::shared_ptr<const Backend> primary;
  /// Cross-checked against the primary when set.
  std::shared_ptr<const Backend> secondary;
  BackendKind kind = BackendKind::Eval;
  CuratedLiterals curated;
  std::map<std::string, SpecLabel> labels;
};

/// Builds the backends and reads the sidecar files named by `cfg`. Throws
/// ConfigError when a Dafny backend is requested and the tool cannot be found,
/// DatasetError on unreadable sidecars.
RunContext prepareContext(const RunConfig& cfg);

/// Reads the dataset and specs, keeping only the requested tasks.
std::vector<DatasetEntry> loadEntries(const RunConfig& cfg);

/// Scores `entries`. Tests of all tasks are checked in parallel, then the
/// mutants of every task that passed its correctness gate. The result does
/// not depend on the number of jobs.
RunReport runTasks(const std::vector<DatasetEntry>& entries, const RunConfig& cfg, const RunContext& ctx);

/// loadEntries + prepareContext + runTasks.
RunReport run(const RunConfig& cfg);

/// The machine-readable report. Identical inputs give identical bytes.
std::string reportToJson(const RunReport& report, const RunConfig& cfg);

/// One row per task: id, correct, completeness, classification, label,
/// agreement. Absent cells print as "—".
std::string renderSummary(const RunReport& report);

/// Calls fn(0..n-1) on up to `jobs` threads (0 = hardware threads). The first
/// exception is rethrown after all workers stop.
void parallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace specjudge
