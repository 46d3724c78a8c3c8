#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "specjudge/alternate.h"
#include "specjudge/dafny.h"
#include "specjudge/pipeline.h"

namespace {

using namespace specjudge;

struct Options {
  std::string dataset;
  std::vector<std::string> specs;
  std::vector<std::string> tasks;
  std::string backend = "eval";
  std::size_t mutantsPerTest = 5;
  std::uint64_t seed = 0;
  std::size_t maxAttempts = 64;
  std::string threshold = "0.66";
  long timeoutSecs = 60;
  std::size_t jobs = 0;
  std::string dafnyPath;
  std::string curated;
  std::string labels;
  std::string out;
  std::string emitDir;
  bool fuelHints = false;
  std::size_t maxRecursionDepth = EvalLimits{}.maxRecursionDepth;
  std::size_t maxQuantifierDomain = EvalLimits{}.maxQuantifierDomain;
};

void addInputOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--dataset", o.dataset, "Dataset JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--specs", o.specs, "Spec directory or file (repeatable)")->required();
  cmd->add_option("--task", o.tasks, "Only this task id (repeatable)");
  cmd->add_option("--backend", o.backend, "eval | dafny | both")
      ->check(CLI::IsMember({"eval", "dafny", "both"}));
  cmd->add_option("--dafny-path", o.dafnyPath, std::string("Verifier executable (else $") + kDafnyPathEnv +
                                                   ", else PATH)");
  cmd->add_option("--timeout-secs", o.timeoutSecs, "Per-harness verifier timeout")->check(CLI::PositiveNumber);
  cmd->add_option("--max-recursion-depth", o.maxRecursionDepth, "Evaluator helper recursion limit");
  cmd->add_option("--max-quantifier-domain", o.maxQuantifierDomain, "Evaluator quantifier tuple limit");
}

RunConfig toConfig(const Options& o) {
  RunConfig cfg;
  cfg.dataset = o.dataset;
  for (const auto& s : o.specs) cfg.specs.emplace_back(s);
  cfg.tasks = o.tasks;
  cfg.backend = parseBackendKind(o.backend);
  cfg.mutation.mutantsPerTest = o.mutantsPerTest;
  cfg.mutation.seed = o.seed;
  cfg.mutation.maxAttempts = o.maxAttempts;
  cfg.threshold = Threshold::parse(o.threshold);
  cfg.limits.maxRecursionDepth = o.maxRecursionDepth;
  cfg.limits.maxQuantifierDomain = o.maxQuantifierDomain;
  cfg.dafnyPath = o.dafnyPath;
  cfg.timeout = std::chrono::seconds(o.timeoutSecs);
  cfg.jobs = o.jobs;
  if (!o.emitDir.empty()) cfg.emitDir = o.emitDir;
  if (!o.curated.empty()) cfg.curated = o.curated;
  if (!o.labels.empty()) cfg.labels = o.labels;
  cfg.fuelHints = o.fuelHints;
  return cfg;
}

int runCommand(const Options& o) {
  RunConfig cfg = toConfig(o);
  RunReport report = run(cfg);
  std::string json = reportToJson(report, cfg);
  if (o.out.empty()) {
    std::cout << json;
    std::cerr << renderSummary(report);
    return 0;
  }
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + o.out);
  out << json;
  std::cout << renderSummary(report);
  return 0;
}

int alternateCommand(const Options& o) {
  RunConfig cfg = toConfig(o);
  if (cfg.backend == BackendKind::Both) cfg.backend = BackendKind::Dafny;
  RunContext ctx = prepareContext(cfg);
  for (const auto& entry : loadEntries(cfg)) {
    if (!entry.parsed()) {
      std::cout << entry.taskId << "  unparsed  " << entry.diagnostic << "\n";
      continue;
    }
    const TaskRecord& task = *entry.record;
    for (const auto& test : task.tests) {
      BackendVerdict v;
      try {
        v = ctx.primary->checkAlternate(task, test);
      } catch (const std::invalid_argument& e) {
        v = {Truth::Unknown, e.what()};
      }
      const char* verdict = v.truth == Truth::Holds ? "VERIFIED" : v.truth == Truth::Refuted ? "FAILED" : "UNKNOWN";
      std::cout << task.taskId << "  " << test.id << "  " << verdict << "  " << v.detail << "\n";
    }
  }
  return 0;
}

int probeCommand(const std::string& explicitPath) {
  auto path = resolveDafnyPath(explicitPath);
  ToolInfo info = probeTool(path);
  if (info.present) {
    std::cout << "dafny " << info.version << " at " << info.path.string() << "\n";
    return 0;
  }
  std::cout << "dafny absent: " << info.diagnostic << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scores candidate postconditions for correctness and completeness against tests."};
  app.require_subcommand(1);
  Options o;

  auto* runCmd = app.add_subcommand("run", "Score every task and write the JSON report");
  addInputOptions(runCmd, o);
  runCmd->add_option("--mutants-per-test", o.mutantsPerTest, "Random mutants per test");
  runCmd->add_option("--seed", o.seed, "Mutation seed");
  runCmd->add_option("--max-attempts", o.maxAttempts, "Mutation attempts per test");
  runCmd->add_option("--threshold", o.threshold, "Completeness needed for STRONG");
  runCmd->add_option("--jobs", o.jobs, "Parallel backend queries (0 = all cores)");
  runCmd->add_option("--curated", o.curated, "Curated mutant sidecar JSON")->check(CLI::ExistingFile);
  runCmd->add_option("--labels", o.labels, "Label overrides JSON")->check(CLI::ExistingFile);
  runCmd->add_option("--out", o.out, "Report path (stdout when omitted)");
  runCmd->add_option("--emit-harnesses", o.emitDir, "Write every Dafny harness here");
  runCmd->add_flag("--fuel-hints", o.fuelHints, "Add {:fuel} to recursive helpers in harnesses");

  auto* altCmd = app.add_subcommand("alternate", "Check {x == i && phi(x, y)} skip {y == o} per test");
  addInputOptions(altCmd, o);

  std::string probePath;
  auto* probeCmd = app.add_subcommand("probe", "Report the verifier version");
  probeCmd->add_option("--dafny-path", probePath, "Verifier executable");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*runCmd) return runCommand(o);
    if (*altCmd) return alternateCommand(o);
    if (*probeCmd) return probeCommand(probePath);
  } catch (const std::exception& e) {
    std::cerr << "specjudge: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
