#include "specjudge/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "specjudge/dafny.h"
#include "specjudge/harness.h"

namespace specjudge {

using Json = nlohmann::ordered_json;

std::string_view toString(BackendKind kind) {
  switch (kind) {
    case BackendKind::Eval: return "eval";
    case BackendKind::Dafny: return "dafny";
    case BackendKind::Both: return "both";
  }
  return "?";
}

BackendKind parseBackendKind(std::string_view text) {
  if (text == "eval") return BackendKind::Eval;
  if (text == "dafny") return BackendKind::Dafny;
  if (text == "both") return BackendKind::Both;
  throw std::invalid_argument("unknown backend '" + std::string(text) + "'");
}

void parallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex errorMutex;
  auto worker = [&] {
    while (!failed) {
      std::size_t i = next++;
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(errorMutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

RunContext prepareContext(const RunConfig& cfg) {
  RunContext ctx;
  ctx.kind = cfg.backend;
  auto eval = std::make_shared<EvalBackend>(cfg.limits);
  if (cfg.backend == BackendKind::Eval) {
    ctx.primary = eval;
  } else {
    auto path = resolveDafnyPath(cfg.dafnyPath);
    if (path.empty()) {
      throw ConfigError("no Dafny executable: pass --dafny-path, set " + std::string(kDafnyPathEnv) +
                        " or put dafny on PATH");
    }
    auto verifier = std::make_shared<DafnyVerifier>(path, cfg.timeout, cfg.emitDir);
    ctx.primary = std::make_shared<DafnyBackend>(verifier, HarnessOptions{cfg.fuelHints});
    if (cfg.backend == BackendKind::Both) ctx.secondary = eval;
  }
  if (cfg.curated) ctx.curated = loadCurated(readFile(*cfg.curated));
  if (cfg.labels) ctx.labels = loadLabels(readFile(*cfg.labels));
  return ctx;
}

std::vector<DatasetEntry> loadEntries(const RunConfig& cfg) {
  auto entries = loadDataset(readFile(cfg.dataset), specFilesLookup(cfg.specs));
  if (cfg.tasks.empty()) return entries;
  std::set<std::string> wanted(cfg.tasks.begin(), cfg.tasks.end());
  std::erase_if(entries, [&](const DatasetEntry& e) { return !wanted.count(e.taskId); });
  return entries;
}

namespace {

struct Query {
  BackendVerdict primary;
  std::optional<BackendVerdict> secondary;
};

template <typename F>
BackendVerdict guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {Truth::Unknown, e.what()};
  }
}

bool mismatch(const Query& q) {
  return q.secondary && q.primary.truth != Truth::Unknown && q.secondary->truth != Truth::Unknown &&
         q.primary.truth != q.secondary->truth;
}

void writeHarness(const std::filesystem::path& dir, const Harness& h) {
  std::ofstream out(dir / h.fileName(), std::ios::binary);
  out << h.source;
}

std::vector<MutantCase> mutantsFor(const TaskRecord& task, const TestCase& test, const RunConfig& cfg,
                                   const RunContext& ctx) {
  auto curatedTask = ctx.curated.find(task.taskId);
  if (curatedTask == ctx.curated.end()) return generateMutants(task.taskId, test, cfg.mutation);
  auto curatedTest = curatedTask->second.find(test.id);
  if (curatedTest == curatedTask->second.end()) return {};
  try {
    return curatedMutants(test, curatedValues(curatedTest->second, task.spec.method.outputs));
  } catch (const std::exception& e) {
    throw DatasetError("curated mutants for " + task.taskId + "/" + test.id + ": " + e.what());
  }
}

}  // namespace

RunReport runTasks(const std::vector<DatasetEntry>& entries, const RunConfig& cfg, const RunContext& ctx) {
  RunReport report;
  report.seed = cfg.mutation.seed;
  report.backend = ctx.kind;
  if (ctx.kind != BackendKind::Eval) report.toolVersion = ctx.primary->toolVersion();

  auto query = [&](auto&& call) {
    Query q{guarded([&] { return call(*ctx.primary); }), std::nullopt};
    if (ctx.secondary) q.secondary = guarded([&] { return call(*ctx.secondary); });
    return q;
  };

  struct TestJob {
    std::size_t entry;
    const TestCase* test;
  };
  std::vector<TestJob> testJobs;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].parsed()) continue;
    for (const auto& t : entries[i].record->tests) testJobs.push_back({i, &t});
  }
  std::vector<Query> testResults(testJobs.size());
  parallelFor(testJobs.size(), cfg.jobs, [&](std::size_t k) {
    const TaskRecord& task = *entries[testJobs[k].entry].record;
    const TestCase& test = *testJobs[k].test;
    testResults[k] = query([&](const Backend& b) { return b.checkTest(task, test); });
  });

  std::vector<std::vector<TestResult>> tests(entries.size());
  std::vector<std::vector<std::string>> mismatches(entries.size());
  for (std::size_t k = 0; k < testJobs.size(); ++k) {
    const Query& q = testResults[k];
    tests[testJobs[k].entry].push_back({testJobs[k].test->id, toTestVerdict(q.primary.truth), q.primary.detail});
    if (mismatch(q)) mismatches[testJobs[k].entry].push_back(testJobs[k].test->id);
  }

  struct MutantJob {
    std::size_t entry;
    const TestCase* parent;
    MutantCase mutant;
  };
  std::vector<MutantJob> mutantJobs;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].parsed() || !gatePassed(tests[i])) continue;
    const TaskRecord& task = *entries[i].record;
    for (const auto& t : task.tests) {
      for (auto& m : mutantsFor(task, t, cfg, ctx)) mutantJobs.push_back({i, &t, std::move(m)});
    }
  }
  std::vector<Query> mutantResults(mutantJobs.size());
  parallelFor(mutantJobs.size(), cfg.jobs, [&](std::size_t k) {
    const auto& job = mutantJobs[k];
    const TaskRecord& task = *entries[job.entry].record;
    mutantResults[k] = query([&](const Backend& b) { return b.checkMutant(task, *job.parent, job.mutant); });
  });

  std::vector<std::vector<MutantResult>> mutants(entries.size());
  for (std::size_t k = 0; k < mutantJobs.size(); ++k) {
    const Query& q = mutantResults[k];
    auto& job = mutantJobs[k];
    if (mismatch(q)) mismatches[job.entry].push_back(job.mutant.id);
    mutants[job.entry].push_back({std::move(job.mutant), toMutantVerdict(q.primary.truth), q.primary.detail});
  }

  if (cfg.emitDir) {
    std::filesystem::create_directories(*cfg.emitDir);
    HarnessOptions opts{cfg.fuelHints};
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!entries[i].parsed()) continue;
      const TaskRecord& task = *entries[i].record;
      for (const auto& t : task.tests) writeHarness(*cfg.emitDir, genCorrectnessHarness(task, t, opts));
      for (const auto& m : mutants[i]) {
        writeHarness(*cfg.emitDir, genCompletenessHarness(task, *task.test(m.mutant.parent), m.mutant, opts));
      }
    }
  }

  double completenessSum = 0;
  std::size_t completenessCount = 0;
  std::vector<SpecReport> reports;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    TaskOutcome outcome;
    outcome.taskId = entries[i].taskId;
    ++report.summary.nTasks;
    if (!entries[i].parsed()) {
      outcome.diagnostic = entries[i].diagnostic;
      ++report.summary.nUnparsed;
      report.tasks.push_back(std::move(outcome));
      continue;
    }
    std::optional<SpecLabel> label = entries[i].record->label;
    if (auto it = ctx.labels.find(outcome.taskId); it != ctx.labels.end()) label = it->second;
    SpecReport r = buildReport(outcome.taskId, std::move(tests[i]), std::move(mutants[i]), cfg.threshold, label);
    if (r.correct) ++report.summary.nCorrect;
    if (r.classification == Classification::Wrong) ++report.summary.nWrong;
    if (r.classification == Classification::Undetermined) ++report.summary.nUndetermined;
    if (r.completeness) {
      completenessSum += toDouble(*r.completeness);
      ++completenessCount;
    }
    reports.push_back(r);
    outcome.report = std::move(r);
    outcome.backendMismatch = std::move(mismatches[i]);
    report.tasks.push_back(std::move(outcome));
  }
  if (completenessCount > 0) report.summary.meanCompleteness = completenessSum / static_cast<double>(completenessCount);
  report.summary.labelAgreementRate = labelAgreement(reports, {}).rate;
  return report;
}

RunReport run(const RunConfig& cfg) {
  RunContext ctx = prepareContext(cfg);
  return runTasks(loadEntries(cfg), cfg, ctx);
}

namespace {

Json optionalString(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

Json optionalPath(const std::optional<std::filesystem::path>& p) {
  return p ? Json(p->generic_string()) : Json(nullptr);
}

Json configEcho(const RunConfig& cfg) {
  Json specs = Json::array();
  for (const auto& s : cfg.specs) specs.push_back(s.generic_string());
  Json j;
  j["dataset"] = cfg.dataset.generic_string();
  j["specs"] = specs;
  j["tasks"] = cfg.tasks;
  j["backend"] = std::string(toString(cfg.backend));
  j["mutants_per_test"] = cfg.mutation.mutantsPerTest;
  j["max_attempts"] = cfg.mutation.maxAttempts;
  j["threshold"] = formatRatio(cfg.threshold.value());
  j["max_recursion_depth"] = cfg.limits.maxRecursionDepth;
  j["max_quantifier_domain"] = cfg.limits.maxQuantifierDomain;
  j["timeout_secs"] = cfg.timeout.count();
  j["curated"] = optionalPath(cfg.curated);
  j["labels"] = optionalPath(cfg.labels);
  j["emit_harnesses"] = optionalPath(cfg.emitDir);
  j["fuel_hints"] = cfg.fuelHints;
  return j;
}

Json valuesJson(const std::vector<Value>& values) {
  Json a = Json::array();
  for (const auto& v : values) a.push_back(toDisplayString(v));
  return a;
}

Json taskJson(const TaskOutcome& t) {
  Json j;
  j["task_id"] = t.taskId;
  if (!t.report) {
    j["status"] = "unparsed";
    j["diagnostic"] = t.diagnostic;
    return j;
  }
  const SpecReport& r = *t.report;
  j["status"] = "ok";
  j["diagnostic"] = nullptr;
  Json tests = Json::array();
  for (const auto& tr : r.tests) {
    tests.push_back({{"id", tr.testId}, {"verdict", std::string(toString(tr.verdict))}, {"detail", tr.detail}});
  }
  j["tests"] = tests;
  j["correct"] = r.correct;
  j["t1_size"] = r.t1Size;
  j["killed"] = r.killed;
  j["survived"] = r.survived;
  j["unknown_mutants"] = r.unknownMutants;
  j["completeness"] = r.completeness ? Json(formatRatio(*r.completeness)) : Json(nullptr);
  j["completeness_value"] = r.completeness ? Json(toDouble(*r.completeness)) : Json(nullptr);
  Json perTest = Json::array();
  for (const auto& p : r.perTest) {
    Json fraction = p.total ? Json(static_cast<double>(p.killed) / static_cast<double>(p.total)) : Json(nullptr);
    perTest.push_back({{"test_id", p.testId}, {"killed", p.killed}, {"total", p.total}, {"fraction", fraction}});
  }
  j["per_test"] = perTest;
  j["classification"] = std::string(toString(r.classification));
  j["label"] = r.label ? Json(std::string(toString(*r.label))) : Json(nullptr);
  j["agreement"] = r.agreement ? Json(*r.agreement) : Json(nullptr);
  Json mutants = Json::array();
  for (const auto& m : r.mutants) {
    mutants.push_back({{"id", m.mutant.id},
                       {"parent", m.mutant.parent},
                       {"outputs", valuesJson(m.mutant.outputs)},
                       {"mutation", describe(m.mutant.descriptor)},
                       {"verdict", std::string(toString(m.verdict))},
                       {"detail", m.detail}});
  }
  j["mutants"] = mutants;
  j["backend_mismatch"] = t.backendMismatch;
  return j;
}

}  // namespace

std::string reportToJson(const RunReport& report, const RunConfig& cfg) {
  Json doc;
  doc["run_metadata"] = {{"seed", report.seed},
                         {"backend", std::string(toString(report.backend))},
                         {"tool_version", optionalString(report.toolVersion)},
                         {"config", configEcho(cfg)}};
  Json tasks = Json::array();
  for (const auto& t : report.tasks) tasks.push_back(taskJson(t));
  doc["tasks"] = tasks;
  const RunSummary& s = report.summary;
  doc["summary"] = {{"n_tasks", s.nTasks},
                    {"n_unparsed", s.nUnparsed},
                    {"n_correct", s.nCorrect},
                    {"n_wrong", s.nWrong},
                    {"n_undetermined", s.nUndetermined},
                    {"mean_completeness", s.meanCompleteness ? Json(*s.meanCompleteness) : Json(nullptr)},
                    {"label_agreement_rate", s.labelAgreementRate ? Json(*s.labelAgreementRate) : Json(nullptr)}};
  return doc.dump(2) + "\n";
}

namespace {

constexpr const char* kAbsent = "—";

std::size_t displayWidth(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string pad(const std::string& s, std::size_t width) { return s + std::string(width - displayWidth(s), ' '); }

}  // namespace

std::string renderSummary(const RunReport& report) {
  std::vector<std::vector<std::string>> rows{{"task", "correct", "completeness", "class", "label", "agree"}};
  for (const auto& t : report.tasks) {
    if (!t.report) {
      rows.push_back({t.taskId, "unparsed", kAbsent, kAbsent, kAbsent, kAbsent});
      continue;
    }
    const SpecReport& r = *t.report;
    std::string completeness = kAbsent;
    if (r.completeness) {
      std::ostringstream os;
      os << formatRatio(*r.completeness) << " (" << std::fixed << std::setprecision(2) << toDouble(*r.completeness)
         << ")";
      completeness = os.str();
    }
    rows.push_back({t.taskId, r.correct ? "yes" : "no", completeness, std::string(toString(r.classification)),
                    r.label ? std::string(toString(*r.label)) : kAbsent,
                    r.agreement ? (*r.agreement ? "yes" : "no") : kAbsent});
  }
  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], displayWidth(row[c]));
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += c + 1 == row.size() ? row[c] : pad(row[c], widths[c]) + "  ";
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace specjudge
