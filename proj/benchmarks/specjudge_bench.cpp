#include <benchmark/benchmark.h>

#include <filesystem>

#include "specjudge/backend.h"
#include "specjudge/dataset.h"
#include "specjudge/evaluator.h"
#include "specjudge/harness.h"
#include "specjudge/mutation.h"
#include "specjudge/parser.h"
#include "specjudge/pipeline.h"

namespace specjudge {
namespace {

std::filesystem::path sampleDir() { return std::filesystem::path(SPECJUDGE_SOURCE_DIR) / "data" / "sample"; }

TaskRecord sampleTask(const std::string& id) {
  auto entries = loadDataset(readFile(sampleDir() / "dataset.json"), specFilesLookup({sampleDir() / "specs"}));
  for (auto& e : entries) {
    if (e.taskId == id && e.parsed()) return *e.record;
  }
  throw std::runtime_error("no sample task " + id);
}

// Existential over 2 <= k < n on a prime: the whole range is enumerated.
void BM_PrimeQuantifier(benchmark::State& state) {
  TaskRecord task = sampleTask("3");
  std::vector<Value> in{Value::integer(state.range(0))};
  std::vector<Value> out{Value::boolean(false)};
  Environment env = makeEnvironment(task.spec.method, in, out);
  for (auto _ : state) benchmark::DoNotOptimize(evalSpec(task.spec, env));
}
BENCHMARK(BM_PrimeQuantifier)->Arg(97)->Arg(7919)->Arg(104729);

void BM_RecursiveCount(benchmark::State& state) {
  TaskRecord task = sampleTask("105");
  std::vector<BigInt> flags(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < flags.size(); i += 3) flags[i] = 1;
  std::vector<Value> in{Value::array(flags)};
  std::vector<Value> out{Value::integer(static_cast<long long>((flags.size() + 2) / 3))};
  Environment env = makeEnvironment(task.spec.method, in, out);
  for (auto _ : state) benchmark::DoNotOptimize(evalSpec(task.spec, env));
}
BENCHMARK(BM_RecursiveCount)->Arg(100)->Arg(1000);

void BM_SharedElementsSpec(benchmark::State& state) {
  TaskRecord task = sampleTask("2");
  EvalBackend eval;
  for (auto _ : state) {
    for (const auto& t : task.tests) benchmark::DoNotOptimize(eval.checkTest(task, t));
  }
}
BENCHMARK(BM_SharedElementsSpec);

void BM_GenerateMutants(benchmark::State& state) {
  TestCase t{"test_1", {}, {Value::sequence({4, 5, 6, 7, 8, 9})}};
  MutationConfig cfg;
  cfg.mutantsPerTest = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(generateMutants("2", t, cfg));
  }
}
BENCHMARK(BM_GenerateMutants)->Arg(5)->Arg(50);

void BM_ParseSpecFile(benchmark::State& state) {
  std::string source = readFile(sampleDir() / "specs" / "task_id_2.dfy");
  MethodSignature sig =
      parseSignature("method similarElements (a:array<int>, b:array<int>) returns (result: seq<int>)");
  for (auto _ : state) benchmark::DoNotOptimize(parseSpec(source, sig));
}
BENCHMARK(BM_ParseSpecFile);

void BM_CorrectnessHarness(benchmark::State& state) {
  TaskRecord task = sampleTask("2");
  for (auto _ : state) benchmark::DoNotOptimize(genCorrectnessHarness(task, task.tests[0]));
}
BENCHMARK(BM_CorrectnessHarness);

void BM_SampleRun(benchmark::State& state) {
  RunConfig cfg;
  cfg.dataset = sampleDir() / "dataset.json";
  cfg.specs = {sampleDir() / "specs"};
  cfg.jobs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
}
BENCHMARK(BM_SampleRun)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace specjudge

BENCHMARK_MAIN();
