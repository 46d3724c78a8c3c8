#include "specjudge/harness.h"

#include <gtest/gtest.h>

#include <sstream>

#include "specjudge/parser.h"
#include "support.h"

namespace specjudge {
namespace {

TaskRecord taskFrom(const std::string& spec, const std::string& sig, std::vector<Value> in, std::vector<Value> out) {
  TaskRecord task;
  task.taskId = "t";
  task.signature = parseSignature(sig);
  task.spec = parseSpec(spec, task.signature);
  TestCase t;
  t.id = "test_1";
  t.inputs = std::move(in);
  t.expected = std::move(out);
  task.tests.push_back(t);
  return task;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(HarnessTest, MatchesGoldenFileForSharedElements) {
  TaskRecord task = testing::sampleTask("2");
  Harness h = genCorrectnessHarness(task, task.tests[0]);
  EXPECT_EQ(h.source, readFile(testing::sourceDir() / "tests" / "golden" / "2__correctness__test_1.dfy"));
  EXPECT_EQ(h.fileName(), "2__correctness__test_1.dfy");
}

TEST(HarnessTest, ScalarInputsAreAssumedWithoutElementAsserts) {
  TaskRecord task = taskFrom("method M(b: bool, n: int) returns (r: int)\n  ensures r >= n\n",
                             "method M(b: bool, n: int) returns (r: int)",
                             {Value::boolean(true), Value::integer(-2)}, {Value::integer(0)});
  std::string src = genCorrectnessHarness(task, task.tests[0]).source;
  EXPECT_NE(src.find("  assume {:axiom} b == true;\n"), std::string::npos);
  EXPECT_NE(src.find("  assume {:axiom} n == -2;\n"), std::string::npos);
  EXPECT_EQ(src.find("assert"), std::string::npos);
  EXPECT_NE(src.find("  r := 0;\n}"), std::string::npos);
}

TEST(HarnessTest, EmptyArrayGetsNoElementAssert) {
  TaskRecord task = taskFrom("method M(a: array<int>) returns (r: int)\n  ensures r == a.Length\n",
                             "method M(a: array<int>) returns (r: int)", {Value::array({})}, {Value::integer(0)});
  std::string src = genCorrectnessHarness(task, task.tests[0]).source;
  EXPECT_NE(src.find("  var a_h1 := new int[] [];\n"), std::string::npos);
  EXPECT_NE(src.find("  assume {:axiom} a[..a.Length] == a_h1[..a_h1.Length];\n"), std::string::npos);
  EXPECT_EQ(src.find("assert"), std::string::npos);
}

TEST(HarnessTest, SequenceAndStringInputs) {
  TaskRecord task = taskFrom("method M(s: seq<int>, w: string) returns (r: int)\n  ensures r == |s| + |w|\n",
                             "method M(s: seq<int>, w: string) returns (r: int)",
                             {Value::sequence({7, 8}), Value::string("hi")}, {Value::integer(4)});
  std::string src = genCorrectnessHarness(task, task.tests[0]).source;
  EXPECT_NE(src.find("  var s_h1 := [7, 8];\n"), std::string::npos);
  EXPECT_NE(src.find("  assume {:axiom} s == s_h1;\n  assert s[0] == s_h1[0] && s[1] == s_h1[1];\n"),
            std::string::npos);
  EXPECT_NE(src.find("  assume {:axiom} w == \"hi\";\n"), std::string::npos);
}

TEST(HarnessTest, RequiresAreReemittedAndAssertedOnTheInputs) {
  TaskRecord task = testing::sampleTask("3");
  std::string src = genCorrectnessHarness(task, task.tests[1]).source;
  EXPECT_NE(src.find("  requires n >= 2\n"), std::string::npos);
  EXPECT_NE(src.find("{\n  assert 10 >= 2;\n  assume {:axiom} n == 10;\n  result := true;\n}"), std::string::npos);
}

TEST(HarnessTest, MutantHarnessDiffersOnlyInOutputAssignment) {
  TaskRecord task = testing::sampleTask("2");
  const TestCase& t = task.tests[0];
  MutantCase m{"test_1/m1", "test_1", {Value::sequence({6})}, {}};
  Harness correct = genCorrectnessHarness(task, t);
  Harness mutant = genCompletenessHarness(task, t, m);
  EXPECT_EQ(mutant.kind, HarnessKind::Completeness);
  EXPECT_EQ(mutant.fileName(), "2__completeness__test_1_m1.dfy");
  auto a = lines(correct.source), b = lines(mutant.source);
  ASSERT_EQ(a.size(), b.size());
  std::vector<std::size_t> diff;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) diff.push_back(i);
  }
  ASSERT_EQ(diff.size(), 1u);
  EXPECT_EQ(a[diff[0]], "  result := [4, 5];");
  EXPECT_EQ(b[diff[0]], "  result := [6];");
}

TEST(HarnessTest, AlternateHarnessAssumesPostconditionAndAssertsOutput) {
  TaskRecord task = testing::sampleTask("2-precise", "variants.json");
  std::string src = genAlternateHarness(task, task.tests[0]).source;
  EXPECT_EQ(src.find("  ensures"), std::string::npos);
  EXPECT_NE(src.find("  result := *;\n  assume {:axiom} forall x :: x in result <==>"), std::string::npos);
  EXPECT_NE(src.find("  assert result == [4, 5];\n}"), std::string::npos);

  TaskRecord multi = taskFrom("method M(n: int) returns (a: int, b: int)\n  ensures a == b\n",
                              "method M(n: int) returns (a: int, b: int)", {Value::integer(1)},
                              {Value::integer(1), Value::integer(1)});
  EXPECT_THROW(genAlternateHarness(multi, multi.tests[0]), std::invalid_argument);
}

TEST(HarnessTest, FuelHintsOnlyForRecursiveHelpers) {
  TaskRecord task = testing::sampleTask("105");
  HarnessOptions opts;
  EXPECT_EQ(genCorrectnessHarness(task, task.tests[0], opts).source.find("{:fuel"), std::string::npos);
  opts.fuelHints = true;
  std::string src = genCorrectnessHarness(task, task.tests[0], opts).source;
  EXPECT_NE(src.find("function {:fuel 4} countTo("), std::string::npos);
  TaskRecord shared = testing::sampleTask("2");
  EXPECT_EQ(genCorrectnessHarness(shared, shared.tests[0], opts).source.find("{:fuel"), std::string::npos);
}

TEST(HarnessTest, FileNamesAreSanitized) {
  Harness h{HarnessKind::AlternateCheck, "a/b c", "test 1", ""};
  EXPECT_EQ(h.fileName(), "a_b_c__alternate__test_1.dfy");
}

TEST(HarnessTest, EveryGeneratedHarnessParsesAndIsDeterministic) {
  for (const auto& [id, file] : std::vector<std::pair<std::string, std::string>>{
           {"2", "dataset.json"}, {"3", "dataset.json"}, {"61", "dataset.json"}, {"105", "dataset.json"},
           {"145", "dataset.json"}, {"161", "dataset.json"}, {"234", "dataset.json"}, {"572", "dataset.json"},
           {"2-precise", "variants.json"}, {"2-vacuous", "variants.json"}}) {
    TaskRecord task = testing::sampleTask(id, file);
    for (const auto& t : task.tests) {
      SCOPED_TRACE(id + "/" + t.id);
      for (const Harness& h : {genCorrectnessHarness(task, t), genAlternateHarness(task, t)}) {
        Program p;
        ASSERT_NO_THROW(p = parseProgram(h.source, true)) << h.source;
        ASSERT_EQ(p.methods.size(), 1u);
        EXPECT_TRUE(p.methods[0].body.has_value());
      }
      EXPECT_EQ(genCorrectnessHarness(task, t).source, genCorrectnessHarness(task, t).source);
    }
  }
}

}  // namespace
}  // namespace specjudge
