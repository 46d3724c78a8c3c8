#include "specjudge/alternate.h"

#include <gtest/gtest.h>

#include <set>

#include "specjudge/backend.h"
#include "support.h"

namespace specjudge {
namespace {

std::set<std::string> rendered(const std::vector<Value>& vs) {
  std::set<std::string> out;
  for (const auto& v : vs) out.insert(toDisplayString(v));
  return out;
}

TEST(AlternateCandidatesTest, ScalarCandidates) {
  auto b = alternateCandidates(Value::boolean(true), {});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_FALSE(b[0].asBool());
  auto i = rendered(alternateCandidates(Value::integer(0), {}));
  EXPECT_EQ(i.size(), 20u);
  EXPECT_TRUE(i.count("10") && i.count("-10"));
  EXPECT_FALSE(i.count("0"));
}

TEST(AlternateCandidatesTest, CollectionCandidatesIncludePermutationsAndEdits) {
  std::vector<Value> inputs{Value::array({3, 4, 5, 6}), Value::array({5, 7, 4, 10})};
  auto c = rendered(alternateCandidates(Value::sequence({4, 5}), inputs));
  EXPECT_FALSE(c.count("[4, 5]"));
  for (const char* s : {"[5, 4]", "[4]", "[5]", "[4, 5, 7]", "[2, 4, 5]", "[4, 11]", "[4, 4]"}) {
    EXPECT_TRUE(c.count(s)) << s;
  }
}

TEST(AlternateCandidatesTest, StringCandidatesAndCap) {
  auto c = rendered(alternateCandidates(Value::string("ab"), {Value::string("xyz")}));
  for (const char* s : {"\"a\"", "\"b\"", "\"xb\"", "\"abz\""}) EXPECT_TRUE(c.count(s)) << s;
  EXPECT_EQ(alternateCandidates(Value::sequence({1, 2, 3, 4, 5, 6, 7}), {}, 100).size(), 100u);
}

TEST(AlternateCheckTest, PreciseSharedElementsSpecAdmitsThePermutation) {
  TaskRecord task = testing::sampleTask("2-precise", "variants.json");
  AlternateOutcome o = alternateCheckEval(task, task.tests[0]);
  EXPECT_EQ(o.verdict, VerifierVerdict::Failed);
  ASSERT_TRUE(o.witness.has_value());
  EXPECT_EQ(toDisplayString(*o.witness), "[5, 4]");
}

TEST(AlternateCheckTest, CubeSpecPinsTheOutput) {
  TaskRecord task = testing::sampleTask("234-fixed", "variants.json");
  for (const auto& t : task.tests) {
    AlternateOutcome o = alternateCheckEval(task, t);
    EXPECT_EQ(o.verdict, VerifierVerdict::Verified) << t.id;
    EXPECT_EQ(o.candidates, 20u);
  }
}

TEST(AlternateCheckTest, VacuousSpecFails) {
  TaskRecord task = testing::sampleTask("2-vacuous", "variants.json");
  EXPECT_EQ(alternateCheckEval(task, task.tests[0]).verdict, VerifierVerdict::Failed);
}

TEST(AlternateCheckTest, EvalBackendMapsVerdicts) {
  EvalBackend backend;
  TaskRecord precise = testing::sampleTask("2-precise", "variants.json");
  EXPECT_EQ(backend.checkAlternate(precise, precise.tests[0]).truth, Truth::Refuted);
  TaskRecord cube = testing::sampleTask("234-fixed", "variants.json");
  EXPECT_EQ(backend.checkAlternate(cube, cube.tests[2]).truth, Truth::Holds);
}

}  // namespace
}  // namespace specjudge
