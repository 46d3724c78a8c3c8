#include "specjudge/dataset.h"

#include <gtest/gtest.h>

#include <fstream>

#include "specjudge/parser.h"
#include "support.h"

namespace specjudge {
namespace {

MethodSignature shared() {
  return parseSignature("method similarElements (arr1:array<int>, arr2:array<int>) returns (res: array<int>)");
}

TEST(SnippetTest, ReadsArrayEqualsShape) {
  TestCase t = parseTestSnippet("test_1",
                                "var a1:= new int[] [3, 4, 5, 6];\nvar a2:= new int[] [5, 7, 4, 10];\n"
                                "var e1:= new int[] [4, 5];\nvar res1:=similarElements(a1,a2);\n"
                                "assert arrayEquals(res1,e1);",
                                shared());
  EXPECT_EQ(t.id, "test_1");
  ASSERT_EQ(t.inputs.size(), 2u);
  EXPECT_EQ(toDisplayString(t.inputs[0]), "[3, 4, 5, 6]");
  EXPECT_EQ(toDisplayString(t.inputs[1]), "[5, 7, 4, 10]");
  ASSERT_EQ(t.expected.size(), 1u);
  EXPECT_EQ(toDisplayString(t.expected[0]), "[4, 5]");
  EXPECT_EQ(t.expected[0].type(), ValueType::ArrayInt);
}

TEST(SnippetTest, AcceptsEqualityAndSliceShapes) {
  auto sig = shared();
  const char* shapes[] = {"assert res == [4, 5];", "assert res[..] == [4, 5];",
                          "assert res[..res.Length] == [4, 5];", "assert [4, 5] == res;"};
  for (const char* shape : shapes) {
    SCOPED_TRACE(shape);
    TestCase t = parseTestSnippet("t", std::string("var res := similarElements([1], [2]);\n") + shape, sig);
    EXPECT_EQ(toDisplayString(t.expected[0]), "[4, 5]");
    EXPECT_EQ(toDisplayString(t.inputs[0]), "[1]");
  }
}

TEST(SnippetTest, ReadsBooleanAndScalarAssertions) {
  auto sig = parseSignature("method isNonPrime(n: int) returns (result: bool)");
  EXPECT_FALSE(parseTestSnippet("t", "var r := isNonPrime(2);\nassert !r;", sig).expected[0].asBool());
  EXPECT_TRUE(parseTestSnippet("t", "var n := 10;\nvar r := IsNonPrime(n);\nassert r;", sig).expected[0].asBool());
  auto cube = parseSignature("method cubeVolume(l: int) returns (v: int)");
  EXPECT_EQ(parseTestSnippet("t", "var r := cubeVolume(-3);\nassert r == -27;", cube).expected[0].asInt(), -27);
}

TEST(SnippetTest, SplitsConjunctionsAcrossOutputs) {
  auto sig = parseSignature("method m(x: int) returns (a: int, b: bool)");
  TestCase t = parseTestSnippet("t", "var p, q := m(1);\nassert p == 3 && q;", sig);
  EXPECT_EQ(t.expected[0].asInt(), 3);
  EXPECT_TRUE(t.expected[1].asBool());
}

TEST(SnippetTest, RejectsMalformedSnippets) {
  auto sig = shared();
  try {
    parseTestSnippet("t", "var r := similarElements([1], [2]);\nvar s := similarElements([1], [2]);\nassert r == [1];", sig);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.construct(), "multiple calls");
  }
  EXPECT_THROW(parseTestSnippet("t", "var r := similarElements([1], [2]);", sig), ParseError);
  EXPECT_THROW(parseTestSnippet("t", "var r := similarElements([1]);\nassert r == [1];", sig), ParseError);
  EXPECT_THROW(parseTestSnippet("t", "var r := similarElements(x, [2]);\nassert r == [1];", sig), ParseError);
  EXPECT_THROW(parseTestSnippet("t", "var r := similarElements([1], [2]);\nassert r == [1] && r == [2];", sig),
               ParseError);
  EXPECT_THROW(parseTestSnippet("t", "var r := similarElements([1], [2]);\nassert |r| == 1;", sig), ParseError);
}

TEST(DatasetTest, LoadsSampleTasksInNaturalOrder) {
  auto entries = loadDataset(readFile(testing::sampleDir() / "dataset.json"),
                             specFilesLookup({testing::sampleDir() / "specs"}));
  std::vector<std::string> ids;
  for (const auto& e : entries) {
    ids.push_back(e.taskId);
    EXPECT_TRUE(e.parsed()) << e.taskId << ": " << e.diagnostic;
  }
  EXPECT_EQ(ids, (std::vector<std::string>{"2", "3", "61", "105", "145", "161", "234", "572"}));
}

TEST(DatasetTest, CoercesTestValuesToSpecTypes) {
  TaskRecord task = testing::sampleTask("2");
  ASSERT_EQ(task.tests.size(), 3u);
  EXPECT_EQ(task.tests[0].inputs[0].type(), ValueType::ArrayInt);
  EXPECT_EQ(task.tests[0].expected[0].type(), ValueType::SeqInt);
  EXPECT_EQ(task.signature.outputs[0].type, ValueType::ArrayInt);
}

TEST(DatasetTest, AcceptsSingleRecordsArraysAndMaps) {
  const std::string spec = "method C(l: int) returns (v: int)\n  ensures v == l * l * l\n";
  auto lookup = [&](const std::string&) { return std::optional<std::string>(spec); };
  const std::string rec =
      R"x("method_signature": "method cube(l: int) returns (v: int)", "test_cases": {"test_1": "var r := cube(2);\nassert r == 8;"})x";
  EXPECT_EQ(loadDataset("{\"task_id\": 7, " + rec + "}", lookup).size(), 1u);
  EXPECT_EQ(loadDataset("[{\"task_id\": \"7\", " + rec + "}, {\"task_id\": 8, " + rec + "}]", lookup).size(), 2u);
  auto map = loadDataset("{\"10\": {" + rec + "}, \"9\": {" + rec + "}}", lookup);
  ASSERT_EQ(map.size(), 2u);
  EXPECT_EQ(map[0].taskId, "9");
  EXPECT_THROW(loadDataset("[{\"task_id\": 7, " + rec + "}, {\"task_id\": 7, " + rec + "}]", lookup), DatasetError);
  EXPECT_THROW(loadDataset("not json", lookup), DatasetError);
}

TEST(DatasetTest, BrokenTasksAreKeptAsUnparsed) {
  auto none = [](const std::string&) { return std::optional<std::string>(); };
  auto entries = loadDataset(
      R"x({"1": {"method_signature": "method f(x: int) returns (y: int)", "test_cases": {"test_1": "var r := f(1);\nassert r == 1;"}},
          "2": {"method_signature": "method f(x: int) returns (y: int)", "test_cases": {}}})x",
      none);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_FALSE(entries[0].parsed());
  EXPECT_EQ(entries[0].diagnostic, "missing spec file for task 1");
  EXPECT_EQ(entries[1].diagnostic, "no tests");
}

TEST(DatasetTest, ReadsComparatorsAndLabels) {
  const std::string spec = "method C(a: array<int>) returns (r: seq<int>)\n  ensures |r| <= a.Length\n";
  auto lookup = [&](const std::string&) { return std::optional<std::string>(spec); };
  auto entries = loadDataset(
      R"x({"task_id": 1, "label": "weak_spec", "comparator": {"test_2": "multiset"},
          "method_signature": "method c(a: array<int>) returns (r: array<int>)",
          "test_cases": {"test_2": "var r := c([1]);\nassert r == [1];", "test_1": "var r := c([2]);\nassert r == [2];"}})x",
      lookup);
  ASSERT_TRUE(entries[0].parsed()) << entries[0].diagnostic;
  const TaskRecord& t = *entries[0].record;
  EXPECT_EQ(t.label, SpecLabel::WeakSpec);
  EXPECT_EQ(t.tests[0].id, "test_1");
  EXPECT_EQ(t.tests[0].comparator, Comparator::Exact);
  EXPECT_EQ(t.tests[1].comparator, Comparator::Multiset);
}

TEST(DatasetTest, LabelsAndNaturalOrder) {
  EXPECT_EQ(parseLabel("STRONG_SPEC"), SpecLabel::StrongSpec);
  EXPECT_EQ(parseLabel("wrong-spec"), SpecLabel::WrongSpec);
  EXPECT_THROW(parseLabel("medium"), std::invalid_argument);
  auto labels = loadLabels(R"({"2": "STRONG_SPEC", "61": "WEAK_SPEC"})");
  EXPECT_EQ(labels.at("61"), SpecLabel::WeakSpec);
  EXPECT_THROW(loadLabels(R"({"2": "great"})"), DatasetError);
  EXPECT_TRUE(naturalLess("test_2", "test_10"));
  EXPECT_TRUE(naturalLess("9", "61"));
  EXPECT_FALSE(naturalLess("61", "9"));
  EXPECT_TRUE(naturalLess("2", "2-precise"));
}

TEST(DatasetTest, SpecLookupFindsNamingVariants) {
  auto dir = std::filesystem::temp_directory_path() / "specjudge-lookup-test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "task-id-5.dfy") << "five";
  std::ofstream(dir / "6.dfy") << "six";
  auto lookup = specFilesLookup({dir});
  EXPECT_EQ(lookup("5").value_or(""), "five");
  EXPECT_EQ(lookup("6").value_or(""), "six");
  EXPECT_FALSE(lookup("7").has_value());
  EXPECT_EQ(specFilesLookup({dir / "6.dfy"})("6").value_or(""), "six");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace specjudge
