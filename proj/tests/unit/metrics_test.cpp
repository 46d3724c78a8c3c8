#include "specjudge/metrics.h"

#include <gtest/gtest.h>

#include <random>

#include "specjudge/evaluator.h"
#include "specjudge/parser.h"

namespace specjudge {
namespace {

std::vector<TestResult> tests(std::initializer_list<TestVerdict> vs) {
  std::vector<TestResult> out;
  int k = 1;
  for (auto v : vs) out.push_back({"test_" + std::to_string(k++), v, ""});
  return out;
}

std::vector<MutantResult> mutants(const std::string& parent, std::initializer_list<MutantVerdict> vs) {
  std::vector<MutantResult> out;
  int k = 1;
  for (auto v : vs) out.push_back({MutantCase{parent + "/m" + std::to_string(k++), parent, {}, {}}, v, ""});
  return out;
}

TEST(ThresholdTest, ParsesDecimalsAndFractions) {
  EXPECT_EQ(Threshold().value(), Ratio(33, 50));
  EXPECT_EQ(Threshold::parse("0.66").value(), Ratio(33, 50));
  EXPECT_EQ(Threshold::parse("1").value(), Ratio(1));
  EXPECT_EQ(Threshold::parse("2/3").value(), Ratio(2, 3));
  EXPECT_EQ(Threshold::parse(".5").value(), Ratio(1, 2));
  for (const char* bad : {"0", "1.01", "-0.5", "abc", "0.6x", "1/0", ""}) {
    EXPECT_THROW(Threshold::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(MetricsTest, SharedElementsScoreIsWeak) {
  using M = MutantVerdict;
  std::vector<MutantResult> ms;
  for (const char* t : {"test_1", "test_2", "test_3"}) {
    auto part = mutants(t, {M::Survived, M::Survived, M::Killed, M::Killed, M::Killed});
    ms.insert(ms.end(), part.begin(), part.end());
  }
  auto r = buildReport("2", tests({TestVerdict::Correct, TestVerdict::Correct, TestVerdict::Correct}), ms,
                       Threshold(), SpecLabel::StrongSpec);
  EXPECT_TRUE(r.correct);
  EXPECT_EQ(r.t1Size, 15u);
  EXPECT_EQ(r.killed, 9u);
  EXPECT_EQ(r.completeness, Ratio(3, 5));
  EXPECT_EQ(r.classification, Classification::Weak);
  EXPECT_EQ(r.agreement, false);
  ASSERT_EQ(r.perTest.size(), 3u);
  EXPECT_EQ(r.perTest[1].killed, 3u);
  EXPECT_EQ(r.perTest[1].total, 5u);
}

TEST(MetricsTest, IncorrectTestGatesCompleteness) {
  auto r = buildReport("234", tests({TestVerdict::Correct, TestVerdict::Incorrect}), {}, Threshold(),
                       SpecLabel::StrongSpec);
  EXPECT_FALSE(r.correct);
  EXPECT_FALSE(r.completeness.has_value());
  EXPECT_EQ(r.t1Size, 0u);
  EXPECT_EQ(r.classification, Classification::Wrong);
  EXPECT_EQ(r.agreement, false);
  EXPECT_THROW(buildReport("x", tests({TestVerdict::Incorrect}), mutants("test_1", {MutantVerdict::Killed}),
                           Threshold(), std::nullopt),
               std::logic_error);
}

TEST(MetricsTest, UnknownTestIsUndetermined) {
  auto r = buildReport("x", tests({TestVerdict::Correct, TestVerdict::Unknown}), {}, Threshold(),
                       SpecLabel::WeakSpec);
  EXPECT_EQ(r.classification, Classification::Undetermined);
  EXPECT_FALSE(r.completeness.has_value());
  EXPECT_FALSE(r.agreement.has_value());
  auto wrong = buildReport("x", tests({TestVerdict::Unknown, TestVerdict::Incorrect}), {}, Threshold(), std::nullopt);
  EXPECT_EQ(wrong.classification, Classification::Wrong);
}

TEST(MetricsTest, UnknownMutantsCountAgainstTheScore) {
  using M = MutantVerdict;
  auto r = buildReport("x", tests({TestVerdict::Correct}), mutants("test_1", {M::Killed, M::Killed, M::Unknown}),
                       Threshold(), std::nullopt);
  EXPECT_EQ(r.completeness, Ratio(2, 3));
  EXPECT_EQ(r.unknownMutants, 1u);
  EXPECT_EQ(r.classification, Classification::Strong);
  auto strict = buildReport("x", tests({TestVerdict::Correct}), mutants("test_1", {M::Killed, M::Killed, M::Unknown}),
                            Threshold::parse("0.67"), std::nullopt);
  EXPECT_EQ(strict.classification, Classification::Weak);
}

TEST(MetricsTest, ThresholdBoundaryIsInclusive) {
  using M = MutantVerdict;
  std::vector<MutantResult> ms;
  for (int i = 0; i < 50; ++i) ms.push_back({MutantCase{"m", "test_1", {}, {}}, i < 33 ? M::Killed : M::Survived, ""});
  auto r = buildReport("x", tests({TestVerdict::Correct}), ms, Threshold(), std::nullopt);
  EXPECT_EQ(r.completeness, Ratio(33, 50));
  EXPECT_EQ(r.classification, Classification::Strong);
}

TEST(MetricsTest, AgreementTable) {
  EXPECT_EQ(labelAgreement(Classification::Wrong, SpecLabel::WrongSpec), true);
  EXPECT_EQ(labelAgreement(Classification::Weak, SpecLabel::WeakSpec), true);
  EXPECT_EQ(labelAgreement(Classification::Weak, SpecLabel::StrongSpec), false);
  EXPECT_FALSE(labelAgreement(Classification::Strong, std::nullopt).has_value());
  EXPECT_FALSE(labelAgreement(Classification::Undetermined, SpecLabel::StrongSpec).has_value());

  std::vector<SpecReport> reports(3);
  reports[0].taskId = "2";
  reports[0].classification = Classification::Weak;
  reports[1].taskId = "61";
  reports[1].classification = Classification::Weak;
  reports[1].label = SpecLabel::WeakSpec;
  reports[2].taskId = "572";
  reports[2].classification = Classification::Wrong;
  auto table = labelAgreement(reports, {{"2", SpecLabel::StrongSpec}, {"572", SpecLabel::WrongSpec}});
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.disagreements, std::vector<std::string>{"2"});
  EXPECT_DOUBLE_EQ(*table.rate, 2.0 / 3.0);
}

// Random verdict mixes always satisfy the report invariants.
TEST(MetricsPropertyTest, ReportInvariants) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> three(0, 2), count(0, 8);
  for (int round = 0; round < 2000; ++round) {
    std::vector<TestResult> ts;
    for (int i = count(rng) % 4 + 1; i > 0; --i) {
      ts.push_back({"test_" + std::to_string(i), static_cast<TestVerdict>(round % 3 == 0 ? three(rng) : 0), ""});
    }
    std::vector<MutantResult> ms;
    if (gatePassed(ts)) {
      for (int i = count(rng); i > 0; --i) {
        ms.push_back({MutantCase{"m", ts[0].testId, {}, {}}, static_cast<MutantVerdict>(three(rng)), ""});
      }
    }
    Threshold th(Ratio(count(rng) + 1, 9));
    auto r = buildReport("x", ts, ms, th, std::nullopt);
    ASSERT_EQ(r.killed + r.survived + r.unknownMutants, r.t1Size);
    ASSERT_EQ(r.completeness.has_value(), r.correct && r.t1Size > 0);
    if (r.completeness) {
      ASSERT_EQ(*r.completeness, Ratio(static_cast<std::int64_t>(r.killed), static_cast<std::int64_t>(r.t1Size)));
      ASSERT_TRUE(*r.completeness >= 0 && *r.completeness <= 1);
      ASSERT_EQ(r.classification, *r.completeness >= th.value() ? Classification::Strong : Classification::Weak);
    }
    bool incorrect = std::any_of(ts.begin(), ts.end(), [](auto& t) { return t.verdict == TestVerdict::Incorrect; });
    bool unknown = std::any_of(ts.begin(), ts.end(), [](auto& t) { return t.verdict == TestVerdict::Unknown; });
    ASSERT_EQ(r.classification == Classification::Wrong, incorrect);
    if (!incorrect && unknown) {
      ASSERT_EQ(r.classification, Classification::Undetermined);
    }
  }
}

// Adding an ensures conjunct never lowers the kill count and never turns an
// incorrect test correct.
TEST(MetricsPropertyTest, ConjunctMonotonicity) {
  const char* sig = "method m(s: seq<int>) returns (r: seq<int>)";
  const std::vector<std::string> clauses = {
      "forall x :: x in r ==> x in s",
      "forall i, j :: 0 <= i < j < |r| ==> r[i] != r[j]",
      "|r| <= |s|",
      "forall i :: 0 <= i < |r| - 1 ==> r[i] < r[i + 1]",
      "forall x :: x in s ==> x in r",
  };
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> len(0, 4), val(0, 4);
  auto randomSeq = [&] {
    std::vector<BigInt> v(len(rng));
    for (auto& x : v) x = val(rng);
    return Value::sequence(v);
  };
  for (int round = 0; round < 300; ++round) {
    std::vector<std::string> chosen;
    for (const auto& c : clauses) {
      if (rng() & 1) chosen.push_back(c);
    }
    std::string base = std::string(sig) + "\n  ensures true\n";
    for (const auto& c : chosen) base += "  ensures " + c + "\n";
    std::string extra = base + "  ensures " + clauses[rng() % clauses.size()] + "\n";
    SpecUnit weak = parseSpec(base, parseSignature(sig));
    SpecUnit strong = parseSpec(extra, parseSignature(sig));
    Value s = randomSeq();
    for (int k = 0; k < 5; ++k) {
      Value r = randomSeq();
      Environment env{{"s", s}, {"r", r}};
      Verdict a = evalSpec(weak, env).verdict;
      Verdict b = evalSpec(strong, env).verdict;
      if (a == Verdict::False) {
        ASSERT_EQ(b, Verdict::False);
      }
    }
  }
}

}  // namespace
}  // namespace specjudge
