#include "specjudge/dafny.h"

#include <gtest/gtest.h>

#include <cstdlib>

#include "specjudge/dataset.h"
#include "support.h"

namespace specjudge {
namespace {

using namespace std::chrono_literals;

std::string transcript(const std::string& name) {
  return readFile(testing::sourceDir() / "tests" / "fixtures" / "dafny" / name);
}

struct TranscriptCase {
  const char* file;
  int exitCode;
  VerifierVerdict verdict;
  VerifierReason reason;
  const char* messagePart;
};

TEST(DafnyClassifierTest, RecordedTranscripts) {
  const TranscriptCase cases[] = {
      {"verified_v4.txt", 0, VerifierVerdict::Verified, VerifierReason::None, ""},
      {"proof_failure_v4.txt", 4, VerifierVerdict::Failed, VerifierReason::ProofFailure,
       "a postcondition could not be proved"},
      {"proof_failure_v3.txt", 4, VerifierVerdict::Failed, VerifierReason::ProofFailure,
       "A postcondition might not hold"},
      {"timeout_v4.txt", 4, VerifierVerdict::Unknown, VerifierReason::Timeout, "1 time out"},
      {"out_of_resource_v4.txt", 4, VerifierVerdict::Unknown, VerifierReason::Timeout, "out of resource"},
      {"parse_error_v4.txt", 2, VerifierVerdict::Unknown, VerifierReason::ParseError, "invalid UnaryExpression"},
      {"resolution_error_v4.txt", 2, VerifierVerdict::Unknown, VerifierReason::ParseError, "unresolved identifier"},
      {"crash.txt", 134, VerifierVerdict::Unknown, VerifierReason::ToolError, "exit code 134"},
  };
  for (const auto& c : cases) {
    SCOPED_TRACE(c.file);
    VerifierOutcome o = classifyDafnyOutput(c.exitCode, transcript(c.file), false);
    EXPECT_EQ(o.verdict, c.verdict);
    EXPECT_EQ(o.reason, c.reason);
    EXPECT_NE(o.message.find(c.messagePart), std::string::npos) << o.message;
    if (o.verdict == VerifierVerdict::Verified) {
      EXPECT_TRUE(o.message.empty());
    }
  }
}

TEST(DafnyClassifierTest, WallClockTimeoutWinsOverOutput) {
  VerifierOutcome o = classifyDafnyOutput(0, transcript("verified_v4.txt"), true);
  EXPECT_EQ(o.verdict, VerifierVerdict::Unknown);
  EXPECT_EQ(o.reason, VerifierReason::Timeout);
}

TEST(DafnyClassifierTest, EmptyOutputIsAToolError) {
  EXPECT_EQ(classifyDafnyOutput(1, "", false).reason, VerifierReason::ToolError);
}

TEST(DafnyProbeTest, ReportsAbsenceAsAValue) {
  ToolInfo missing = probeTool("/nonexistent/dafny");
  EXPECT_FALSE(missing.present);
  EXPECT_FALSE(missing.diagnostic.empty());
  ToolInfo notVerifier = probeTool("/bin/false");
  EXPECT_FALSE(notVerifier.present);
  EXPECT_NE(notVerifier.diagnostic.find("not a verifier"), std::string::npos);
  EXPECT_FALSE(probeTool("").present);
}

TEST(DafnyProbeTest, ReadsVersionOfFakeTool) {
  ToolInfo info = probeTool(SPECJUDGE_FAKE_DAFNY);
  ASSERT_TRUE(info.present) << info.diagnostic;
  EXPECT_EQ(info.version, "4.4.0");
  EXPECT_EQ(info.major, 4);
}

TEST(DafnyProbeTest, ResolvesExplicitPathThenEnvironment) {
  EXPECT_EQ(resolveDafnyPath("/opt/x/dafny"), "/opt/x/dafny");
  ::setenv(kDafnyPathEnv, "/from/env/dafny", 1);
  EXPECT_EQ(resolveDafnyPath(""), "/from/env/dafny");
  ::unsetenv(kDafnyPathEnv);
}

class FakeVerifierTest : public ::testing::Test {
 protected:
  void TearDown() override {
    ::unsetenv("FAKE_DAFNY_SLEEP");
    ::unsetenv("FAKE_DAFNY_TRANSCRIPT");
    ::unsetenv("FAKE_DAFNY_EXIT");
  }
  Harness harness() const { return Harness{HarnessKind::Correctness, "2", "test_1", "method M() {}\n"}; }
};

TEST_F(FakeVerifierTest, VerifiesThroughTheTool) {
  DafnyVerifier v(SPECJUDGE_FAKE_DAFNY, 10s);
  EXPECT_EQ(v.tool().version, "4.4.0");
  EXPECT_EQ(v.verify(harness()).verdict, VerifierVerdict::Verified);
}

TEST_F(FakeVerifierTest, ClassifiesFailuresAndStripsScratchPaths) {
  auto fixture = testing::sourceDir() / "tests" / "fixtures" / "dafny" / "proof_failure_v4.txt";
  ::setenv("FAKE_DAFNY_TRANSCRIPT", fixture.c_str(), 1);
  ::setenv("FAKE_DAFNY_EXIT", "4", 1);
  DafnyVerifier v(SPECJUDGE_FAKE_DAFNY, 10s);
  VerifierOutcome o = v.verify(harness());
  EXPECT_EQ(o.verdict, VerifierVerdict::Failed);
  EXPECT_EQ(o.message.rfind("2__completeness__test_1_m1.dfy(11,0): Error:", 0), 0u) << o.message;
}

TEST_F(FakeVerifierTest, ForcedTimeoutIsUnknown) {
  ::setenv("FAKE_DAFNY_SLEEP", "5", 1);
  DafnyVerifier v(SPECJUDGE_FAKE_DAFNY, 1ms);
  auto start = std::chrono::steady_clock::now();
  VerifierOutcome o = v.verify(harness());
  EXPECT_EQ(o.verdict, VerifierVerdict::Unknown);
  EXPECT_EQ(o.reason, VerifierReason::Timeout);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 4s);
}

TEST_F(FakeVerifierTest, KeepsHarnessAndTranscriptWhenAsked) {
  auto dir = std::filesystem::temp_directory_path() / "specjudge-transcripts-test";
  std::filesystem::remove_all(dir);
  DafnyVerifier v(SPECJUDGE_FAKE_DAFNY, 10s, dir);
  v.verify(harness());
  EXPECT_EQ(readFile(dir / "2__correctness__test_1.dfy"), "method M() {}\n");
  EXPECT_NE(readFile(dir / "2__correctness__test_1.dfy.log").find("1 verified, 0 errors"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(DafnyVerifierTest, MissingToolIsAConfigurationError) {
  EXPECT_THROW(DafnyVerifier("/nonexistent/dafny", 1s), ConfigError);
}

}  // namespace
}  // namespace specjudge
