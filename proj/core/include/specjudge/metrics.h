#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "specjudge/backend.h"
#include "specjudge/mutation.h"
#include "specjudge/task.h"

namespace specjudge {

using Ratio = boost::rational<std::int64_t>;

enum class TestVerdict { Correct, Incorrect, Unknown };
enum class MutantVerdict { Killed, Survived, Unknown };
enum class Classification { Wrong, Weak, Strong, Undetermined };

std::string_view toString(TestVerdict v);
std::string_view toString(MutantVerdict v);
std::string_view toString(Classification c);  // "WRONG", "WEAK", ...

TestVerdict toTestVerdict(Truth t);
MutantVerdict toMutantVerdict(Truth t);

/// Completeness cut-off between WEAK and STRONG.
class Threshold {
 public:
  Threshold() : value_(66, 100) {}
  /// Throws std::invalid_argument unless 0 < value <= 1.
  explicit Threshold(Ratio value);

  /// Accepts "0.66", "1", "2/3".
  static Threshold parse(std::string_view text);

  Ratio value() const { return value_; }

 private:
  Ratio value_;
};

std::string formatRatio(Ratio r);  // "3/5"
double toDouble(Ratio r);

struct TestResult {
  std::string testId;
  TestVerdict verdict = TestVerdict::Unknown;
  std::string detail;
};

struct MutantResult {
  MutantCase mutant;
  MutantVerdict verdict = MutantVerdict::Unknown;
  std::string detail;
};

struct PerTestCompleteness {
  std::string testId;
  std::size_t killed = 0;
  std::size_t total = 0;
};

struct SpecReport {
  std::string taskId;
  std::vector<TestResult> tests;
  bool correct = false;
  std::size_t t1Size = 0;
  std::size_t killed = 0;
  std::size_t survived = 0;
  std::size_t unknownMutants = 0;
  /// killed / t1Size; absent when the correctness gate did not pass.
  std::optional<Ratio> completeness;
  std::vector<PerTestCompleteness> perTest;
  Classification classification = Classification::Undetermined;
  std::optional<SpecLabel> label;
  std::optional<bool> agreement;
  std::vector<MutantResult> mutants;
};

/// True iff every test is Correct; only then may mutants be scored.
bool gatePassed(const std::vector<TestResult>& tests);

/// Assembles a report. `mutants` must be empty unless the gate passed; it is
/// ignored otherwise. Throws std::logic_error when mutant results arrive for
/// a task whose gate failed.
SpecReport buildReport(std::string taskId, std::vector<TestResult> tests, std::vector<MutantResult> mutants,
                       const Threshold& threshold, std::optional<SpecLabel> label);

/// WRONG if a test is Incorrect; otherwise UNDETERMINED if a test is Unknown
/// or no mutant was scored; otherwise STRONG or WEAK against the threshold.
Classification classify(const SpecReport& report, const Threshold& threshold);

/// Nullopt when there is no label or the classification is UNDETERMINED.
std::optional<bool> labelAgreement(Classification c, std::optional<SpecLabel> label);

struct AgreementTable {
  struct Row {
    std::string taskId;
    Classification classification;
    SpecLabel label;
    std::optional<bool> agree;
  };
  std::vector<Row> rows;
  std::vector<std::string> disagreements;
  /// Agreeing rows over rows with a definite agreement.
  std::optional<double> rate;
};

/// Rows for every report whose task has a label in `labels` or in the report.
/// `labels` take precedence.
AgreementTable labelAgreement(const std::vector<SpecReport>& reports, const std::map<std::string, SpecLabel>& labels);

}  // namespace specjudge
