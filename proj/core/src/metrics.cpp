#include "specjudge/metrics.h"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace specjudge {

std::string_view toString(TestVerdict v) {
  switch (v) {
    case TestVerdict::Correct: return "correct";
    case TestVerdict::Incorrect: return "incorrect";
    case TestVerdict::Unknown: return "unknown";
  }
  return "?";
}

std::string_view toString(MutantVerdict v) {
  switch (v) {
    case MutantVerdict::Killed: return "killed";
    case MutantVerdict::Survived: return "survived";
    case MutantVerdict::Unknown: return "unknown";
  }
  return "?";
}

std::string_view toString(Classification c) {
  switch (c) {
    case Classification::Wrong: return "WRONG";
    case Classification::Weak: return "WEAK";
    case Classification::Strong: return "STRONG";
    case Classification::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

TestVerdict toTestVerdict(Truth t) {
  switch (t) {
    case Truth::Holds: return TestVerdict::Correct;
    case Truth::Refuted: return TestVerdict::Incorrect;
    case Truth::Unknown: break;
  }
  return TestVerdict::Unknown;
}

MutantVerdict toMutantVerdict(Truth t) {
  switch (t) {
    case Truth::Holds: return MutantVerdict::Survived;
    case Truth::Refuted: return MutantVerdict::Killed;
    case Truth::Unknown: break;
  }
  return MutantVerdict::Unknown;
}

Threshold::Threshold(Ratio value) : value_(value) {
  if (value_ <= 0 || value_ > 1) throw std::invalid_argument("threshold must lie in (0, 1]");
}

namespace {

std::int64_t parseDigits(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || s.front() < '0' || s.front() > '9' || ec != std::errc() || end != s.data() + s.size()) {
    throw std::invalid_argument("invalid threshold '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Threshold Threshold::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t den = parseDigits(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("invalid threshold '" + std::string(text) + "'");
    return Threshold(Ratio(parseDigits(text.substr(0, slash), text), den));
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Threshold(Ratio(parseDigits(text, text)));
  std::string_view frac = text.substr(dot + 1);
  if (frac.size() > 15) throw std::invalid_argument("threshold has too many decimals");
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  std::int64_t intPart = dot == 0 ? 0 : parseDigits(text.substr(0, dot), text);
  std::int64_t fracPart = frac.empty() ? 0 : parseDigits(frac, text);
  return Threshold(Ratio(intPart * scale + fracPart, scale));
}

std::string formatRatio(Ratio r) { return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator()); }

double toDouble(Ratio r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

bool gatePassed(const std::vector<TestResult>& tests) {
  return std::all_of(tests.begin(), tests.end(), [](const TestResult& t) { return t.verdict == TestVerdict::Correct; });
}

SpecReport buildReport(std::string taskId, std::vector<TestResult> tests, std::vector<MutantResult> mutants,
                       const Threshold& threshold, std::optional<SpecLabel> label) {
  SpecReport r;
  r.taskId = std::move(taskId);
  r.correct = gatePassed(tests);
  r.label = label;
  if (!r.correct && !mutants.empty()) {
    throw std::logic_error("mutants scored for task " + r.taskId + " whose correctness gate failed");
  }
  if (r.correct) {
    for (const auto& t : tests) r.perTest.push_back({t.testId, 0, 0});
    for (const auto& m : mutants) {
      switch (m.verdict) {
        case MutantVerdict::Killed: ++r.killed; break;
        case MutantVerdict::Survived: ++r.survived; break;
        case MutantVerdict::Unknown: ++r.unknownMutants; break;
      }
      auto it = std::find_if(r.perTest.begin(), r.perTest.end(),
                             [&](const PerTestCompleteness& p) { return p.testId == m.mutant.parent; });
      if (it == r.perTest.end()) it = r.perTest.insert(r.perTest.end(), {m.mutant.parent, 0, 0});
      ++it->total;
      if (m.verdict == MutantVerdict::Killed) ++it->killed;
    }
    r.t1Size = mutants.size();
    if (r.t1Size > 0) r.completeness = Ratio(static_cast<std::int64_t>(r.killed), static_cast<std::int64_t>(r.t1Size));
    r.mutants = std::move(mutants);
  }
  r.tests = std::move(tests);
  r.classification = classify(r, threshold);
  r.agreement = labelAgreement(r.classification, label);
  return r;
}

Classification classify(const SpecReport& report, const Threshold& threshold) {
  bool unknown = false;
  for (const auto& t : report.tests) {
    if (t.verdict == TestVerdict::Incorrect) return Classification::Wrong;
    if (t.verdict == TestVerdict::Unknown) unknown = true;
  }
  if (unknown || !report.completeness) return Classification::Undetermined;
  return *report.completeness >= threshold.value() ? Classification::Strong : Classification::Weak;
}

std::optional<bool> labelAgreement(Classification c, std::optional<SpecLabel> label) {
  if (!label || c == Classification::Undetermined) return std::nullopt;
  switch (*label) {
    case SpecLabel::WrongSpec: return c == Classification::Wrong;
    case SpecLabel::WeakSpec: return c == Classification::Weak;
    case SpecLabel::StrongSpec: return c == Classification::Strong;
  }
  return std::nullopt;
}

AgreementTable labelAgreement(const std::vector<SpecReport>& reports, const std::map<std::string, SpecLabel>& labels) {
  AgreementTable table;
  std::size_t definite = 0;
  std::size_t agreeing = 0;
  for (const auto& r : reports) {
    std::optional<SpecLabel> label = r.label;
    if (auto it = labels.find(r.taskId); it != labels.end()) label = it->second;
    if (!label) continue;
    auto agree = labelAgreement(r.classification, label);
    table.rows.push_back({r.taskId, r.classification, *label, agree});
    if (agree) {
      ++definite;
      if (*agree) {
        ++agreeing;
      } else {
        table.disagreements.push_back(r.taskId);
      }
    }
  }
  if (definite > 0) table.rate = static_cast<double>(agreeing) / static_cast<double>(definite);
  return table;
}

}  // namespace specjudge
