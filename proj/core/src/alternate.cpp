#include "specjudge/alternate.h"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace specjudge {

namespace {

struct CandidateSet {
  const Value& expected;
  std::size_t cap;
  std::vector<Value> out;
  std::set<std::string> seen;

  bool full() const { return out.size() >= cap; }

  void add(Value v) {
    if (full() || valuesEqual(v, expected)) return;
    if (seen.insert(toDisplayString(v)).second) out.push_back(std::move(v));
  }
};

void stringCandidates(CandidateSet& set, const std::string& s, const std::vector<Value>& inputs) {
  std::set<char> alphabet(s.begin(), s.end());
  for (const auto& v : inputs) {
    if (v.type() == ValueType::Str) alphabet.insert(v.asStr().begin(), v.asStr().end());
  }
  if (alphabet.empty()) alphabet.insert('a');
  for (std::size_t i = 0; i < s.size(); ++i) set.add(Value::string(s.substr(0, i) + s.substr(i + 1)));
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (char c : alphabet) {
      std::string t = s;
      t[i] = c;
      set.add(Value::string(t));
    }
  }
  for (char c : alphabet) set.add(Value::string(s + c));
}

void collectionCandidates(CandidateSet& set, const Value& expected, const std::vector<Value>& inputs) {
  const ValueType type = expected.type();
  std::vector<BigInt> base(expected.elements().begin(), expected.elements().end());
  std::set<BigInt> pool(base.begin(), base.end());
  for (const auto& v : inputs) {
    if (isCollection(v.type())) pool.insert(v.elements().begin(), v.elements().end());
    if (v.type() == ValueType::Int) pool.insert(v.asInt());
  }
  if (pool.empty()) {
    pool.insert(0);
  } else {
    BigInt lo = *pool.begin() - 1;
    BigInt hi = *pool.rbegin() + 1;
    pool.insert(lo);
    pool.insert(hi);
  }

  if (base.size() <= 7) {
    std::vector<BigInt> perm = base;
    std::sort(perm.begin(), perm.end());
    do {
      set.add(Value::collection(type, perm));
    } while (!set.full() && std::next_permutation(perm.begin(), perm.end()));
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    std::vector<BigInt> t = base;
    t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
    set.add(Value::collection(type, std::move(t)));
  }
  for (std::size_t i = 0; i <= base.size() && !set.full(); ++i) {
    for (const auto& x : pool) {
      std::vector<BigInt> t = base;
      t.insert(t.begin() + static_cast<std::ptrdiff_t>(i), x);
      set.add(Value::collection(type, std::move(t)));
    }
  }
  for (std::size_t i = 0; i < base.size() && !set.full(); ++i) {
    for (const auto& x : pool) {
      std::vector<BigInt> t = base;
      t[i] = x;
      set.add(Value::collection(type, std::move(t)));
    }
  }
}

}  // namespace

std::vector<Value> alternateCandidates(const Value& expected, const std::vector<Value>& inputs, std::size_t cap) {
  CandidateSet set{expected, cap, {}, {}};
  switch (expected.type()) {
    case ValueType::Bool:
      set.add(Value::boolean(!expected.asBool()));
      break;
    case ValueType::Int:
      for (int d = 1; d <= 10; ++d) {
        set.add(Value::integer(expected.asInt() + d));
        set.add(Value::integer(expected.asInt() - d));
      }
      break;
    case ValueType::Str:
      stringCandidates(set, expected.asStr(), inputs);
      break;
    case ValueType::ArrayInt:
    case ValueType::SeqInt:
      collectionCandidates(set, expected, inputs);
      break;
  }
  return std::move(set.out);
}

AlternateOutcome alternateCheckEval(const TaskRecord& task, const TestCase& test, const EvalLimits& limits) {
  if (task.spec.method.outputs.size() != 1 || test.expected.size() != 1) {
    throw std::invalid_argument("the alternate check needs a method with exactly one output");
  }
  AlternateOutcome result;
  auto candidates = alternateCandidates(test.expected.front(), test.inputs);
  result.candidates = candidates.size();
  std::string firstUnknown;
  for (const auto& y : candidates) {
    Environment env = makeEnvironment(task.spec.method, test.inputs, std::vector<Value>{y});
    SpecVerdict v = evalSpec(task.spec, env, limits);
    if (v.verdict == Verdict::True) {
      result.verdict = VerifierVerdict::Failed;
      result.witness = y;
      result.detail = "postcondition also admits " + toDisplayString(y);
      return result;
    }
    if (v.verdict == Verdict::Unknown && firstUnknown.empty()) {
      firstUnknown = toDisplayString(y) + ": " + v.diagnosis;
    }
  }
  if (!firstUnknown.empty()) {
    result.detail = "undecided candidate " + firstUnknown;
    return result;
  }
  result.verdict = VerifierVerdict::Verified;
  result.detail = "no other candidate output satisfies the postcondition";
  return result;
}

}  // namespace specjudge
