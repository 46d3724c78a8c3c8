#include "specjudge/mutation.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "specjudge/dataset.h"

namespace specjudge {
namespace {

// Reference outputs of splitmix64 from state 0, as published with the
// original generator.
TEST(SplitMix64Test, MatchesReferenceSequence) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
  SplitMix64 other(12345);
  EXPECT_EQ(other.next(), 0x22118258a9d111a0ULL);
}

TEST(SplitMix64Test, UniformStaysInRangeAndCoversIt) {
  SplitMix64 rng(99);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    auto v = rng.uniform(-3, 3);
    ASSERT_GE(v, -3);
    ASSERT_LE(v, 3);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(rng.uniform(5, 5), 5);
}

TEST(Fnv1aTest, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(MutationKeyTest, DependsOnEveryComponent) {
  auto k = mutationKey(0, "2", "test_1", 0);
  EXPECT_NE(k, mutationKey(1, "2", "test_1", 0));
  EXPECT_NE(k, mutationKey(0, "3", "test_1", 0));
  EXPECT_NE(k, mutationKey(0, "2", "test_2", 0));
  EXPECT_NE(k, mutationKey(0, "2", "test_1", 1));
  auto m = SplitMix64::mix;
  EXPECT_EQ(k, m(m(m(m(0) ^ fnv1a64("2")) ^ fnv1a64("test_1")) ^ 0));
}

TestCase single(Value expected, Comparator cmp = Comparator::Exact) {
  TestCase t;
  t.id = "test_1";
  t.inputs = {Value::integer(0)};
  t.expected = {std::move(expected)};
  t.comparator = cmp;
  return t;
}

TEST(MutationTest, BoolHasExactlyOneMutant) {
  auto ms = generateMutants("3", single(Value::boolean(false)), MutationConfig{});
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_TRUE(ms[0].outputs[0].asBool());
  EXPECT_EQ(ms[0].descriptor.kind, MutationKind::BoolFlip);
  EXPECT_EQ(ms[0].id, "test_1/m1");
}

TEST(MutationTest, FillsQuotaWithDistinctMutants) {
  auto ms = generateMutants("2", single(Value::sequence({4, 5})), MutationConfig{});
  ASSERT_EQ(ms.size(), 5u);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    EXPECT_EQ(ms[i].id, "test_1/m" + std::to_string(i + 1));
    EXPECT_EQ(ms[i].parent, "test_1");
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(valuesEqual(ms[i].outputs[0], ms[j].outputs[0]));
  }
}

TEST(MutationTest, MultisetComparatorRejectsPermutations) {
  TestCase t = single(Value::sequence({1, 2}), Comparator::Multiset);
  MutationConfig cfg;
  cfg.mutantsPerTest = 20;
  for (const auto& m : generateMutants("x", t, cfg)) {
    EXPECT_FALSE(valuesEqual(m.outputs[0], t.expected[0], Comparator::Multiset));
  }
}

TEST(MutationTest, MultiOutputMutatesOneComponentRoundRobin) {
  TestCase t;
  t.id = "t";
  t.expected = {Value::integer(1), Value::integer(2)};
  auto ms = generateMutants("x", t, MutationConfig{4, 0, 64});
  ASSERT_EQ(ms.size(), 4u);
  for (const auto& m : ms) {
    std::size_t changed = 0;
    for (std::size_t k = 0; k < 2; ++k) changed += !valuesEqual(m.outputs[k], t.expected[k]);
    EXPECT_EQ(changed, 1u);
    EXPECT_FALSE(valuesEqual(m.outputs[m.descriptor.component], t.expected[m.descriptor.component]));
  }
}

TEST(MutationTest, DescribesMutations) {
  MutationDescriptor d;
  d.kind = MutationKind::IntDelta;
  d.amount = -3;
  EXPECT_EQ(describe(d), "IntDelta(-3)");
  d.kind = MutationKind::ArrInsert;
  d.index = 2;
  d.amount = 7;
  EXPECT_EQ(describe(d), "ArrInsert(2, 7)");
}

TEST(CuratedTest, WrapsValidSetsAndRejectsBadOnes) {
  TestCase t = single(Value::sequence({4, 5}));
  auto ms = curatedMutants(t, {{Value::sequence({4})}, {Value::sequence({4, 5, 3})}});
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_EQ(ms[0].descriptor.kind, MutationKind::ArrDrop);
  EXPECT_EQ(ms[0].descriptor.index, 1u);
  EXPECT_EQ(ms[1].descriptor.kind, MutationKind::ArrInsert);
  EXPECT_EQ(ms[1].descriptor.amount, 3);
  EXPECT_THROW(curatedMutants(t, {{Value::sequence({4, 5})}}), ValueError);
  EXPECT_THROW(curatedMutants(t, {{Value::sequence({4})}, {Value::sequence({4})}}), ValueError);
  EXPECT_THROW(curatedMutants(t, {{Value::integer(4)}}), ValueError);
  EXPECT_THROW(curatedMutants(t, {{}}), ValueError);
}

TEST(CuratedTest, LoadsSidecarEntries) {
  auto lits = loadCurated(R"({"2": {"test_1": ["[4]", [4, 5, 3], ["[1]"]]}, "3": {"test_1": [true, 7]}})");
  const auto& entries = lits.at("2").at("test_1");
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[0], std::vector<std::string>{"[4]"});
  EXPECT_EQ(entries[1], std::vector<std::string>{"[4, 5, 3]"});
  EXPECT_EQ(lits.at("3").at("test_1")[0], std::vector<std::string>{"true"});
  auto values = curatedValues(entries, {Param{"result", ValueType::SeqInt}});
  EXPECT_EQ(toDisplayString(values[1][0]), "[4, 5, 3]");
  EXPECT_THROW(loadCurated(R"({"2": ["[4]"]})"), DatasetError);
}

std::string serialize(const std::vector<MutantCase>& ms) {
  std::string s;
  for (const auto& m : ms) {
    s += m.id + "|" + describe(m.descriptor);
    for (const auto& v : m.outputs) s += "|" + toDisplayString(v);
    s += "\n";
  }
  return s;
}

// 10,000 draws spread over the five value types.
TEST(MutationPropertyTest, TenThousandDraws) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> small(-50, 50);
  std::uniform_int_distribution<int> len(0, 6);
  std::size_t draws = 0;
  std::string firstRun, secondRun;
  for (int round = 0; draws < 10'000; ++round) {
    TestCase t;
    t.id = "test_" + std::to_string(round);
    switch (round % 5) {
      case 0: t.expected = {Value::boolean(round % 2 == 0)}; break;
      case 1: t.expected = {Value::integer(small(gen))}; break;
      case 2: {
        std::string s;
        for (int i = len(gen); i > 0; --i) s += static_cast<char>('a' + (small(gen) + 50) % 26);
        t.expected = {Value::string(s)};
        break;
      }
      default: {
        std::vector<BigInt> e;
        for (int i = len(gen); i > 0; --i) e.emplace_back(small(gen));
        t.expected = {Value::collection(round % 5 == 3 ? ValueType::ArrayInt : ValueType::SeqInt, e)};
        if (round % 10 == 4) t.comparator = Comparator::Multiset;
      }
    }
    MutationConfig cfg{5, static_cast<std::uint64_t>(round), 64};
    auto ms = generateMutants("task", t, cfg);
    firstRun += serialize(ms);
    secondRun += serialize(generateMutants("task", t, cfg));
    const Value& o = t.expected[0];
    for (const auto& m : ms) {
      ++draws;
      const Value& v = m.outputs[0];
      ASSERT_EQ(v.type(), o.type());
      ASSERT_FALSE(valuesEqual(v, o, t.comparator)) << toDisplayString(v);
      switch (o.type()) {
        case ValueType::Int: {
          BigInt d = abs(v.asInt() - o.asInt());
          ASSERT_TRUE(d >= 1 && d <= 10) << d;
          ASSERT_EQ(m.descriptor.amount, v.asInt() - o.asInt());
          break;
        }
        case ValueType::Str: {
          auto grow = v.asStr().size() - o.asStr().size();
          ASSERT_TRUE(grow == 0 || grow == 1);
          break;
        }
        case ValueType::ArrayInt:
        case ValueType::SeqInt: {
          auto a = static_cast<long>(v.elements().size());
          auto b = static_cast<long>(o.elements().size());
          ASSERT_EQ(std::abs(a - b), 1);
          break;
        }
        case ValueType::Bool: break;
      }
    }
  }
  EXPECT_EQ(firstRun, secondRun);
}

}  // namespace
}  // namespace specjudge
