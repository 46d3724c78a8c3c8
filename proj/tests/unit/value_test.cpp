#include "specjudge/value.h"

#include <gtest/gtest.h>

#include <random>

#include "specjudge/parser.h"

namespace specjudge {
namespace {

Value ints(ValueType t, std::vector<long long> xs) {
  std::vector<BigInt> v(xs.begin(), xs.end());
  return Value::collection(t, std::move(v));
}

TEST(ValueTest, ExactEqualityIsOrdered) {
  EXPECT_TRUE(valuesEqual(ints(ValueType::SeqInt, {4, 5}), ints(ValueType::SeqInt, {4, 5})));
  EXPECT_FALSE(valuesEqual(ints(ValueType::SeqInt, {4, 5}), ints(ValueType::SeqInt, {5, 4})));
  EXPECT_TRUE(valuesEqual(Value::string("ab"), Value::string("ab")));
  EXPECT_FALSE(valuesEqual(Value::boolean(true), Value::boolean(false)));
}

TEST(ValueTest, MultisetEqualityIgnoresOrderButCountsCopies) {
  const auto cmp = Comparator::Multiset;
  EXPECT_TRUE(valuesEqual(ints(ValueType::ArrayInt, {4, 5}), ints(ValueType::ArrayInt, {5, 4}), cmp));
  EXPECT_FALSE(valuesEqual(ints(ValueType::ArrayInt, {4, 4, 5}), ints(ValueType::ArrayInt, {4, 5, 5}), cmp));
  EXPECT_FALSE(valuesEqual(ints(ValueType::ArrayInt, {4}), ints(ValueType::ArrayInt, {4, 4}), cmp));
}

TEST(ValueTest, ComparisonErrors) {
  EXPECT_THROW(valuesEqual(Value::integer(1), Value::boolean(true)), ValueError);
  EXPECT_THROW(valuesEqual(Value::integer(1), Value::integer(1), Comparator::Multiset), ValueError);
  EXPECT_THROW(valuesEqual(ints(ValueType::ArrayInt, {1}), ints(ValueType::SeqInt, {1})), ValueError);
}

TEST(ValueTest, TuplesCompareComponentwise) {
  std::vector<Value> a{ints(ValueType::SeqInt, {1, 2}), Value::integer(3)};
  std::vector<Value> b{ints(ValueType::SeqInt, {2, 1}), Value::integer(3)};
  EXPECT_FALSE(tuplesEqual(a, b));
  EXPECT_TRUE(tuplesEqual(a, b, Comparator::Multiset));
  b[1] = Value::integer(4);
  EXPECT_FALSE(tuplesEqual(a, b, Comparator::Multiset));
  EXPECT_FALSE(tuplesEqual(a, std::vector<Value>{a[0]}));
}

TEST(ValueTest, AccessorsRejectWrongType) {
  EXPECT_THROW(Value::integer(1).asBool(), ValueError);
  EXPECT_THROW(Value::boolean(true).elements(), ValueError);
  EXPECT_THROW(Value::string("x").asInt(), ValueError);
}

TEST(ValueTest, CoercionBetweenCollections) {
  Value a = ints(ValueType::ArrayInt, {1, 2});
  Value s = a.coercedTo(ValueType::SeqInt);
  EXPECT_EQ(s.type(), ValueType::SeqInt);
  EXPECT_EQ(s.elements().size(), 2u);
  EXPECT_THROW(Value::integer(1).coercedTo(ValueType::Str), ValueError);
}

TEST(ValueTest, RendersDafnyLiterals) {
  EXPECT_EQ(renderDafnyLiteral(Value::boolean(true)), "true");
  EXPECT_EQ(renderDafnyLiteral(Value::integer(-7)), "-7");
  EXPECT_EQ(renderDafnyLiteral(ints(ValueType::SeqInt, {4, 5})), "[4, 5]");
  EXPECT_EQ(renderDafnyLiteral(ints(ValueType::ArrayInt, {4, 5}), true), "new int[] [4, 5]");
  EXPECT_EQ(renderDafnyLiteral(ints(ValueType::ArrayInt, {}), true), "new int[] []");
  EXPECT_EQ(renderDafnyLiteral(Value::string("a\"b\\")), R"("a\"b\\")");
}

TEST(ValueTest, BigIntegersSurviveRendering) {
  BigInt big = BigInt(1) << 100;
  EXPECT_EQ(renderDafnyLiteral(Value::integer(big)), "1267650600228229401496703205376");
}

Value randomValue(ValueType t, std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> num(-1'000'000, 1'000'000);
  std::uniform_int_distribution<int> len(0, 8);
  switch (t) {
    case ValueType::Bool: return Value::boolean(rng() & 1);
    case ValueType::Int: return Value::integer(num(rng));
    case ValueType::Str: {
      std::uniform_int_distribution<int> ch(32, 126);
      std::string s;
      for (int i = len(rng); i > 0; --i) s += static_cast<char>(ch(rng));
      if (rng() % 4 == 0) s += '\n';
      return Value::string(s);
    }
    case ValueType::ArrayInt:
    case ValueType::SeqInt: {
      std::vector<BigInt> e;
      for (int i = len(rng); i > 0; --i) e.emplace_back(num(rng));
      return Value::collection(t, e);
    }
  }
  return {};
}

TEST(ValuePropertyTest, LiteralRoundTrip) {
  std::mt19937_64 rng(42);
  const ValueType types[] = {ValueType::Bool, ValueType::Int, ValueType::Str, ValueType::ArrayInt,
                             ValueType::SeqInt};
  for (int i = 0; i < 2000; ++i) {
    ValueType t = types[i % 5];
    Value v = randomValue(t, rng);
    for (bool fresh : {false, true}) {
      std::string text = renderDafnyLiteral(v, fresh);
      SCOPED_TRACE(text);
      Value back = parseLiteral(text, t);
      EXPECT_EQ(back.type(), t);
      EXPECT_TRUE(valuesEqual(back, v));
    }
  }
}

TEST(ValuePropertyTest, MultisetEqualityMatchesSortedComparison) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> small(0, 3);
  for (int i = 0; i < 2000; ++i) {
    std::vector<long long> a, b;
    for (int k = small(rng); k > 0; --k) a.push_back(small(rng));
    for (int k = small(rng); k > 0; --k) b.push_back(small(rng));
    auto sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    EXPECT_EQ(valuesEqual(ints(ValueType::SeqInt, a), ints(ValueType::SeqInt, b), Comparator::Multiset), sa == sb);
  }
}

}  // namespace
}  // namespace specjudge
