#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace specjudge {

using BigInt = boost::multiprecision::cpp_int;

/// The closed set of value types a test input or output can have.
enum class ValueType { Bool, Int, Str, ArrayInt, SeqInt };

std::string_view toString(ValueType type);

inline bool isCollection(ValueType type) {
  return type == ValueType::ArrayInt || type == ValueType::SeqInt;
}

/// Arrays and sequences of ints carry the same payload; one can stand in for
/// the other when a dataset signature and a spec signature disagree.
inline bool compatibleTypes(ValueType a, ValueType b) {
  return a == b || (isCollection(a) && isCollection(b));
}

class ValueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An immutable concrete value. Collection payloads are shared, so copying a
/// Value is cheap regardless of its length.
class Value {
 public:
  Value() : Value(boolean(false)) {}

  static Value boolean(bool b);
  static Value integer(BigInt i);
  static Value integer(long long i) { return integer(BigInt(i)); }
  static Value string(std::string s);
  static Value array(std::vector<BigInt> elems);
  static Value sequence(std::vector<BigInt> elems);
  static Value collection(ValueType type, std::vector<BigInt> elems);

  ValueType type() const { return type_; }

  bool asBool() const;
  const BigInt& asInt() const;
  const std::string& asStr() const;
  std::span<const BigInt> elements() const;

  /// Same payload, re-tagged as `type`. Only valid between compatible types.
  Value coercedTo(ValueType type) const;

 private:
  using Elems = std::shared_ptr<const std::vector<BigInt>>;

  Value(ValueType type, std::variant<bool, BigInt, std::string, Elems> payload)
      : type_(type), payload_(std::move(payload)) {}

  ValueType type_;
  std::variant<bool, BigInt, std::string, Elems> payload_;
};

enum class Comparator { Exact, Multiset };

std::string_view toString(Comparator cmp);

/// Exact: ordered equality. Multiset: equal as element multisets; only
/// defined for collections. Throws ValueError on a type mismatch or on a
/// Multiset comparison of non-collections.
bool valuesEqual(const Value& a, const Value& b, Comparator cmp = Comparator::Exact);

/// Element-wise valuesEqual over two aligned tuples of values.
bool tuplesEqual(std::span<const Value> a, std::span<const Value> b,
                 Comparator cmp = Comparator::Exact);

/// Dafny source text for `v`. Arrays render as `new int[] [...]` when
/// `asFreshArray` is set and as a sequence display otherwise.
std::string renderDafnyLiteral(const Value& v, bool asFreshArray = false);

/// Quoted Dafny string literal with escapes.
std::string quoteDafnyString(std::string_view s);

/// Debug/diagnostic rendering, e.g. `[4, 5]`, `true`, `"ab"`.
std::string toDisplayString(const Value& v);

}  // namespace specjudge
