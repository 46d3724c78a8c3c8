#include "specjudge/value.h"

#include <algorithm>
#include <sstream>

namespace specjudge {

std::string_view toString(ValueType type) {
  switch (type) {
    case ValueType::Bool: return "bool";
    case ValueType::Int: return "int";
    case ValueType::Str: return "string";
    case ValueType::ArrayInt: return "array<int>";
    case ValueType::SeqInt: return "seq<int>";
  }
  return "?";
}

std::string_view toString(Comparator cmp) {
  return cmp == Comparator::Exact ? "exact" : "multiset";
}

Value Value::boolean(bool b) { return Value(ValueType::Bool, b); }

Value Value::integer(BigInt i) { return Value(ValueType::Int, std::move(i)); }

Value Value::string(std::string s) { return Value(ValueType::Str, std::move(s)); }

Value Value::array(std::vector<BigInt> elems) {
  return collection(ValueType::ArrayInt, std::move(elems));
}

Value Value::sequence(std::vector<BigInt> elems) {
  return collection(ValueType::SeqInt, std::move(elems));
}

Value Value::collection(ValueType type, std::vector<BigInt> elems) {
  if (!isCollection(type)) throw ValueError("collection() requires an array or sequence type");
  return Value(type, std::make_shared<const std::vector<BigInt>>(std::move(elems)));
}

bool Value::asBool() const {
  if (type_ != ValueType::Bool) throw ValueError("value is not a bool");
  return std::get<bool>(payload_);
}

const BigInt& Value::asInt() const {
  if (type_ != ValueType::Int) throw ValueError("value is not an int");
  return std::get<BigInt>(payload_);
}

const std::string& Value::asStr() const {
  if (type_ != ValueType::Str) throw ValueError("value is not a string");
  return std::get<std::string>(payload_);
}

std::span<const BigInt> Value::elements() const {
  if (!isCollection(type_)) throw ValueError("value is not a collection");
  return *std::get<Elems>(payload_);
}

Value Value::coercedTo(ValueType type) const {
  if (type == type_) return *this;
  if (!compatibleTypes(type, type_)) {
    throw ValueError("cannot coerce " + std::string(toString(type_)) + " to " +
                     std::string(toString(type)));
  }
  return Value(type, payload_);
}

bool valuesEqual(const Value& a, const Value& b, Comparator cmp) {
  if (a.type() != b.type()) {
    throw ValueError("type mismatch: " + std::string(toString(a.type())) + " vs " +
                     std::string(toString(b.type())));
  }
  if (cmp == Comparator::Multiset) {
    if (!isCollection(a.type())) throw ValueError("multiset comparison needs a collection");
    auto ea = a.elements();
    auto eb = b.elements();
    if (ea.size() != eb.size()) return false;
    std::vector<BigInt> sa(ea.begin(), ea.end());
    std::vector<BigInt> sb(eb.begin(), eb.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    return sa == sb;
  }
  switch (a.type()) {
    case ValueType::Bool: return a.asBool() == b.asBool();
    case ValueType::Int: return a.asInt() == b.asInt();
    case ValueType::Str: return a.asStr() == b.asStr();
    case ValueType::ArrayInt:
    case ValueType::SeqInt: return std::ranges::equal(a.elements(), b.elements());
  }
  return false;
}

bool tuplesEqual(std::span<const Value> a, std::span<const Value> b, Comparator cmp) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // The comparator only applies to collection components.
    Comparator c = isCollection(a[i].type()) ? cmp : Comparator::Exact;
    if (!valuesEqual(a[i], b[i], c)) return false;
  }
  return true;
}

std::string quoteDafnyString(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '\0': out += "\\0"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

namespace {

std::string joinElements(std::span<const BigInt> elems) {
  std::string out = "[";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ", ";
    out += elems[i].str();
  }
  out += "]";
  return out;
}

}  // namespace

std::string renderDafnyLiteral(const Value& v, bool asFreshArray) {
  switch (v.type()) {
    case ValueType::Bool: return v.asBool() ? "true" : "false";
    case ValueType::Int: return v.asInt().str();
    case ValueType::Str: return quoteDafnyString(v.asStr());
    case ValueType::ArrayInt:
      if (asFreshArray) return "new int[] " + joinElements(v.elements());
      return joinElements(v.elements());
    case ValueType::SeqInt: return joinElements(v.elements());
  }
  return {};
}

std::string toDisplayString(const Value& v) { return renderDafnyLiteral(v, false); }

}  // namespace specjudge
