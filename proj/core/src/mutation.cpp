#include "specjudge/mutation.h"

#include <algorithm>

#include "json.hpp"

#include "specjudge/dataset.h"
#include "specjudge/parser.h"

namespace specjudge {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr int kFirstPrintable = 32;   // ' '
constexpr int kLastPrintable = 126;   // '~'

std::string charText(int c) { return std::string(1, static_cast<char>(c)); }

}  // namespace

std::uint64_t SplitMix64::mix(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t SplitMix64::next() {
  std::uint64_t out = mix(state_);
  state_ += kGolden;
  return out;
}

std::int64_t SplitMix64::uniform(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  // Largest multiple of span that fits, to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span + 1) % span;
  std::uint64_t x = next();
  while (x > limit) x = next();
  return lo + static_cast<std::int64_t>(x % span);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mutationKey(std::uint64_t seed, std::string_view taskId, std::string_view testId,
                          std::uint64_t attempt) {
  std::uint64_t k = SplitMix64::mix(seed);
  k = SplitMix64::mix(k ^ fnv1a64(taskId));
  k = SplitMix64::mix(k ^ fnv1a64(testId));
  return SplitMix64::mix(k ^ attempt);
}

std::string_view toString(MutationKind kind) {
  switch (kind) {
    case MutationKind::BoolFlip: return "BoolFlip";
    case MutationKind::IntDelta: return "IntDelta";
    case MutationKind::StrReplace: return "StrReplace";
    case MutationKind::StrAppend: return "StrAppend";
    case MutationKind::ArrDrop: return "ArrDrop";
    case MutationKind::ArrInsert: return "ArrInsert";
    case MutationKind::Curated: return "Curated";
  }
  return "?";
}

std::string describe(const MutationDescriptor& d) {
  std::string name(toString(d.kind));
  switch (d.kind) {
    case MutationKind::BoolFlip:
    case MutationKind::Curated: return name;
    case MutationKind::IntDelta: return name + "(" + d.amount.str() + ")";
    case MutationKind::StrReplace: return name + "(" + std::to_string(d.index) + ", " + quoteDafnyString(d.text) + ")";
    case MutationKind::StrAppend: return name + "(" + quoteDafnyString(d.text) + ")";
    case MutationKind::ArrDrop: return name + "(" + std::to_string(d.index) + ")";
    case MutationKind::ArrInsert: return name + "(" + std::to_string(d.index) + ", " + d.amount.str() + ")";
  }
  return name;
}

Value mutateValue(const Value& v, SplitMix64& rng, MutationDescriptor& d) {
  switch (v.type()) {
    case ValueType::Bool:
      d.kind = MutationKind::BoolFlip;
      return Value::boolean(!v.asBool());

    case ValueType::Int: {
      BigInt delta = rng.uniform(1, 10);
      if (rng.coin()) delta = -delta;
      d.kind = MutationKind::IntDelta;
      d.amount = delta;
      return Value::integer(v.asInt() + delta);
    }

    case ValueType::Str: {
      std::string s = v.asStr();
      if (s.empty() || rng.coin()) {
        int c = static_cast<int>(rng.uniform(kFirstPrintable, kLastPrintable));
        d.kind = MutationKind::StrAppend;
        d.text = charText(c);
        return Value::string(s + d.text);
      }
      auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(s.size()) - 1));
      int cur = static_cast<unsigned char>(s[i]);
      int c;
      if (cur >= kFirstPrintable && cur <= kLastPrintable) {
        // Draw among the other printable characters.
        c = static_cast<int>(rng.uniform(kFirstPrintable, kLastPrintable - 1));
        if (c >= cur) ++c;
      } else {
        c = static_cast<int>(rng.uniform(kFirstPrintable, kLastPrintable));
      }
      s[i] = static_cast<char>(c);
      d.kind = MutationKind::StrReplace;
      d.index = i;
      d.text = charText(c);
      return Value::string(std::move(s));
    }

    case ValueType::ArrayInt:
    case ValueType::SeqInt: {
      auto elems = v.elements();
      std::vector<BigInt> out(elems.begin(), elems.end());
      const auto n = static_cast<std::int64_t>(out.size());
      if (n == 0 || rng.coin()) {
        auto at = static_cast<std::size_t>(rng.uniform(0, n));
        BigInt base = n == 0 ? BigInt(0) : out[static_cast<std::size_t>(rng.uniform(0, n - 1))];
        BigInt value = base + rng.uniform(-10, 10);
        out.insert(out.begin() + static_cast<std::ptrdiff_t>(at), value);
        d.kind = MutationKind::ArrInsert;
        d.index = at;
        d.amount = value;
      } else {
        auto at = static_cast<std::size_t>(rng.uniform(0, n - 1));
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(at));
        d.kind = MutationKind::ArrDrop;
        d.index = at;
      }
      return Value::collection(v.type(), std::move(out));
    }
  }
  throw ValueError("unmutable value");
}

namespace {

bool seenBefore(const std::vector<MutantCase>& out, const std::vector<Value>& cand, Comparator cmp) {
  return std::any_of(out.begin(), out.end(),
                     [&](const MutantCase& m) { return tuplesEqual(m.outputs, cand, cmp); });
}

std::string mutantId(const std::string& testId, std::size_t k) { return testId + "/m" + std::to_string(k); }

MutationDescriptor inferDescriptor(const Value& expected, const Value& mutant, std::size_t component) {
  MutationDescriptor d;
  d.component = component;
  if (!isCollection(expected.type())) return d;
  auto a = expected.elements();
  auto b = mutant.elements();
  // One-element difference in length: find the first position where they
  // diverge and check the remainders line up.
  auto firstDiff = [](std::span<const BigInt> x, std::span<const BigInt> y) {
    std::size_t i = 0;
    while (i < x.size() && i < y.size() && x[i] == y[i]) ++i;
    return i;
  };
  if (b.size() + 1 == a.size()) {
    std::size_t i = firstDiff(a, b);
    if (std::equal(a.begin() + static_cast<std::ptrdiff_t>(i) + 1, a.end(), b.begin() + static_cast<std::ptrdiff_t>(i))) {
      d.kind = MutationKind::ArrDrop;
      d.index = i;
    }
  } else if (a.size() + 1 == b.size()) {
    std::size_t i = firstDiff(a, b);
    if (std::equal(b.begin() + static_cast<std::ptrdiff_t>(i) + 1, b.end(), a.begin() + static_cast<std::ptrdiff_t>(i))) {
      d.kind = MutationKind::ArrInsert;
      d.index = i;
      d.amount = b[i];
    }
  }
  return d;
}

}  // namespace

std::vector<MutantCase> generateMutants(std::string_view taskId, const TestCase& test, const MutationConfig& cfg) {
  std::vector<MutantCase> out;
  if (test.expected.empty()) return out;
  for (std::size_t attempt = 0; attempt < cfg.maxAttempts && out.size() < cfg.mutantsPerTest; ++attempt) {
    SplitMix64 rng(mutationKey(cfg.seed, taskId, test.id, attempt));
    std::size_t component = attempt % test.expected.size();
    MutationDescriptor d;
    d.component = component;
    std::vector<Value> cand = test.expected;
    cand[component] = mutateValue(test.expected[component], rng, d);
    if (tuplesEqual(cand, test.expected, test.comparator) || seenBefore(out, cand, test.comparator)) continue;
    out.push_back(MutantCase{mutantId(test.id, out.size() + 1), test.id, std::move(cand), std::move(d)});
  }
  return out;
}

std::vector<MutantCase> curatedMutants(const TestCase& test, const std::vector<std::vector<Value>>& outputs) {
  std::vector<MutantCase> out;
  for (const auto& cand : outputs) {
    if (cand.size() != test.expected.size()) {
      throw ValueError(test.id + ": curated mutant has " + std::to_string(cand.size()) + " outputs, expected " +
                       std::to_string(test.expected.size()));
    }
    for (std::size_t k = 0; k < cand.size(); ++k) {
      if (cand[k].type() != test.expected[k].type()) {
        throw ValueError(test.id + ": curated mutant " + toDisplayString(cand[k]) + " has type " +
                         std::string(toString(cand[k].type())) + ", expected " +
                         std::string(toString(test.expected[k].type())));
      }
    }
    if (tuplesEqual(cand, test.expected, test.comparator)) {
      throw ValueError(test.id + ": curated mutant equals the expected output");
    }
    if (seenBefore(out, cand, test.comparator)) throw ValueError(test.id + ": duplicate curated mutant");

    MutationDescriptor d;
    std::size_t changed = 0, which = 0;
    for (std::size_t k = 0; k < cand.size(); ++k) {
      if (!valuesEqual(cand[k], test.expected[k])) {
        ++changed;
        which = k;
      }
    }
    if (changed == 1) d = inferDescriptor(test.expected[which], cand[which], which);
    out.push_back(MutantCase{mutantId(test.id, out.size() + 1), test.id, cand, std::move(d)});
  }
  return out;
}

CuratedLiterals loadCurated(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DatasetError(std::string("malformed curated mutants JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DatasetError("curated mutants must be an object keyed by task id");

  auto literal = [](const json& j) -> std::string {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer() || j.is_boolean()) return j.dump();
    if (j.is_array() && std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_number_integer(); })) {
      std::string s = "[";
      for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + j[i].dump();
      return s + "]";
    }
    throw DatasetError("unsupported curated mutant entry " + j.dump());
  };

  CuratedLiterals out;
  for (auto t = doc.begin(); t != doc.end(); ++t) {
    if (!t.value().is_object()) throw DatasetError("curated mutants for task " + t.key() + " must be an object");
    for (auto c = t.value().begin(); c != t.value().end(); ++c) {
      if (!c.value().is_array()) {
        throw DatasetError("curated mutants for " + t.key() + "/" + c.key() + " must be an array");
      }
      auto& list = out[t.key()][c.key()];
      for (const auto& entry : c.value()) {
        bool tuple = entry.is_array() && !entry.empty() &&
                     std::all_of(entry.begin(), entry.end(), [](const json& x) { return x.is_string(); });
        if (tuple) {
          std::vector<std::string> parts;
          for (const auto& x : entry) parts.push_back(x.get<std::string>());
          list.push_back(std::move(parts));
        } else {
          list.push_back({literal(entry)});
        }
      }
    }
  }
  return out;
}

std::vector<std::vector<Value>> curatedValues(const std::vector<std::vector<std::string>>& literals,
                                              const std::vector<Param>& outputs) {
  std::vector<std::vector<Value>> out;
  for (const auto& tuple : literals) {
    if (tuple.size() != outputs.size()) {
      throw ValueError("curated mutant has " + std::to_string(tuple.size()) + " components, the method returns " +
                       std::to_string(outputs.size()));
    }
    std::vector<Value> vals;
    for (std::size_t k = 0; k < tuple.size(); ++k) vals.push_back(parseLiteral(tuple[k], outputs[k].type));
    out.push_back(std::move(vals));
  }
  return out;
}

}  // namespace specjudge
