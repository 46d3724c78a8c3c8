#include "specjudge/dataset.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "specjudge/parser.h"
#include "specjudge/printer.h"

namespace specjudge {

using ordered_json = nlohmann::ordered_json;

// ---- task.h ----

const Param* MethodSignature::find(std::string_view n) const {
  for (const auto* list : {&inputs, &outputs}) {
    for (const auto& p : *list) {
      if (p.name == n) return &p;
    }
  }
  return nullptr;
}

const FunctionDef* SpecUnit::helper(const std::string& n) const {
  auto it = helpers.find(n);
  return it == helpers.end() ? nullptr : &it->second;
}

const TestCase* TaskRecord::test(std::string_view id) const {
  for (const auto& t : tests) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::string_view toString(SpecLabel label) {
  switch (label) {
    case SpecLabel::WrongSpec: return "WRONG_SPEC";
    case SpecLabel::WeakSpec: return "WEAK_SPEC";
    case SpecLabel::StrongSpec: return "STRONG_SPEC";
  }
  return "?";
}

SpecLabel parseLabel(std::string_view text) {
  std::string norm;
  for (char c : text) {
    if (c == '-' || c == ' ') c = '_';
    norm += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  if (norm == "WRONG_SPEC" || norm == "WRONG") return SpecLabel::WrongSpec;
  if (norm == "WEAK_SPEC" || norm == "WEAK") return SpecLabel::WeakSpec;
  if (norm == "STRONG_SPEC" || norm == "STRONG") return SpecLabel::StrongSpec;
  throw std::invalid_argument("unknown label '" + std::string(text) + "'");
}

bool naturalLess(std::string_view a, std::string_view b) {
  auto isDigit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (isDigit(a[i]) && isDigit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && isDigit(a[ie])) ++ie;
      while (je < b.size() && isDigit(b[je])) ++je;
      std::string_view na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if (a.size() - i != b.size() - j) return a.size() - i < b.size() - j;
  return a < b;
}

// ---- snippets ----

namespace {

using Binding = std::variant<ExprPtr, NewArray>;

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

class SnippetReader {
 public:
  SnippetReader(std::string_view id, const MethodSignature& sig) : id_(id), sig_(sig) {}

  TestCase read(std::string_view text) {
    std::vector<Stmt> stmts = parseStatements(text);
    for (const auto& s : stmts) statement(s);
    if (!called_) throw ParseError("no call to '" + sig_.name + "'", SourceLoc{});

    TestCase tc;
    tc.id = id_;
    tc.inputs = std::move(inputs_);
    for (std::size_t k = 0; k < sig_.outputs.size(); ++k) {
      if (!expected_[k]) {
        throw ParseError("no assertion fixes output '" + sig_.outputs[k].name + "'", SourceLoc{});
      }
      tc.expected.push_back(*expected_[k]);
    }
    return tc;
  }

 private:
  void statement(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::VarDecl:
      case Stmt::Kind::Assign:
        binding(s);
        return;
      case Stmt::Kind::Assert:
      case Stmt::Kind::Expect:
      {
        std::vector<ExprPtr> conjuncts;
        collectConjuncts(s.expr, conjuncts);
        for (const auto& c : conjuncts) assertion(c);
        return;
      }
      case Stmt::Kind::Assume:
        throw ParseError("assume statements are not supported in tests", s.loc, "assume");
    }
  }

  void binding(const Stmt& s) {
    if (const auto* arr = std::get_if<NewArray>(&s.rhs)) {
      if (s.names.size() != 1) throw ParseError("multiple targets for one array", s.loc);
      bind(s.names.front(), *arr, s.loc);
      return;
    }
    const auto* rhs = std::get_if<ExprPtr>(&s.rhs);
    if (!rhs || !*rhs) throw ParseError("declaration without a value", s.loc);
    if (const auto* call = (*rhs)->as<Call>()) {
      if (!iequals(call->callee, sig_.name)) {
        throw ParseError("call to unknown method '" + call->callee + "'", s.loc, call->callee);
      }
      methodCall(s, *call);
      return;
    }
    if (s.names.size() != 1) throw ParseError("multiple targets for one value", s.loc);
    if (const auto* ref = (*rhs)->as<VarRef>()) {
      auto it = locals_.find(ref->name);
      if (it == locals_.end()) throw ParseError("unbound variable '" + ref->name + "'", s.loc);
      locals_.insert_or_assign(s.names.front(), it->second);
      return;
    }
    bind(s.names.front(), *rhs, s.loc);
  }

  void bind(const std::string& name, Binding b, SourceLoc loc) {
    if (results_.count(name)) throw ParseError("'" + name + "' is reassigned after the call", loc);
    locals_.insert_or_assign(name, std::move(b));
  }

  void methodCall(const Stmt& s, const Call& call) {
    if (called_) throw ParseError("multiple calls to '" + sig_.name + "'", s.loc, "multiple calls");
    called_ = true;
    if (call.args.size() != sig_.inputs.size()) {
      throw ParseError("call passes " + std::to_string(call.args.size()) + " arguments, '" + sig_.name +
                           "' takes " + std::to_string(sig_.inputs.size()),
                       s.loc);
    }
    if (s.names.size() != sig_.outputs.size()) {
      throw ParseError("call binds " + std::to_string(s.names.size()) + " results, '" + sig_.name +
                           "' returns " + std::to_string(sig_.outputs.size()),
                       s.loc);
    }
    for (std::size_t i = 0; i < call.args.size(); ++i) {
      inputs_.push_back(valueOf(call.args[i], sig_.inputs[i].type));
    }
    expected_.assign(sig_.outputs.size(), std::nullopt);
    for (std::size_t k = 0; k < s.names.size(); ++k) results_[s.names[k]] = k;
  }

  Value valueOf(const Binding& b, ValueType type) const {
    if (const auto* arr = std::get_if<NewArray>(&b)) {
      if (!isCollection(type)) {
        throw ParseError("an array is given where " + std::string(toString(type)) + " is expected", SourceLoc{});
      }
      std::vector<BigInt> elems;
      for (const auto& e : arr->elems) elems.push_back(literalExprToValue(e, ValueType::Int).asInt());
      return Value::collection(type, std::move(elems));
    }
    const ExprPtr& e = std::get<ExprPtr>(b);
    if (const auto* ref = e->as<VarRef>()) {
      auto it = locals_.find(ref->name);
      if (it == locals_.end()) throw ParseError("unbound variable '" + ref->name + "'", e->loc);
      return valueOf(it->second, type);
    }
    if (const auto* sl = e->as<Slice>(); sl && !sl->lo && !sl->hi) return valueOf(sl->seq, type);
    if (const auto* sl = e->as<Slice>(); sl && !sl->lo && sl->hi && sl->hi->is<Length>()) {
      return valueOf(sl->seq, type);
    }
    return literalExprToValue(e, type);
  }

  /// The result index `e` denotes (`r`, `r[..]`, `r[..r.Length]`), if any.
  std::optional<std::size_t> resultOf(const ExprPtr& e) const {
    const Expr* cur = e.get();
    if (const auto* sl = cur->as<Slice>(); sl && !sl->lo) {
      if (sl->hi) {
        const auto* len = sl->hi->as<Length>();
        const auto* ref = len ? len->array->as<VarRef>() : nullptr;
        const auto* base = sl->seq->as<VarRef>();
        if (!ref || !base || ref->name != base->name) return std::nullopt;
      }
      cur = sl->seq.get();
    }
    if (const auto* ref = cur->as<VarRef>()) {
      auto it = results_.find(ref->name);
      if (it != results_.end()) return it->second;
    }
    return std::nullopt;
  }

  void fix(std::size_t k, const ExprPtr& other, SourceLoc loc) {
    Value v = valueOf(other, sig_.outputs[k].type);
    if (expected_[k] && !valuesEqual(*expected_[k], v)) {
      throw ParseError("conflicting expected values for '" + sig_.outputs[k].name + "'", loc);
    }
    expected_[k] = v;
  }

  void assertion(const ExprPtr& e) {
    if (!called_) throw ParseError("assertion before the call to '" + sig_.name + "'", e->loc);
    if (const auto* b = e->as<Binary>(); b && b->op == BinaryOp::Eq) {
      equality(b->lhs, b->rhs, e);
      return;
    }
    if (const auto* c = e->as<Call>(); c && c->args.size() == 2) {
      equality(c->args[0], c->args[1], e);
      return;
    }
    if (auto k = resultOf(e); k && sig_.outputs[*k].type == ValueType::Bool) {
      fix(*k, makeExpr(e->loc, BoolLit{true}), e->loc);
      return;
    }
    if (const auto* u = e->as<Unary>(); u && u->op == UnaryOp::Not) {
      if (auto k = resultOf(u->operand); k && sig_.outputs[*k].type == ValueType::Bool) {
        fix(*k, makeExpr(e->loc, BoolLit{false}), e->loc);
        return;
      }
    }
    throw ParseError("unsupported assertion '" + printExpr(e) + "'", e->loc, "assertion");
  }

  void equality(const ExprPtr& lhs, const ExprPtr& rhs, const ExprPtr& whole) {
    auto kl = resultOf(lhs);
    auto kr = resultOf(rhs);
    if (kl && !kr) return fix(*kl, rhs, whole->loc);
    if (kr && !kl) return fix(*kr, lhs, whole->loc);
    throw ParseError("unsupported assertion '" + printExpr(whole) + "'", whole->loc, "assertion");
  }

  std::string id_;
  const MethodSignature& sig_;
  std::map<std::string, Binding> locals_;
  std::map<std::string, std::size_t> results_;
  std::vector<Value> inputs_;
  std::vector<std::optional<Value>> expected_;
  bool called_ = false;
};

// ---- records ----

std::string idString(const ordered_json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw DatasetError("task_id must be a string or an integer");
}

Comparator parseComparator(const ordered_json& j) {
  if (!j.is_string()) throw DatasetError("comparator must be a string");
  std::string s = j.get<std::string>();
  if (s == "exact") return Comparator::Exact;
  if (s == "multiset") return Comparator::Multiset;
  throw DatasetError("unknown comparator '" + s + "'");
}

std::string fieldString(const ordered_json& rec, const char* key) {
  auto it = rec.find(key);
  if (it == rec.end()) throw DatasetError(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw DatasetError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

TaskRecord readRecord(const std::string& taskId, const ordered_json& rec, const SpecLookup& specs) {
  if (!rec.is_object()) throw DatasetError("record is not an object");
  TaskRecord r;
  r.taskId = taskId;
  if (auto it = rec.find("task_description"); it != rec.end() && it->is_string()) {
    r.description = it->get<std::string>();
  }
  try {
    r.signature = parseSignature(fieldString(rec, "method_signature"));
  } catch (const ParseError& e) {
    throw DatasetError("method_signature: " + std::string(e.what()));
  }

  auto tc = rec.find("test_cases");
  if (tc == rec.end() || !tc->is_object() || tc->empty()) throw DatasetError("no tests");
  for (auto it = tc->begin(); it != tc->end(); ++it) {
    if (!it.value().is_string()) throw DatasetError(it.key() + ": snippet must be a string");
    try {
      r.tests.push_back(parseTestSnippet(it.key(), it.value().get<std::string>(), r.signature));
    } catch (const std::exception& e) {
      throw DatasetError(it.key() + ": " + e.what());
    }
  }
  std::sort(r.tests.begin(), r.tests.end(),
            [](const TestCase& a, const TestCase& b) { return naturalLess(a.id, b.id); });

  if (auto it = rec.find("comparator"); it != rec.end()) {
    if (it->is_object()) {
      for (auto c = it->begin(); c != it->end(); ++c) {
        auto t = std::find_if(r.tests.begin(), r.tests.end(), [&](const TestCase& x) { return x.id == c.key(); });
        if (t == r.tests.end()) throw DatasetError("comparator given for unknown test '" + c.key() + "'");
        t->comparator = parseComparator(c.value());
      }
    } else {
      Comparator cmp = parseComparator(*it);
      for (auto& t : r.tests) t.comparator = cmp;
    }
  }
  for (const auto& t : r.tests) {
    if (t.comparator != Comparator::Multiset) continue;
    for (const auto& v : t.expected) {
      if (!isCollection(v.type())) throw DatasetError(t.id + ": multiset comparison of a non-collection output");
    }
  }

  if (auto it = rec.find("label"); it != rec.end() && !it->is_null()) {
    if (!it->is_string()) throw DatasetError("label must be a string");
    try {
      r.label = parseLabel(it->get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw DatasetError(e.what());
    }
  }

  std::optional<std::string> source = specs ? specs(taskId) : std::nullopt;
  if (!source) throw DatasetError("missing spec file for task " + taskId);
  try {
    r.spec = parseSpec(*source, r.signature);
  } catch (const ParseError& e) {
    throw DatasetError("spec: " + std::string(e.what()));
  }

  // Tests are evaluated against the spec's own parameter types.
  for (auto& t : r.tests) {
    for (std::size_t i = 0; i < t.inputs.size(); ++i) t.inputs[i] = t.inputs[i].coercedTo(r.spec.method.inputs[i].type);
    for (std::size_t k = 0; k < t.expected.size(); ++k) {
      t.expected[k] = t.expected[k].coercedTo(r.spec.method.outputs[k].type);
    }
  }
  return r;
}

DatasetEntry readEntry(const std::string& taskId, const ordered_json& rec, const SpecLookup& specs) {
  DatasetEntry entry;
  entry.taskId = taskId;
  try {
    entry.record = readRecord(taskId, rec, specs);
  } catch (const DatasetError& e) {
    entry.diagnostic = e.what();
  } catch (const ParseError& e) {
    entry.diagnostic = e.what();
  } catch (const ValueError& e) {
    entry.diagnostic = e.what();
  }
  return entry;
}

}  // namespace

TestCase parseTestSnippet(std::string_view id, std::string_view text, const MethodSignature& signature) {
  return SnippetReader(id, signature).read(text);
}

std::vector<DatasetEntry> loadDataset(std::string_view json, const SpecLookup& specs) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json);
  } catch (const ordered_json::parse_error& e) {
    throw DatasetError(std::string("malformed dataset JSON: ") + e.what());
  }

  std::vector<DatasetEntry> out;
  if (doc.is_array()) {
    for (const auto& rec : doc) {
      if (!rec.is_object() || !rec.contains("task_id")) throw DatasetError("record without task_id");
      out.push_back(readEntry(idString(rec["task_id"]), rec, specs));
    }
  } else if (doc.is_object() && doc.contains("method_signature")) {
    if (!doc.contains("task_id")) throw DatasetError("record without task_id");
    out.push_back(readEntry(idString(doc["task_id"]), doc, specs));
  } else if (doc.is_object()) {
    for (auto it = doc.begin(); it != doc.end(); ++it) out.push_back(readEntry(it.key(), it.value(), specs));
  } else {
    throw DatasetError("dataset must be a record, an array or an object");
  }

  std::sort(out.begin(), out.end(),
            [](const DatasetEntry& a, const DatasetEntry& b) { return naturalLess(a.taskId, b.taskId); });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].taskId == out[i - 1].taskId) throw DatasetError("duplicate task id " + out[i].taskId);
  }
  return out;
}

SpecLookup specFilesLookup(std::vector<std::filesystem::path> roots) {
  namespace fs = std::filesystem;
  return [roots = std::move(roots)](const std::string& taskId) -> std::optional<std::string> {
    const std::vector<std::string> names = {taskId + ".dfy", "task_id_" + taskId + ".dfy",
                                            "task-id-" + taskId + ".dfy"};
    for (const auto& root : roots) {
      std::error_code ec;
      if (fs::is_directory(root, ec)) {
        for (const auto& n : names) {
          fs::path p = root / n;
          if (fs::is_regular_file(p, ec)) return readFile(p);
        }
      } else if (fs::is_regular_file(root, ec)) {
        std::string file = root.filename().string();
        if (std::find(names.begin(), names.end(), file) != names.end() || root.stem().string() == taskId) {
          return readFile(root);
        }
      }
    }
    return std::nullopt;
  };
}

std::map<std::string, SpecLabel> loadLabels(std::string_view json) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json);
  } catch (const ordered_json::parse_error& e) {
    throw DatasetError(std::string("malformed labels JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DatasetError("labels must be an object keyed by task id");
  std::map<std::string, SpecLabel> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_string()) throw DatasetError("label for task " + it.key() + " must be a string");
    try {
      out[it.key()] = parseLabel(it.value().get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw DatasetError("task " + it.key() + ": " + e.what());
    }
  }
  return out;
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace specjudge
