#include "specjudge/harness.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "specjudge/parser.h"
#include "specjudge/printer.h"

namespace specjudge {

std::string_view toString(HarnessKind kind) {
  switch (kind) {
    case HarnessKind::Correctness: return "correctness";
    case HarnessKind::Completeness: return "completeness";
    case HarnessKind::AlternateCheck: return "alternate";
  }
  return "?";
}

std::string Harness::fileName() const {
  auto clean = [](std::string s) {
    for (char& c : s) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' && c != '-') c = '_';
    }
    return s;
  };
  return clean(taskId) + "__" + std::string(toString(kind)) + "__" + clean(id) + ".dfy";
}

namespace {

std::string freshName(const Param& p, std::size_t position) { return p.name + "_h" + std::to_string(position + 1); }

std::string paramList(const std::vector<Param>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += ps[i].name + ": " + std::string(toString(ps[i].type));
  }
  return out;
}

std::string helpers(const SpecUnit& spec, const TestCase& test, const HarnessOptions& opts) {
  std::size_t longest = 0;
  for (const auto& v : test.inputs) {
    if (isCollection(v.type())) longest = std::max(longest, v.elements().size());
    if (v.type() == ValueType::Str) longest = std::max(longest, v.asStr().size());
  }
  std::string out;
  for (const auto& name : spec.helperOrder) {
    const FunctionDef& f = spec.helpers.at(name);
    std::string text = f.text;
    if (opts.fuelHints && f.isRecursive) {
      text.insert(f.nameOffset, "{:fuel " + std::to_string(longest + 1) + "} ");
    }
    out += text + "\n\n";
  }
  return out;
}

std::string header(const SpecUnit& spec, bool withEnsures) {
  const auto& m = spec.method;
  std::string out = "method " + m.name + "(" + paramList(m.inputs) + ")";
  if (!m.outputs.empty()) out += " returns (" + paramList(m.outputs) + ")";
  out += "\n";
  for (const auto& c : spec.preconditions) out += "  requires " + c.text + "\n";
  if (withEnsures) {
    for (const auto& c : spec.ensures) out += "  ensures " + c.text + "\n";
  }
  return out;
}

/// Declarations of the fresh locals, the asserted requires clauses and the
/// input constraints.
std::string fixInputs(const SpecUnit& spec, const TestCase& test) {
  const auto& inputs = spec.method.inputs;
  std::string out;
  std::map<std::string, ExprPtr> subst;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Param& p = inputs[k];
    const Value& v = test.inputs[k];
    if (isCollection(p.type)) {
      std::string local = freshName(p, k);
      out += "  var " + local + " := " + renderDafnyLiteral(v, p.type == ValueType::ArrayInt) + ";\n";
      subst[p.name] = makeExpr(SourceLoc{}, VarRef{local});
    } else {
      subst[p.name] = parseExpression(renderDafnyLiteral(v));
    }
  }
  for (const auto& c : spec.preconditions) {
    ExprPtr e = substitute(c.expr, [&](const std::string& n) -> ExprPtr {
      auto it = subst.find(n);
      return it == subst.end() ? nullptr : it->second;
    });
    out += "  assert " + printExpr(e) + ";\n";
  }
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Param& p = inputs[k];
    const Value& v = test.inputs[k];
    if (!isCollection(p.type)) {
      out += "  assume {:axiom} " + p.name + " == " + renderDafnyLiteral(v) + ";\n";
      continue;
    }
    std::string local = freshName(p, k);
    if (p.type == ValueType::ArrayInt) {
      out += "  assume {:axiom} " + p.name + "[.." + p.name + ".Length] == " + local + "[.." + local + ".Length];\n";
    } else {
      out += "  assume {:axiom} " + p.name + " == " + local + ";\n";
    }
    std::size_t n = v.elements().size();
    if (n == 0) continue;
    out += "  assert ";
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += " && ";
      std::string idx = "[" + std::to_string(i) + "]";
      out += p.name + idx + " == " + local + idx;
    }
    out += ";\n";
  }
  return out;
}

std::string assignOutputs(const SpecUnit& spec, const std::vector<Value>& outputs) {
  std::string out;
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const Param& p = spec.method.outputs[k];
    out += "  " + p.name + " := " + renderDafnyLiteral(outputs[k], p.type == ValueType::ArrayInt) + ";\n";
  }
  return out;
}

std::string program(const TaskRecord& task, const TestCase& test, const std::vector<Value>& outputs,
                    const HarnessOptions& opts) {
  return helpers(task.spec, test, opts) + header(task.spec, true) + "{\n" + fixInputs(task.spec, test) +
         assignOutputs(task.spec, outputs) + "}\n";
}

}  // namespace

Harness genCorrectnessHarness(const TaskRecord& task, const TestCase& test, const HarnessOptions& opts) {
  return Harness{HarnessKind::Correctness, task.taskId, test.id, program(task, test, test.expected, opts)};
}

Harness genCompletenessHarness(const TaskRecord& task, const TestCase& parent, const MutantCase& mutant,
                               const HarnessOptions& opts) {
  return Harness{HarnessKind::Completeness, task.taskId, mutant.id, program(task, parent, mutant.outputs, opts)};
}

Harness genAlternateHarness(const TaskRecord& task, const TestCase& test, const HarnessOptions& opts) {
  const SpecUnit& spec = task.spec;
  if (spec.method.outputs.size() != 1) {
    throw std::invalid_argument("the alternate check needs a method with exactly one output");
  }
  const Param& out = spec.method.outputs.front();
  std::string body = fixInputs(spec, test);
  body += "  " + out.name + " := *;\n";
  for (const auto& c : spec.ensures) body += "  assume {:axiom} " + c.text + ";\n";
  std::string lhs = out.type == ValueType::ArrayInt ? out.name + "[.." + out.name + ".Length]" : out.name;
  body += "  assert " + lhs + " == " + renderDafnyLiteral(test.expected.front()) + ";\n";
  std::string source = helpers(spec, test, opts) + header(spec, false) + "{\n" + body + "}\n";
  return Harness{HarnessKind::AlternateCheck, task.taskId, test.id, std::move(source)};
}

}  // namespace specjudge
