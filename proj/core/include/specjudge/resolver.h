#pragma once

#include <map>
#include <string>
#include <vector>

#include "specjudge/task.h"

namespace specjudge {

/// Types the resolver tracks. Char only occurs inside expressions
/// (string indexing, char literals); Unknown is the type of `[]`.
enum class StaticType { Bool, Int, Char, Str, ArrayInt, SeqInt, Unknown };

StaticType staticTypeOf(ValueType t);

/// Checks that every identifier in the spec's clauses is a parameter, a
/// bound variable or a helper; type-checks the clauses and every helper they
/// reach; flags recursive helpers. Fills `unit.helpers` and
/// `unit.helperOrder` with the reachable helpers. Throws ParseError.
///
/// Mutual recursion between helpers is rejected; self-recursion is allowed.
void resolveSpec(SpecUnit& unit, const std::map<std::string, FunctionDef>& all,
                 const std::vector<std::string>& sourceOrder);

}  // namespace specjudge
