#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "specjudge/task.h"

namespace specjudge {

/// Whole-document problems (malformed JSON, unreadable files).
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads one test snippet. The accepted shape:
///
///   var a1 := new int[] [3, 4, 5, 6];     // literal bindings
///   var res1 := similarElements(a1, a2);  // exactly one call to the method
///   assert arrayEquals(res1, e1);         // or res1 == e1, res1[..] == e1[..],
///                                         // res1 == 25, res1, !res1
///
/// Inputs bind positionally from the call arguments; expected outputs from
/// the assertions. Throws ParseError naming the offending statement.
TestCase parseTestSnippet(std::string_view id, std::string_view text, const MethodSignature& signature);

/// Locates the Dafny spec source for a task id; nullopt when absent.
using SpecLookup = std::function<std::optional<std::string>(const std::string& taskId)>;

/// One dataset task. A task that failed to parse keeps its id and the
/// diagnostic so it can still be reported as "unparsed".
struct DatasetEntry {
  std::string taskId;
  std::optional<TaskRecord> record;
  std::string diagnostic;

  bool parsed() const { return record.has_value(); }
};

/// Loads MBPP-DFY style records. `json` is either one record, an array of
/// records carrying "task_id", or an object keyed by task id. Per-record
/// fields: task_description, method_signature, test_cases {id: snippet},
/// optional label, optional comparator ("exact" | "multiset", or an object
/// {test id: mode}). Entries are returned sorted by task id.
std::vector<DatasetEntry> loadDataset(std::string_view json, const SpecLookup& specs);

/// Finds `<id>.dfy`, `task_id_<id>.dfy` or `task-id-<id>.dfy` under any of
/// the given directories; a path that is a file matches by its stem.
SpecLookup specFilesLookup(std::vector<std::filesystem::path> roots);

/// {task_id: label}. Throws DatasetError on an unknown label string.
std::map<std::string, SpecLabel> loadLabels(std::string_view json);

std::string readFile(const std::filesystem::path& path);

}  // namespace specjudge
