#pragma once

#include <stdexcept>
#include <string>

namespace specjudge {

struct SourceLoc {
  int line = 0;
  int column = 0;

  bool valid() const { return line > 0; }
  std::string str() const;
  friend bool operator==(const SourceLoc&, const SourceLoc&) = default;
};

/// Raised by the lexer, parser and resolver. `construct` names the offending
/// construct for unsupported-feature diagnostics ("old", "array2<int>", ...).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, SourceLoc loc, std::string construct = {});

  const std::string& message() const { return message_; }
  const SourceLoc& loc() const { return loc_; }
  const std::string& construct() const { return construct_; }

 private:
  std::string message_;
  SourceLoc loc_;
  std::string construct_;
};

}  // namespace specjudge
