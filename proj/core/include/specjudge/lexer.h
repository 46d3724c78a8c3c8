#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "specjudge/source.h"

namespace specjudge {

enum class Tok {
  Ident,
  Number,
  String,
  Char,
  // punctuation
  LParen, RParen, LBracket, RBracket, LBrace, RBrace,
  Comma, Semi, Colon, ColonColon, Assign /* := */, Dot, DotDot, Bar,
  // operators
  Plus, Minus, Star, Slash, Percent,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or, Not, Implies, Explies, Iff,
  NotIn,   // `!in`
  Arrow,   // `=>`
  Question,
  End,
};

struct Token {
  Tok kind;
  std::string text;   // identifier/keyword spelling, number digits, decoded string
  SourceLoc loc;
  std::size_t offset = 0;  // byte offset of the first character
  std::size_t end = 0;     // byte offset one past the last character
};

/// Tokenizes Dafny source. Comments (`//`, nested `/* */`) are skipped.
/// Keywords come back as Ident; the parser decides by spelling.
std::vector<Token> tokenize(std::string_view source);

std::string_view describe(Tok kind);

}  // namespace specjudge
