#include "specjudge/lexer.h"

#include <cctype>

namespace specjudge {

std::string SourceLoc::str() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

ParseError::ParseError(std::string message, SourceLoc loc, std::string construct)
    : std::runtime_error(loc.valid() ? loc.str() + ": " + message : message),
      message_(std::move(message)),
      loc_(loc),
      construct_(std::move(construct)) {}

std::string_view describe(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string literal";
    case Tok::Char: return "char literal";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::ColonColon: return "'::'";
    case Tok::Assign: return "':='";
    case Tok::Dot: return "'.'";
    case Tok::DotDot: return "'..'";
    case Tok::Bar: return "'|'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::Eq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::And: return "'&&'";
    case Tok::Or: return "'||'";
    case Tok::Not: return "'!'";
    case Tok::Implies: return "'==>'";
    case Tok::Explies: return "'<=='";
    case Tok::Iff: return "'<==>'";
    case Tok::NotIn: return "'!in'";
    case Tok::Arrow: return "'=>'";
    case Tok::Question: return "'?'";
    case Tok::End: return "end of input";
  }
  return "?";
}

namespace {

bool isIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool isIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipTrivia();
      if (pos_ >= src_.size()) {
        out.push_back(Token{Tok::End, "", here(), pos_, pos_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  SourceLoc here() const { return SourceLoc{line_, col_}; }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  bool startsWith(std::string_view s) const { return src_.substr(pos_).starts_with(s); }

  void skipTrivia() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (startsWith("//")) {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (startsWith("/*")) {
        SourceLoc start = here();
        advance(2);
        int depth = 1;
        while (depth > 0) {
          if (pos_ >= src_.size()) throw ParseError("unterminated block comment", start);
          if (startsWith("/*")) {
            ++depth;
            advance(2);
          } else if (startsWith("*/")) {
            --depth;
            advance(2);
          } else {
            advance();
          }
        }
      } else {
        return;
      }
    }
  }

  Token make(Tok kind, std::size_t len, SourceLoc loc) {
    std::size_t start = pos_;
    std::string text(src_.substr(pos_, len));
    advance(len);
    return Token{kind, std::move(text), loc, start, pos_};
  }

  char decodeEscape(SourceLoc loc) {
    advance();  // backslash
    char c = peek();
    advance();
    switch (c) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case '0': return '\0';
      case '\\': return '\\';
      case '"': return '"';
      case '\'': return '\'';
      default: throw ParseError(std::string("unsupported escape '\\") + c + "'", loc);
    }
  }

  Token next() {
    SourceLoc loc = here();
    std::size_t start = pos_;
    char c = peek();

    if (isIdentStart(c)) {
      std::size_t len = 0;
      while (isIdentChar(peek(len))) ++len;
      return make(Tok::Ident, len, loc);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      if (c == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
        advance(2);
        std::string hex;
        while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_') {
          if (peek() != '_') hex += peek();
          advance();
        }
        if (hex.empty()) throw ParseError("malformed hex literal", loc);
        return Token{Tok::Number, "0x" + hex, loc, start, pos_};
      }
      while (std::isdigit(static_cast<unsigned char>(peek())) || (peek() == '_' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        if (peek() != '_') digits += peek();
        advance();
      }
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        throw ParseError("real literals are not supported", loc, "real");
      }
      return Token{Tok::Number, digits, loc, start, pos_};
    }
    if (c == '"') {
      advance();
      std::string text;
      while (peek() != '"') {
        if (pos_ >= src_.size() || peek() == '\n') throw ParseError("unterminated string literal", loc);
        if (peek() == '\\') {
          text += decodeEscape(loc);
        } else {
          text += peek();
          advance();
        }
      }
      advance();
      return Token{Tok::String, std::move(text), loc, start, pos_};
    }
    if (c == '\'') {
      advance();
      std::string text;
      if (peek() == '\\') {
        text += decodeEscape(loc);
      } else {
        text += peek();
        advance();
      }
      if (peek() != '\'') throw ParseError("malformed char literal", loc);
      advance();
      return Token{Tok::Char, std::move(text), loc, start, pos_};
    }

    struct Punct {
      std::string_view text;
      Tok kind;
    };
    // Longest match first.
    static constexpr Punct kPuncts[] = {
        {"<==>", Tok::Iff}, {"==>", Tok::Implies}, {"<==", Tok::Explies},
        {"==", Tok::Eq},    {"!=", Tok::Ne},       {"<=", Tok::Le},
        {">=", Tok::Ge},    {"&&", Tok::And},      {"||", Tok::Or},
        {"::", Tok::ColonColon}, {":=", Tok::Assign}, {"..", Tok::DotDot},
        {"=>", Tok::Arrow}, {"<", Tok::Lt},        {">", Tok::Gt},
        {"(", Tok::LParen}, {")", Tok::RParen},    {"[", Tok::LBracket},
        {"]", Tok::RBracket}, {"{", Tok::LBrace},  {"}", Tok::RBrace},
        {",", Tok::Comma},  {";", Tok::Semi},      {":", Tok::Colon},
        {".", Tok::Dot},    {"|", Tok::Bar},       {"+", Tok::Plus},
        {"-", Tok::Minus},  {"*", Tok::Star},      {"/", Tok::Slash},
        {"%", Tok::Percent}, {"?", Tok::Question},
    };
    if (c == '!') {
      if (startsWith("!in") && !isIdentChar(peek(3))) return make(Tok::NotIn, 3, loc);
      if (peek(1) != '=') return make(Tok::Not, 1, loc);
    }
    for (const auto& p : kPuncts) {
      if (startsWith(p.text)) return make(p.kind, p.text.size(), loc);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", loc);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace specjudge
