#include "specjudge/parser.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "specjudge/lexer.h"
#include "specjudge/printer.h"
#include "specjudge/resolver.h"

namespace specjudge {

namespace {

const std::set<std::string, std::less<>> kSpecKeywords = {"requires", "ensures", "reads",
                                                           "modifies", "decreases"};

const std::set<std::string, std::less<>> kUnsupportedCalls = {
    "old", "fresh", "multiset", "allocated", "unchanged", "seq", "set", "iset", "map", "imap"};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

BigInt parseNumber(const Token& t) {
  try {
    return BigInt(t.text);
  } catch (const std::exception&) {
    throw ParseError("malformed number '" + t.text + "'", t.loc);
  }
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string_view source)
      : toks_(std::move(toks)), src_(source) {}

  // ---- token helpers ----

  const Token& cur() const { return toks_[pos_]; }
  const Token& ahead(std::size_t n) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool atWord(std::string_view w) const { return cur().kind == Tok::Ident && cur().text == w; }
  bool atEnd() const { return at(Tok::End); }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    take();
    return true;
  }

  bool acceptWord(std::string_view w) {
    if (!atWord(w)) return false;
    take();
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::string got = atEnd() ? "end of input" : "'" + cur().text + "'";
    throw ParseError(what + ", got " + got, cur().loc);
  }

  const Token& expect(Tok k) {
    if (!at(k)) fail("expected " + std::string(describe(k)));
    return take();
  }

  void expectWord(std::string_view w) {
    if (!atWord(w)) fail("expected '" + std::string(w) + "'");
    take();
  }

  std::string expectIdent() { return expect(Tok::Ident).text; }

  std::size_t position() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

  /// `{:name ...}` attributes.
  void skipAttributes() {
    while (at(Tok::LBrace) && ahead(1).kind == Tok::Colon) skipBalanced(Tok::LBrace, Tok::RBrace);
  }

  void skipBalanced(Tok open, Tok close) {
    SourceLoc start = cur().loc;
    expect(open);
    int depth = 1;
    while (depth > 0) {
      if (atEnd()) throw ParseError("unbalanced " + std::string(describe(open)), start);
      if (at(open)) ++depth;
      if (at(close)) --depth;
      take();
    }
  }

  std::string textBetween(std::size_t firstTok, std::size_t endTok) const {
    if (endTok <= firstTok) return {};
    std::size_t b = toks_[firstTok].offset;
    std::size_t e = toks_[endTok - 1].end;
    return std::string(src_.substr(b, e - b));
  }

  // ---- types ----

  ValueType parseType() {
    SourceLoc loc = cur().loc;
    std::size_t first = pos_;
    std::string name = expectIdent();
    std::string arg;
    if (accept(Tok::Lt)) {
      arg = expectIdent();
      if (at(Tok::Lt)) {
        // nested generic: consume for the diagnostic text
        int depth = 1;
        take();
        while (depth > 0 && !atEnd()) {
          if (at(Tok::Lt)) ++depth;
          if (at(Tok::Gt)) --depth;
          take();
        }
        arg += "<...>";
      }
      expect(Tok::Gt);
    }
    std::string text = textBetween(first, pos_);
    text.erase(std::remove_if(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
               text.end());
    if (arg.empty()) {
      if (name == "int" || name == "nat") return ValueType::Int;
      if (name == "bool") return ValueType::Bool;
      if (name == "string") return ValueType::Str;
    } else if (name == "seq" && arg == "int") {
      return ValueType::SeqInt;
    } else if (name == "seq" && arg == "char") {
      return ValueType::Str;
    } else if (name == "array" && (arg == "int" || arg == "nat")) {
      return ValueType::ArrayInt;
    }
    throw ParseError("unsupported type '" + text + "'", loc, text);
  }

  std::vector<Param> parseParams() {
    std::vector<Param> out;
    expect(Tok::LParen);
    if (accept(Tok::RParen)) return out;
    do {
      acceptWord("ghost");
      std::string name = expectIdent();
      expect(Tok::Colon);
      out.push_back(Param{name, parseType()});
    } while (accept(Tok::Comma));
    expect(Tok::RParen);
    return out;
  }

  // ---- expressions ----

  ExprPtr parseExpr() { return parseIff(); }

  ExprPtr parseIff() {
    ExprPtr lhs = parseImplies();
    while (at(Tok::Iff)) {
      SourceLoc loc = take().loc;
      ExprPtr rhs = parseImplies();
      lhs = makeExpr(loc, Binary{BinaryOp::Iff, lhs, rhs});
    }
    return lhs;
  }

  ExprPtr parseImplies() {
    ExprPtr lhs = parseLogical();
    if (at(Tok::Implies)) {
      SourceLoc loc = take().loc;
      ExprPtr rhs = parseImplies();
      if (at(Tok::Explies)) fail("'==>' and '<==' cannot be mixed without parentheses");
      return makeExpr(loc, Binary{BinaryOp::Implies, lhs, rhs});
    }
    while (at(Tok::Explies)) {
      SourceLoc loc = take().loc;
      ExprPtr rhs = parseLogical();
      lhs = makeExpr(loc, Binary{BinaryOp::Explies, lhs, rhs});
      if (at(Tok::Implies)) fail("'==>' and '<==' cannot be mixed without parentheses");
    }
    return lhs;
  }

  ExprPtr parseLogical() {
    // Dafny permits a leading '&&' / '||' for layout.
    if (at(Tok::And) || at(Tok::Or)) {
      Tok lead = cur().kind;
      take();
      ExprPtr first = parseRelation();
      return continueLogical(first, lead);
    }
    ExprPtr first = parseRelation();
    if (at(Tok::And) || at(Tok::Or)) return continueLogical(first, cur().kind);
    return first;
  }

  ExprPtr continueLogical(ExprPtr lhs, Tok kind) {
    BinaryOp op = kind == Tok::And ? BinaryOp::And : BinaryOp::Or;
    Tok other = kind == Tok::And ? Tok::Or : Tok::And;
    while (at(kind)) {
      SourceLoc loc = take().loc;
      ExprPtr rhs = parseRelation();
      lhs = makeExpr(loc, Binary{op, lhs, rhs});
    }
    if (at(other)) fail("'&&' and '||' cannot be mixed without parentheses");
    return lhs;
  }

  std::optional<BinaryOp> relOp() const {
    switch (cur().kind) {
      case Tok::Eq: return BinaryOp::Eq;
      case Tok::Ne: return BinaryOp::Ne;
      case Tok::Lt: return BinaryOp::Lt;
      case Tok::Le: return BinaryOp::Le;
      case Tok::Gt: return BinaryOp::Gt;
      case Tok::Ge: return BinaryOp::Ge;
      case Tok::NotIn: return BinaryOp::NotIn;
      case Tok::Ident:
        if (cur().text == "in") return BinaryOp::In;
        return std::nullopt;
      default: return std::nullopt;
    }
  }

  ExprPtr parseRelation() {
    ExprPtr first = parseAdditive();
    struct Link {
      BinaryOp op;
      ExprPtr rhs;
      SourceLoc loc;
    };
    std::vector<Link> chain;
    while (auto op = relOp()) {
      SourceLoc loc = take().loc;
      chain.push_back(Link{*op, parseAdditive(), loc});
    }
    if (chain.empty()) return first;
    // `a < b < c` means `a < b && b < c`.
    ExprPtr left = first;
    ExprPtr result;
    for (const auto& link : chain) {
      ExprPtr cmp = makeExpr(link.loc, Binary{link.op, left, link.rhs});
      result = result ? makeExpr(link.loc, Binary{BinaryOp::And, result, cmp}) : cmp;
      left = link.rhs;
    }
    return result;
  }

  ExprPtr parseAdditive() {
    ExprPtr lhs = parseMultiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinaryOp op = at(Tok::Plus) ? BinaryOp::Add : BinaryOp::Sub;
      SourceLoc loc = take().loc;
      lhs = makeExpr(loc, Binary{op, lhs, parseMultiplicative()});
    }
    return lhs;
  }

  ExprPtr parseMultiplicative() {
    ExprPtr lhs = parseUnary();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      BinaryOp op = at(Tok::Star) ? BinaryOp::Mul : at(Tok::Slash) ? BinaryOp::Div : BinaryOp::Mod;
      SourceLoc loc = take().loc;
      lhs = makeExpr(loc, Binary{op, lhs, parseUnary()});
    }
    return lhs;
  }

  ExprPtr parseUnary() {
    if (at(Tok::Not)) {
      SourceLoc loc = take().loc;
      return makeExpr(loc, Unary{UnaryOp::Not, parseUnary()});
    }
    if (at(Tok::Minus)) {
      SourceLoc loc = take().loc;
      if (at(Tok::Number)) {
        // `-5` folds into a single literal; `-5[i]` negates the whole postfix.
        SourceLoc numLoc = cur().loc;
        BigInt v = parseNumber(take());
        ExprPtr operand = parsePostfix(makeExpr(numLoc, IntLit{v}));
        if (operand->is<IntLit>()) return makeExpr(loc, IntLit{-v});
        return makeExpr(loc, Unary{UnaryOp::Neg, operand});
      }
      return makeExpr(loc, Unary{UnaryOp::Neg, parseUnary()});
    }
    return parsePostfix(parsePrimary());
  }

  ExprPtr parsePostfix(ExprPtr e) {
    for (;;) {
      if (at(Tok::LBracket)) {
        SourceLoc loc = take().loc;
        if (accept(Tok::DotDot)) {
          ExprPtr hi = at(Tok::RBracket) ? nullptr : parseExpr();
          expect(Tok::RBracket);
          e = makeExpr(loc, Slice{e, nullptr, hi});
          continue;
        }
        ExprPtr idx = parseExpr();
        if (accept(Tok::DotDot)) {
          ExprPtr hi = at(Tok::RBracket) ? nullptr : parseExpr();
          expect(Tok::RBracket);
          e = makeExpr(loc, Slice{e, idx, hi});
          continue;
        }
        if (at(Tok::Assign)) throw ParseError("sequence update is not supported", cur().loc, "s[i := v]");
        if (at(Tok::Comma)) throw ParseError("multi-dimensional indexing is not supported", cur().loc, "a[i, j]");
        if (at(Tok::Colon)) throw ParseError("sequence slicing by lengths is not supported", cur().loc, "s[a:b]");
        expect(Tok::RBracket);
        e = makeExpr(loc, Index{e, idx});
        continue;
      }
      if (at(Tok::Dot)) {
        SourceLoc loc = take().loc;
        std::string member = expectIdent();
        if (member == "Length") {
          e = makeExpr(loc, Length{e});
          continue;
        }
        throw ParseError("member '." + member + "' is not supported", loc, "." + member);
      }
      return e;
    }
  }

  std::vector<ExprPtr> parseExprList(Tok close) {
    std::vector<ExprPtr> out;
    if (at(close)) return out;
    do {
      out.push_back(parseExpr());
    } while (accept(Tok::Comma));
    return out;
  }

  ExprPtr parsePrimary() {
    const Token& t = cur();
    SourceLoc loc = t.loc;
    switch (t.kind) {
      case Tok::Number: return makeExpr(loc, IntLit{parseNumber(take())});
      case Tok::String: return makeExpr(loc, StrLit{take().text, false});
      case Tok::Char: return makeExpr(loc, StrLit{take().text, true});
      case Tok::LParen: {
        take();
        ExprPtr e = parseExpr();
        if (at(Tok::Comma)) throw ParseError("tuples are not supported", cur().loc, "tuple");
        expect(Tok::RParen);
        return e;
      }
      case Tok::Bar: {
        take();
        ExprPtr e = parseAdditive();
        expect(Tok::Bar);
        return makeExpr(loc, Cardinality{e});
      }
      case Tok::LBracket: {
        take();
        SeqDisplay d{parseExprList(Tok::RBracket)};
        expect(Tok::RBracket);
        return makeExpr(loc, std::move(d));
      }
      case Tok::LBrace: throw ParseError("set displays are not supported", loc, "set display");
      case Tok::Ident: break;
      default: fail("expected an expression");
    }

    const std::string word = t.text;
    if (word == "true" || word == "false") {
      take();
      return makeExpr(loc, BoolLit{word == "true"});
    }
    if (word == "forall" || word == "exists") return parseQuantifier();
    if (word == "if") {
      take();
      ExprPtr c = parseExpr();
      expectWord("then");
      ExprPtr a = parseExpr();
      expectWord("else");
      ExprPtr b = parseExpr();
      return makeExpr(loc, Ite{c, a, b});
    }
    if (word == "var") {
      take();
      std::string name = expectIdent();
      if (accept(Tok::Colon)) parseType();
      expect(Tok::Assign);
      ExprPtr value = parseExpr();
      expect(Tok::Semi);
      ExprPtr body = parseExpr();
      return makeExpr(loc, Let{name, value, body});
    }
    if (word == "null" || word == "this") throw ParseError("'" + word + "' is not supported", loc, word);
    if (word == "match") throw ParseError("match expressions are not supported", loc, "match");
    if ((word == "set" || word == "iset" || word == "map" || word == "imap") && ahead(1).kind == Tok::Ident) {
      throw ParseError(word + " comprehensions are not supported", loc, word + " comprehension");
    }
    if (kUnsupportedCalls.count(word) && (ahead(1).kind == Tok::LParen || ahead(1).kind == Tok::LBrace || ahead(1).kind == Tok::Lt)) {
      throw ParseError("'" + word + "(...)' is not supported", loc, word);
    }
    take();
    if (at(Tok::LParen)) {
      take();
      Call c{word, parseExprList(Tok::RParen)};
      expect(Tok::RParen);
      return makeExpr(loc, std::move(c));
    }
    return makeExpr(loc, VarRef{word});
  }

  ExprPtr parseQuantifier() {
    SourceLoc loc = cur().loc;
    QuantKind kind = take().text == "forall" ? QuantKind::Forall : QuantKind::Exists;
    std::vector<BoundVar> vars;
    do {
      BoundVar v{expectIdent(), ""};
      if (accept(Tok::Colon)) {
        SourceLoc tl = cur().loc;
        std::string ty = expectIdent();
        if (ty != "int" && ty != "nat" && ty != "char") {
          throw ParseError("unsupported quantifier variable type '" + ty + "'", tl, ty);
        }
        v.typeName = ty;
      }
      vars.push_back(std::move(v));
    } while (accept(Tok::Comma));
    skipAttributes();
    ExprPtr range;
    if (accept(Tok::Bar)) range = parseExpr();
    skipAttributes();
    expect(Tok::ColonColon);
    skipAttributes();
    ExprPtr body = parseExpr();
    if (range) {
      BinaryOp op = kind == QuantKind::Forall ? BinaryOp::Implies : BinaryOp::And;
      body = makeExpr(range->loc, Binary{op, range, body});
    }
    return makeExpr(loc, Quantifier{kind, std::move(vars), body});
  }

  /// Parses one expression and records its verbatim source text.
  Clause parseClause() {
    skipAttributes();
    std::size_t first = pos_;
    SourceLoc loc = cur().loc;
    ExprPtr e = parseExpr();
    return Clause{e, textBetween(first, pos_), loc};
  }

  // ---- statements ----

  /// An expression, an array allocation, or `*` (monostate).
  std::variant<std::monostate, ExprPtr, NewArray> parseRhs() {
    if (accept(Tok::Star)) return std::monostate{};
    if (atWord("new")) {
      take();
      SourceLoc tl = cur().loc;
      std::string elemType = expectIdent();
      if (elemType != "int" && elemType != "nat") {
        throw ParseError("unsupported array element type '" + elemType + "'", tl, "array<" + elemType + ">");
      }
      expect(Tok::LBracket);
      ExprPtr size;
      if (!at(Tok::RBracket)) size = parseExpr();
      if (at(Tok::Comma)) throw ParseError("multi-dimensional arrays are not supported", cur().loc, "array2<int>");
      expect(Tok::RBracket);
      NewArray arr;
      if (accept(Tok::LBracket)) {
        arr.elems = parseExprList(Tok::RBracket);
        expect(Tok::RBracket);
      } else if (size) {
        // `new int[0]` is the only initializer-free form we can give a value.
        const auto* lit = size->as<IntLit>();
        if (!lit || lit->value != 0) {
          throw ParseError("array allocation without an initializer list", tl, "new int[n]");
        }
      }
      return arr;
    }
    return parseExpr();
  }

  Stmt parseStatement() {
    SourceLoc loc = cur().loc;
    if (acceptWord("var")) {
      Stmt s{Stmt::Kind::VarDecl, {}, {}, nullptr, loc};
      do {
        s.names.push_back(expectIdent());
        if (accept(Tok::Colon)) parseType();
      } while (accept(Tok::Comma));
      if (accept(Tok::Assign)) s.rhs = parseRhs();
      if (at(Tok::Comma)) throw ParseError("multiple right-hand sides are not supported", cur().loc);
      expect(Tok::Semi);
      return s;
    }
    if (atWord("assert") || atWord("assume") || atWord("expect")) {
      std::string w = take().text;
      Stmt::Kind k = w == "assert" ? Stmt::Kind::Assert : w == "assume" ? Stmt::Kind::Assume : Stmt::Kind::Expect;
      skipAttributes();
      Stmt s{k, {}, {}, parseExpr(), loc};
      if (k == Stmt::Kind::Expect && accept(Tok::Comma)) parseExpr();  // message
      expect(Tok::Semi);
      return s;
    }
    if (at(Tok::Ident) && (ahead(1).kind == Tok::Assign || ahead(1).kind == Tok::Comma)) {
      Stmt s{Stmt::Kind::Assign, {}, {}, nullptr, loc};
      do {
        s.names.push_back(expectIdent());
      } while (accept(Tok::Comma));
      expect(Tok::Assign);
      s.rhs = parseRhs();
      expect(Tok::Semi);
      return s;
    }
    if (at(Tok::Ident)) throw ParseError("unsupported statement '" + cur().text + "'", loc, cur().text);
    fail("expected a statement");
  }

  std::vector<Stmt> parseStatementsUntil(Tok close) {
    std::vector<Stmt> out;
    while (!at(close) && !atEnd()) out.push_back(parseStatement());
    return out;
  }

  // ---- declarations ----

  /// Skips a declaration we do not model: everything up to and including
  /// its body braces (or up to the next top-level keyword when bodiless).
  void skipDeclaration() {
    int parens = 0;
    Tok prev = Tok::End;
    std::string prevWord;
    while (!atEnd()) {
      if (parens == 0 && at(Tok::LBrace) && ahead(1).kind != Tok::Colon && prevWord != "reads" &&
          prevWord != "modifies" && prev != Tok::Comma) {
        skipBalanced(Tok::LBrace, Tok::RBrace);
        return;
      }
      if (at(Tok::LBrace)) {
        skipBalanced(Tok::LBrace, Tok::RBrace);
        prev = Tok::RBrace;
        prevWord.clear();
        continue;
      }
      if (at(Tok::LParen) || at(Tok::LBracket)) ++parens;
      if (at(Tok::RParen) || at(Tok::RBracket)) --parens;
      if (parens == 0 && at(Tok::Ident) && isTopLevelKeyword(cur().text) && prev != Tok::End) return;
      prev = cur().kind;
      prevWord = at(Tok::Ident) ? cur().text : "";
      take();
    }
  }

  static bool isTopLevelKeyword(std::string_view w) {
    static const std::set<std::string, std::less<>> kw = {
        "function", "predicate", "method", "lemma", "ghost", "datatype", "codatatype", "type",
        "const", "class", "module", "import", "include", "newtype", "trait", "iterator", "opaque",
        "static", "twostate", "least", "greatest", "constructor"};
    return kw.count(w) > 0;
  }

  /// `reads a, b` / `modifies {a}`: frame expressions are not modeled.
  void skipFrame() {
    for (;;) {
      if (at(Tok::LBrace) && ahead(1).kind != Tok::Colon) {
        skipBalanced(Tok::LBrace, Tok::RBrace);
      } else if (at(Tok::Ident) && !kSpecKeywords.count(cur().text)) {
        take();
        while (at(Tok::Dot) || at(Tok::LBracket) || at(Tok::LParen)) {
          if (at(Tok::Dot)) {
            take();
            expectIdent();
          } else if (at(Tok::LBracket)) {
            skipBalanced(Tok::LBracket, Tok::RBracket);
          } else {
            skipBalanced(Tok::LParen, Tok::RParen);
          }
        }
      } else {
        fail("expected a frame expression");
      }
      if (!accept(Tok::Comma)) return;
    }
  }

  /// Consumes requires/ensures/reads/modifies/decreases clauses.
  void parseSpecClauses(std::vector<Clause>* pre, std::vector<Clause>* ensures) {
    for (;;) {
      if (atWord("requires")) {
        take();
        Clause c = parseClause();
        if (pre) pre->push_back(std::move(c));
      } else if (atWord("ensures")) {
        take();
        Clause c = parseClause();
        if (ensures) ensures->push_back(std::move(c));
      } else if (atWord("reads") || atWord("modifies")) {
        take();
        skipAttributes();
        skipFrame();
      } else if (atWord("decreases")) {
        take();
        skipAttributes();
        if (!at(Tok::Star)) {
          parseExprList(Tok::LBrace);
        } else {
          take();
        }
      } else {
        return;
      }
    }
  }

  FunctionDef parseFunction(std::size_t declStart) {
    FunctionDef f;
    f.loc = toks_[declStart].loc;
    f.isPredicate = atWord("predicate");
    take();
    acceptWord("method");
    skipAttributes();
    std::size_t nameTok = pos_;
    f.name = expectIdent();
    f.nameOffset = toks_[nameTok].offset - toks_[declStart].offset;
    try {
      if (at(Tok::Lt)) throw ParseError("generic functions are not supported", cur().loc, "type parameters");
      f.params = parseParams();
      if (accept(Tok::Colon)) {
        if (at(Tok::LParen)) {
          take();
          expectIdent();
          expect(Tok::Colon);
          f.returnType = parseType();
          expect(Tok::RParen);
        } else {
          f.returnType = parseType();
        }
      } else if (!f.isPredicate) {
        fail("expected ':' and a result type");
      }
      if (f.isPredicate) f.returnType = ValueType::Bool;
      parseSpecClauses(&f.preconditions, nullptr);
      if (!at(Tok::LBrace)) throw ParseError("function '" + f.name + "' has no body", cur().loc, "bodiless function");
      std::size_t open = pos_;
      std::size_t close = matchingBrace(open);
      Parser body(sliceTokens(open + 1, close), src_);
      f.body = body.parseExpr();
      if (!body.atEnd()) body.fail("unexpected token after function body");
      reset(close);
      take();
      f.text = textBetween(declStart, pos_);
    } catch (const ParseError& e) {
      f.deferredError = e;
      reset(nameTok);
      skipDeclaration();
      f.text = textBetween(declStart, pos_);
    }
    return f;
  }

  MethodDecl parseMethod(bool parseBodies, std::optional<ParseError>& deferred) {
    MethodDecl m;
    m.loc = cur().loc;
    take();  // method
    skipAttributes();
    std::size_t nameTok = pos_;
    m.signature.name = expectIdent();
    try {
      if (at(Tok::Lt)) throw ParseError("generic methods are not supported", cur().loc, "type parameters");
      m.signature.inputs = parseParams();
      if (acceptWord("returns")) m.signature.outputs = parseParams();
      parseSpecClauses(&m.preconditions, &m.ensures);
      if (at(Tok::LBrace)) {
        if (parseBodies) {
          take();
          m.body = parseStatementsUntil(Tok::RBrace);
          expect(Tok::RBrace);
        } else {
          skipBalanced(Tok::LBrace, Tok::RBrace);
        }
      }
    } catch (const ParseError& e) {
      deferred = e;
      reset(nameTok);
      skipDeclaration();
    }
    return m;
  }

  std::size_t matchingBrace(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < toks_.size(); ++i) {
      if (toks_[i].kind == Tok::LBrace) ++depth;
      if (toks_[i].kind == Tok::RBrace && --depth == 0) return i;
      if (toks_[i].kind == Tok::End) break;
    }
    throw ParseError("unbalanced '{'", toks_[open].loc);
  }

  std::vector<Token> sliceTokens(std::size_t b, std::size_t e) const {
    std::vector<Token> out(toks_.begin() + static_cast<std::ptrdiff_t>(b),
                           toks_.begin() + static_cast<std::ptrdiff_t>(e));
    Token end = toks_[e];
    end.kind = Tok::End;
    end.text.clear();
    out.push_back(end);
    return out;
  }

  struct ParsedMethod {
    MethodDecl decl;
    std::optional<ParseError> error;
  };

  std::pair<Program, std::vector<ParsedMethod>> parseTopLevel(bool parseBodies) {
    Program prog;
    std::vector<ParsedMethod> methods;
    while (!atEnd()) {
      std::size_t declStart = pos_;
      skipAttributes();
      while (atWord("ghost") || atWord("opaque") || atWord("static")) take();
      skipAttributes();
      if (atWord("function") || atWord("predicate")) {
        prog.functions.push_back(parseFunction(declStart));
      } else if (atWord("method")) {
        std::optional<ParseError> err;
        MethodDecl m = parseMethod(parseBodies, err);
        methods.push_back(ParsedMethod{m, err});
        if (!err) prog.methods.push_back(std::move(m));
      } else if (at(Tok::Ident) && isTopLevelKeyword(cur().text)) {
        take();
        skipDeclaration();
      } else {
        fail("unexpected token at top level");
      }
    }
    return {std::move(prog), std::move(methods)};
  }

 private:
  std::vector<Token> toks_;
  std::string_view src_;
  std::size_t pos_ = 0;
};

Parser makeParser(std::string_view text) { return Parser(tokenize(text), text); }

void expectConsumed(Parser& p) {
  if (!p.atEnd()) p.fail("unexpected trailing input");
}

Value literalToValue(const ExprPtr& e, ValueType type, const std::string& text) {
  auto bad = [&]() -> Value {
    throw ParseError("'" + text + "' is not a " + std::string(toString(type)) + " literal", e->loc);
  };
  switch (type) {
    case ValueType::Bool:
      if (const auto* b = e->as<BoolLit>()) return Value::boolean(b->value);
      return bad();
    case ValueType::Int:
      if (const auto* i = e->as<IntLit>()) return Value::integer(i->value);
      return bad();
    case ValueType::Str:
      if (const auto* s = e->as<StrLit>(); s && !s->isChar) return Value::string(s->value);
      if (const auto* d = e->as<SeqDisplay>()) {
        std::string out;
        for (const auto& x : d->elems) {
          const auto* c = x->as<StrLit>();
          if (!c || !c->isChar) return bad();
          out += c->value;
        }
        return Value::string(out);
      }
      return bad();
    case ValueType::ArrayInt:
    case ValueType::SeqInt: {
      const auto* d = e->as<SeqDisplay>();
      if (!d) return bad();
      std::vector<BigInt> elems;
      for (const auto& x : d->elems) {
        const auto* i = x->as<IntLit>();
        if (!i) return bad();
        elems.push_back(i->value);
      }
      return Value::collection(type, std::move(elems));
    }
  }
  return bad();
}

}  // namespace

Value literalExprToValue(const ExprPtr& e, ValueType type) {
  return literalToValue(e, type, printExpr(e));
}

ExprPtr parseExpression(std::string_view text) {
  Parser p = makeParser(text);
  ExprPtr e = p.parseExpr();
  expectConsumed(p);
  return e;
}

ValueType parseTypeName(std::string_view text) {
  Parser p = makeParser(text);
  ValueType t = p.parseType();
  expectConsumed(p);
  return t;
}

MethodSignature parseSignature(std::string_view text) {
  Parser p = makeParser(text);
  p.expectWord("method");
  p.skipAttributes();
  MethodSignature sig;
  sig.name = p.expectIdent();
  sig.inputs = p.parseParams();
  if (!p.atWord("returns")) p.fail("expected 'returns' clause");
  p.take();
  sig.outputs = p.parseParams();
  expectConsumed(p);
  if (sig.outputs.empty()) throw ParseError("method has no output parameters", SourceLoc{1, 1});
  std::set<std::string> seen;
  for (const auto* list : {&sig.inputs, &sig.outputs}) {
    for (const auto& prm : *list) {
      if (!seen.insert(prm.name).second) {
        throw ParseError("duplicate parameter name '" + prm.name + "'", SourceLoc{1, 1});
      }
    }
  }
  return sig;
}

Value parseLiteral(std::string_view text, ValueType type) {
  Parser p = makeParser(text);
  ExprPtr e;
  if (p.atWord("new")) {
    auto rhs = p.parseRhs();
    expectConsumed(p);
    if (type != ValueType::ArrayInt && type != ValueType::SeqInt) {
      throw ParseError("array allocation is not a " + std::string(toString(type)) + " literal", SourceLoc{1, 1});
    }
    SeqDisplay d{std::get<NewArray>(rhs).elems};
    e = makeExpr(SourceLoc{1, 1}, std::move(d));
  } else {
    e = p.parseExpr();
    expectConsumed(p);
  }
  return literalToValue(e, type, std::string(text));
}

std::vector<Stmt> parseStatements(std::string_view text) {
  Parser p = makeParser(text);
  auto out = p.parseStatementsUntil(Tok::End);
  expectConsumed(p);
  return out;
}

Program parseProgram(std::string_view source, bool parseBodies) {
  Parser p = makeParser(source);
  return p.parseTopLevel(parseBodies).first;
}

SpecUnit parseSpec(std::string_view source, const MethodSignature& datasetSignature) {
  Parser p = makeParser(source);
  auto [prog, methods] = p.parseTopLevel(false);

  const Parser::ParsedMethod* target = nullptr;
  for (const auto& m : methods) {
    if (iequals(m.decl.signature.name, datasetSignature.name)) {
      target = &m;
      break;
    }
  }
  if (!target && methods.size() == 1) target = &methods.front();
  if (!target) {
    throw ParseError("no method matching '" + datasetSignature.name + "' in spec source", SourceLoc{});
  }
  if (target->error) throw *target->error;

  const MethodDecl& m = target->decl;
  const auto& sig = m.signature;
  if (sig.inputs.size() != datasetSignature.inputs.size() ||
      sig.outputs.size() != datasetSignature.outputs.size()) {
    throw ParseError("method '" + sig.name + "' does not match the arity of '" +
                         datasetSignature.name + "'",
                     m.loc);
  }
  for (std::size_t i = 0; i < sig.inputs.size(); ++i) {
    if (!compatibleTypes(sig.inputs[i].type, datasetSignature.inputs[i].type)) {
      throw ParseError("input '" + sig.inputs[i].name + "' has type " +
                           std::string(toString(sig.inputs[i].type)) + " but the dataset declares " +
                           std::string(toString(datasetSignature.inputs[i].type)),
                       m.loc);
    }
  }
  for (std::size_t i = 0; i < sig.outputs.size(); ++i) {
    if (!compatibleTypes(sig.outputs[i].type, datasetSignature.outputs[i].type)) {
      throw ParseError("output '" + sig.outputs[i].name + "' has type " +
                           std::string(toString(sig.outputs[i].type)) + " but the dataset declares " +
                           std::string(toString(datasetSignature.outputs[i].type)),
                       m.loc);
    }
  }
  if (m.ensures.empty()) throw ParseError("method '" + sig.name + "' has no ensures clause", m.loc);

  SpecUnit unit;
  unit.method = sig;
  unit.preconditions = m.preconditions;
  unit.ensures = m.ensures;

  std::map<std::string, FunctionDef> all;
  std::vector<std::string> sourceOrder;
  for (auto& f : prog.functions) {
    if (all.count(f.name)) throw ParseError("duplicate definition of '" + f.name + "'", f.loc);
    sourceOrder.push_back(f.name);
    all.emplace(f.name, f);
  }
  resolveSpec(unit, all, sourceOrder);
  return unit;
}

}  // namespace specjudge
