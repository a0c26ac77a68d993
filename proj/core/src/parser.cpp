#include <charconv>
#include <cmath>
#include <memory>
#include <set>

#include "bayesl/syntax.hpp"
#include "identifiers.hpp"

namespace bayesl {

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Bar,
  OrOr,
  AndAnd,
  Bang,
  Comma,
  Arrow,
  Lt,
  Le,
  Eq,
  Ge,
  Gt,
  Ne,
  End,
};

std::string spelling(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Bar: return "'|'";
    case Tok::OrOr: return "'||'";
    case Tok::AndAnd: return "'&&'";
    case Tok::Bang: return "'!'";
    case Tok::Comma: return "','";
    case Tok::Arrow: return "'->'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Eq: return "'='";
    case Tok::Ge: return "'>='";
    case Tok::Gt: return "'>'";
    case Tok::Ne: return "'!='";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok type = Tok::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      out.push_back(t);
      if (t.type == Tok::End) return out;
    }
  }

 private:
  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int column_ = 1;

  char peek(std::size_t k = 0) const { return i_ + k < text_.size() ? text_[i_ + k] : '\0'; }

  void advance() {
    unsigned char c = static_cast<unsigned char>(text_[i_++]);
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++column_;
    }
  }

  void skip_space() {
    while (i_ < text_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n')
        advance();
      else
        break;
    }
  }

  Token make(Tok type, std::size_t begin, int line, int column) const {
    return Token{type, std::string(text_.substr(begin, i_ - begin)),
                 SourceSpan{begin, i_, line, column}};
  }

  Token next() {
    const std::size_t begin = i_;
    const int line = line_;
    const int column = column_;
    if (i_ >= text_.size()) return Token{Tok::End, "", SourceSpan{begin, begin, line, column}};

    auto single = [&](Tok t) {
      advance();
      return make(t, begin, line, column);
    };
    auto pair = [&](Tok t) {
      advance();
      advance();
      return make(t, begin, line, column);
    };

    const char c = peek();
    if (detail::is_identifier_start(c)) {
      while (detail::is_identifier_char(peek())) advance();
      return make(Tok::Ident, begin, line, column);
    }
    if ((c >= '0' && c <= '9') || (c == '.' && peek(1) >= '0' && peek(1) <= '9')) {
      while (peek() >= '0' && peek() <= '9') advance();
      if (peek() == '.') {
        advance();
        while (peek() >= '0' && peek() <= '9') advance();
      }
      if ((peek() == 'e' || peek() == 'E') &&
          ((peek(1) >= '0' && peek(1) <= '9') ||
           ((peek(1) == '-' || peek(1) == '+') && peek(2) >= '0' && peek(2) <= '9'))) {
        advance();
        if (peek() == '-' || peek() == '+') advance();
        while (peek() >= '0' && peek() <= '9') advance();
      }
      return make(Tok::Number, begin, line, column);
    }
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ',': return single(Tok::Comma);
      case '|': return peek(1) == '|' ? pair(Tok::OrOr) : single(Tok::Bar);
      case '&':
        if (peek(1) == '&') return pair(Tok::AndAnd);
        break;
      case '!': return peek(1) == '=' ? pair(Tok::Ne) : single(Tok::Bang);
      case '-':
        if (peek(1) == '>') return pair(Tok::Arrow);
        break;
      case '<': return peek(1) == '=' ? pair(Tok::Le) : single(Tok::Lt);
      case '>': return peek(1) == '=' ? pair(Tok::Ge) : single(Tok::Gt);
      case '=': return single(Tok::Eq);
      default: break;
    }
    advance();
    throw SyntaxError("unexpected character '" + std::string(text_.substr(begin, i_ - begin)) + "'",
                      SourceSpan{begin, i_, line, column});
  }
};

SourceSpan cover(const SourceSpan& from, const SourceSpan& to) {
  return SourceSpan{from.begin, to.end, from.line, from.column};
}

bool is_cmp(Tok t) {
  return t == Tok::Lt || t == Tok::Le || t == Tok::Eq || t == Tok::Ge || t == Tok::Gt;
}

CmpOp to_cmp(Tok t) {
  switch (t) {
    case Tok::Lt: return CmpOp::Lt;
    case Tok::Le: return CmpOp::Le;
    case Tok::Ge: return CmpOp::Ge;
    case Tok::Gt: return CmpOp::Gt;
    default: return CmpOp::Eq;
  }
}

const std::set<std::string> kQueryKeywords = {"P", "MAP", "MPE", "INFL", "IDP"};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  QueryPtr query_document() {
    QueryPtr q = or_query();
    expect_end({"'||'", "'&&'"});
    return q;
  }

  AtomPtr atom_document() {
    AtomPtr a = atom_or();
    expect_end({"'||'", "'&&'"});
    return a;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  // Tokens that would have been accepted at the current position; reset
  // whenever a token is consumed.
  std::set<std::string> expected_;

  const Token& cur() const { return tokens_[pos_]; }
  const Token& prev() const { return tokens_[pos_ - 1]; }
  const Token& look(std::size_t k) const {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }

  bool check(Tok t) {
    if (cur().type == t) return true;
    expected_.insert(spelling(t));
    return false;
  }

  bool accept(Tok t) {
    if (!check(t)) return false;
    consume();
    return true;
  }

  const Token& consume() {
    expected_.clear();
    return tokens_[pos_++];
  }

  [[noreturn]] void fail(std::string message = {}) {
    const Token& t = cur();
    std::vector<std::string> expected(expected_.begin(), expected_.end());
    if (message.empty()) {
      message = t.type == Tok::End ? "unexpected end of input" : "unexpected " + spelling(t.type);
      if (t.type != Tok::End && t.type != Tok::Ident && t.type != Tok::Number)
        message = "unexpected token " + spelling(t.type);
      if (t.type == Tok::Ident || t.type == Tok::Number) message += " '" + t.text + "'";
    }
    if (!expected.empty()) {
      message += "; expected ";
      for (std::size_t i = 0; i < expected.size(); ++i)
        message += (i ? (i + 1 == expected.size() ? " or " : ", ") : "") + expected[i];
    }
    throw SyntaxError(message, t.span, std::move(expected));
  }

  const Token& expect(Tok t) {
    if (!check(t)) fail();
    return consume();
  }

  void expect_end(std::initializer_list<const char*> also) {
    if (cur().type == Tok::End) return;
    for (const char* s : also) expected_.insert(s);
    expected_.insert(spelling(Tok::End));
    fail();
  }

  double number() {
    const Token& t = expect(Tok::Number);
    double value = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
      throw SyntaxError("invalid number '" + t.text + "'", t.span);
    return value;
  }

  // ---- events --------------------------------------------------------------

  AtomPtr atom_or() {
    AtomPtr lhs = atom_and();
    while (accept(Tok::OrOr)) {
      AtomPtr rhs = atom_and();
      lhs = Atom::disj(lhs, rhs, cover(lhs->span, rhs->span));
    }
    return lhs;
  }

  AtomPtr atom_and() {
    AtomPtr lhs = atom_unary();
    while (accept(Tok::AndAnd)) {
      AtomPtr rhs = atom_unary();
      lhs = Atom::conj(lhs, rhs, cover(lhs->span, rhs->span));
    }
    return lhs;
  }

  AtomPtr atom_unary() {
    if (check(Tok::Bang)) {
      const SourceSpan start = consume().span;
      AtomPtr inner = atom_unary();
      return Atom::negate(inner, cover(start, inner->span));
    }
    if (check(Tok::LParen)) {
      const SourceSpan start = consume().span;
      AtomPtr inner = atom_or();
      expect(Tok::RParen);
      auto copy = std::make_shared<Atom>(*inner);
      copy->span = cover(start, prev().span);
      return copy;
    }
    if (!check(Tok::Ident)) fail();
    const Token& var = consume();
    if (check(Tok::Ne)) {
      consume();
      const Token& val = expect(Tok::Ident);
      const SourceSpan span = cover(var.span, val.span);
      return Atom::negate(Atom::compare(var.text, CmpOp::Eq, val.text, span), span);
    }
    for (Tok t : {Tok::Lt, Tok::Le, Tok::Eq, Tok::Ge, Tok::Gt}) check(t);
    if (!is_cmp(cur().type)) fail();
    const CmpOp op = to_cmp(consume().type);
    const Token& val = expect(Tok::Ident);
    return Atom::compare(var.text, op, val.text, cover(var.span, val.span));
  }

  // ---- queries -------------------------------------------------------------

  static std::shared_ptr<Query> node(Query::Op op, SourceSpan span) {
    auto q = std::make_shared<Query>();
    q->op = op;
    q->span = span;
    return q;
  }

  QueryPtr or_query() {
    QueryPtr lhs = and_query();
    while (accept(Tok::OrOr)) {
      QueryPtr rhs = and_query();
      auto n = node(Query::Op::Or, cover(lhs->span, rhs->span));
      n->child = lhs;
      n->rhs = rhs;
      lhs = n;
    }
    return lhs;
  }

  QueryPtr and_query() {
    QueryPtr lhs = unary_query();
    while (accept(Tok::AndAnd)) {
      QueryPtr rhs = unary_query();
      auto n = node(Query::Op::And, cover(lhs->span, rhs->span));
      n->child = lhs;
      n->rhs = rhs;
      lhs = n;
    }
    return lhs;
  }

  QueryPtr unary_query() {
    if (check(Tok::Bang)) {
      const SourceSpan start = consume().span;
      QueryPtr inner = unary_query();
      auto n = node(Query::Op::Not, cover(start, inner->span));
      n->child = inner;
      return n;
    }
    return threshold_query();
  }

  // postfix (cmp number update*)?
  // Updates written after the threshold literal apply to the whole
  // comparison, so `P(a) >= 0.7 [u]` is Update(Threshold(P(a))).
  QueryPtr threshold_query() {
    QueryPtr lhs = postfix_query();
    for (Tok t : {Tok::Lt, Tok::Le, Tok::Eq, Tok::Ge, Tok::Gt}) check(t);
    if (!is_cmp(cur().type)) return lhs;
    const CmpOp op = to_cmp(consume().type);
    const double p = number();
    auto n = node(Query::Op::Threshold, cover(lhs->span, prev().span));
    n->child = lhs;
    n->cmp = op;
    n->threshold = p;
    return updates(n);
  }

  QueryPtr postfix_query() { return updates(primary_query()); }

  QueryPtr updates(QueryPtr q) {
    while (check(Tok::LBracket)) {
      const SourceSpan start = consume().span;
      CptUpdateSpec u;
      const Token& var = expect(Tok::Ident);
      u.variable = var.text;
      expect(Tok::Eq);
      u.value = expect(Tok::Ident).text;
      if (accept(Tok::Bar)) {
        do {
          const Token& gv = expect(Tok::Ident);
          expect(Tok::Eq);
          const Token& gval = expect(Tok::Ident);
          u.given.emplace_back(gv.text, gval.text);
        } while (accept(Tok::Comma));
      }
      expect(Tok::Arrow);
      u.probability = number();
      expect(Tok::RBracket);
      u.span = cover(start, prev().span);
      auto n = node(Query::Op::Update, cover(q->span, prev().span));
      n->child = q;
      n->update = std::move(u);
      q = n;
    }
    return q;
  }

  QueryPtr primary_query() {
    if (check(Tok::LParen)) {
      const SourceSpan start = consume().span;
      QueryPtr inner = or_query();
      expect(Tok::RParen);
      auto copy = std::make_shared<Query>(*inner);
      copy->span = cover(start, prev().span);
      return copy;
    }
    if (cur().type == Tok::Ident && kQueryKeywords.count(cur().text) &&
        look(1).type == Tok::LParen) {
      const Token kw = consume();
      consume();  // (
      if (kw.text == "P") return prob_query(kw);
      if (kw.text == "MAP") return map_query(kw);
      if (kw.text == "MPE") return mpe_query(kw);
      return trail_query(kw);
    }
    for (const char* k : {"P", "MAP", "MPE", "INFL", "IDP"}) expected_.insert(k);
    expected_.insert(spelling(Tok::LParen));
    expected_.insert(spelling(Tok::Bang));
    fail();
  }

  QueryPtr prob_query(const Token& kw) {
    AtomPtr event = atom_or();
    AtomPtr evidence;
    if (accept(Tok::Bar)) evidence = atom_or();
    expect(Tok::RParen);
    auto n = node(evidence ? Query::Op::CondProb : Query::Op::Prob, cover(kw.span, prev().span));
    n->event = event;
    n->evidence = evidence;
    return n;
  }

  QueryPtr map_query(const Token& kw) {
    std::vector<std::string> targets;
    do {
      targets.push_back(expect(Tok::Ident).text);
    } while (accept(Tok::Comma));
    AtomPtr evidence;
    if (accept(Tok::Bar)) evidence = atom_or();
    expect(Tok::RParen);
    auto n = node(Query::Op::Map, cover(kw.span, prev().span));
    n->targets = std::move(targets);
    n->evidence = evidence;
    return n;
  }

  QueryPtr mpe_query(const Token& kw) {
    AtomPtr evidence = atom_or();
    expect(Tok::RParen);
    auto n = node(Query::Op::Mpe, cover(kw.span, prev().span));
    n->evidence = evidence;
    return n;
  }

  QueryPtr trail_query(const Token& kw) {
    const std::string source = expect(Tok::Ident).text;
    expect(Tok::Comma);
    const std::string target = expect(Tok::Ident).text;
    std::vector<std::string> observed;
    if (accept(Tok::Bar)) {
      do {
        observed.push_back(expect(Tok::Ident).text);
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen);
    auto n = node(kw.text == "INFL" ? Query::Op::Infl : Query::Op::Idp, cover(kw.span, prev().span));
    n->source = source;
    n->target = target;
    n->observed = std::move(observed);
    return n;
  }
};

}  // namespace

QueryPtr parse_query(std::string_view text) { return Parser(text).query_document(); }

AtomPtr parse_atom(std::string_view text) { return Parser(text).atom_document(); }

}  // namespace bayesl
