#include "folpipe/fol/parse.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <vector>

namespace folpipe::fol {

std::string_view to_string(ParseCause cause) {
  switch (cause) {
    case ParseCause::EmptyInput: return "empty input";
    case ParseCause::InputTooLong: return "input too long";
    case ParseCause::UnbalancedParenthesis: return "unbalanced parenthesis";
    case ParseCause::UnexpectedToken: return "unexpected token";
    case ParseCause::TrailingText: return "trailing text";
    case ParseCause::UnknownOperator: return "unknown operator";
    case ParseCause::SpecialToken: return "special token";
  }
  return "?";
}

namespace {

enum class Tok {
  LParen, RParen, Comma, Ident,
  Not, And, Or, Implies, Iff, Xor, ForAll, Exists,
  End,
  Error,  // lexeme rejected; `cause` says why
};

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  std::size_t begin = 0;
  std::size_t end = 0;
  ParseCause cause = ParseCause::UnexpectedToken;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct OpPattern {
  std::string_view bytes;
  Tok kind;
};

// Multi-byte patterns are tried before single characters; "->" must win
// over a bare "-".
constexpr std::array<OpPattern, 10> kOperators{{
    {"∀", Tok::ForAll},
    {"∃", Tok::Exists},
    {"¬", Tok::Not},
    {"∧", Tok::And},
    {"∨", Tok::Or},
    {"→", Tok::Implies},
    {"↔", Tok::Iff},
    {"⊕", Tok::Xor},
    {"<->", Tok::Iff},
    {"->", Tok::Implies},
}};

// Operator-looking characters outside the connective set; Prover9 comparison
// and arithmetic symbols land here.
constexpr std::string_view kUnknownOperatorChars = "<>=+*/%~!^";

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws();
    const std::size_t b = pos_;
    if (pos_ >= text_.size()) return make(Tok::End, b, b);
    const char c = text_[pos_];
    if (c == '(') return single(Tok::LParen, b);
    if (c == ')') return single(Tok::RParen, b);
    if (c == ',') return single(Tok::Comma, b);
    for (const auto& op : kOperators) {
      if (text_.substr(pos_).substr(0, op.bytes.size()) == op.bytes) {
        pos_ += op.bytes.size();
        return make(op.kind, b, pos_);
      }
    }
    if (c == '-') return single(Tok::Not, b);
    if (c == '&') return single(Tok::And, b);
    if (c == '|') return single(Tok::Or, b);
    if (is_ident_start(c)) {
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      Token t = make(Tok::Ident, b, pos_);
      if (t.text == "all") t.kind = Tok::ForAll;
      else if (t.text == "exists") t.kind = Tok::Exists;
      else if (t.text == "xor") t.kind = Tok::Xor;
      return t;
    }
    if (is_digit(c)) {
      // Numeric literals are not part of the language; they surface as
      // special tokens ("42.3").
      while (pos_ < text_.size() && (is_digit(text_[pos_]) || text_[pos_] == '.')) ++pos_;
      return error(ParseCause::SpecialToken, b, pos_);
    }
    if (kUnknownOperatorChars.find(c) != std::string_view::npos) {
      ++pos_;
      return error(ParseCause::UnknownOperator, b, pos_);
    }
    // Anything else (stray punctuation, unrecognized non-ASCII) is a special
    // token; consume a whole UTF-8 sequence so the span is sane.
    std::size_t len = 1;
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0xF0) len = 4;
    else if (u >= 0xE0) len = 3;
    else if (u >= 0xC0) len = 2;
    pos_ = std::min(text_.size(), pos_ + len);
    return error(ParseCause::SpecialToken, b, pos_);
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') ++pos_;
      else break;
    }
  }

  Token make(Tok kind, std::size_t b, std::size_t e) {
    return Token{kind, text_.substr(b, e - b), b, e, ParseCause::UnexpectedToken};
  }
  Token single(Tok kind, std::size_t b) {
    ++pos_;
    return make(kind, b, pos_);
  }
  Token error(ParseCause cause, std::size_t b, std::size_t e) {
    Token t = make(Tok::Error, b, e);
    t.cause = cause;
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Nesting bound keeping recursion well inside the stack; each level costs a
// full precedence chain of frames.
constexpr int kMaxNestingDepth = 2000;

// Recursive-descent parser. Precedence, tightest first:
//   not > and > or > xor > implies > iff
// and/or/xor/iff chains associate left, implies associates right. A
// quantifier scopes over the smallest formula that follows it.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text), lex_(text) { advance(); }

  ParseResult run() {
    if (tok_.kind == Tok::End) {
      return failed(ParseCause::EmptyInput, {0, text_.size()}, "empty input");
    }
    FormulaPtr f = parse_iff();
    if (!f) return {nullptr, failure_};
    if (tok_.kind == Tok::End) return {std::move(f), std::nullopt};
    if (tok_.kind == Tok::Error) {
      return failed(tok_.cause, tok_span(), lexeme_detail());
    }
    if (tok_.kind == Tok::RParen) {
      return failed(ParseCause::UnbalancedParenthesis, tok_span(),
                    "unmatched closing parenthesis");
    }
    return failed(ParseCause::TrailingText, {tok_.begin, text_.size()},
                  "trailing text after a complete formula");
  }

 private:
  void advance() { tok_ = lex_.next(); }
  SourceSpan tok_span() const { return {tok_.begin, tok_.end}; }
  std::string lexeme_detail() const {
    return std::string(to_string(tok_.cause)) + " '" + std::string(tok_.text) + "'";
  }

  ParseResult failed(ParseCause cause, SourceSpan span, std::string detail) {
    if (!failure_) failure_ = ParseFailure{cause, span, std::move(detail)};
    return {nullptr, failure_};
  }
  FormulaPtr fail(ParseCause cause, SourceSpan span, std::string detail) {
    if (!failure_) failure_ = ParseFailure{cause, span, std::move(detail)};
    return nullptr;
  }
  // Failure at a position where an operand or closer was required; Error
  // tokens surface their lexer cause.
  FormulaPtr fail_at_token(std::string_view expected) {
    if (tok_.kind == Tok::Error) return fail(tok_.cause, tok_span(), lexeme_detail());
    if (tok_.kind == Tok::End) {
      return fail(ParseCause::UnexpectedToken, {text_.size(), text_.size()},
                  "unexpected end of input, expected " + std::string(expected));
    }
    return fail(ParseCause::UnexpectedToken, tok_span(),
                "unexpected '" + std::string(tok_.text) + "', expected " + std::string(expected));
  }

  FormulaPtr parse_iff() {
    FormulaPtr l = parse_implies();
    if (!l) return nullptr;
    while (tok_.kind == Tok::Iff) {
      advance();
      FormulaPtr r = parse_implies();
      if (!r) return nullptr;
      SourceSpan s{l->span.begin, r->span.end};
      l = Formula::binary(Connective::Iff, std::move(l), std::move(r), s);
    }
    return l;
  }

  struct DepthGuard {
    Parser& parser;
    explicit DepthGuard(Parser& p) : parser(p) { ++parser.depth_; }
    ~DepthGuard() { --parser.depth_; }
    bool over_limit() const { return parser.depth_ > kMaxNestingDepth; }
  };

  FormulaPtr parse_implies() {
    const DepthGuard guard(*this);
    if (guard.over_limit()) {
      return fail(ParseCause::InputTooLong, tok_span(),
                  "formula nesting exceeds the depth limit");
    }
    FormulaPtr l = parse_xor();
    if (!l) return nullptr;
    if (tok_.kind == Tok::Implies) {
      advance();
      FormulaPtr r = parse_implies();
      if (!r) return nullptr;
      SourceSpan s{l->span.begin, r->span.end};
      return Formula::binary(Connective::Implies, std::move(l), std::move(r), s);
    }
    return l;
  }

  FormulaPtr parse_left_chain(Tok op, Connective kind, FormulaPtr (Parser::*sub)()) {
    FormulaPtr l = (this->*sub)();
    if (!l) return nullptr;
    while (tok_.kind == op) {
      advance();
      FormulaPtr r = (this->*sub)();
      if (!r) return nullptr;
      SourceSpan s{l->span.begin, r->span.end};
      l = Formula::binary(kind, std::move(l), std::move(r), s);
    }
    return l;
  }

  FormulaPtr parse_xor() { return parse_left_chain(Tok::Xor, Connective::Xor, &Parser::parse_or); }
  FormulaPtr parse_or() { return parse_left_chain(Tok::Or, Connective::Or, &Parser::parse_and); }
  FormulaPtr parse_and() { return parse_left_chain(Tok::And, Connective::And, &Parser::parse_unary); }

  FormulaPtr parse_unary() {
    const DepthGuard guard(*this);
    if (guard.over_limit()) {
      return fail(ParseCause::InputTooLong, tok_span(),
                  "formula nesting exceeds the depth limit");
    }
    if (tok_.kind == Tok::Not) {
      const std::size_t b = tok_.begin;
      advance();
      FormulaPtr body = parse_unary();
      if (!body) return nullptr;
      SourceSpan s{b, body->span.end};
      return Formula::negation(std::move(body), s);
    }
    if (tok_.kind == Tok::ForAll || tok_.kind == Tok::Exists) {
      const Connective kind =
          tok_.kind == Tok::ForAll ? Connective::ForAll : Connective::Exists;
      const std::size_t b = tok_.begin;
      advance();
      if (tok_.kind != Tok::Ident) return fail_at_token("a quantified variable");
      if (tok_.text[0] < 'a' || tok_.text[0] > 'z') {
        return fail(ParseCause::UnexpectedToken, tok_span(),
                    "quantified variable must start with a lowercase letter");
      }
      std::string var(tok_.text);
      advance();
      scope_.push_back(var);
      FormulaPtr body = parse_unary();
      scope_.pop_back();
      if (!body) return nullptr;
      SourceSpan s{b, body->span.end};
      return Formula::quantifier(kind, std::move(var), std::move(body), s);
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    if (tok_.kind == Tok::LParen) {
      const Token open = tok_;
      advance();
      FormulaPtr inner = parse_iff();
      if (!inner) return nullptr;
      if (tok_.kind != Tok::RParen) {
        if (tok_.kind == Tok::End) {
          return fail(ParseCause::UnbalancedParenthesis, {open.begin, text_.size()},
                      "missing closing parenthesis");
        }
        return fail_at_token("')'");
      }
      advance();
      return inner;
    }
    if (tok_.kind == Tok::Ident) return parse_atom();
    return fail_at_token("a formula");
  }

  FormulaPtr parse_atom() {
    std::string name(tok_.text);
    const std::size_t b = tok_.begin;
    std::size_t e = tok_.end;
    advance();
    if (tok_.kind != Tok::LParen) {
      // Bare identifier: a 0-ary atom ("A" inside "A xor B").
      return Formula::atom(std::move(name), {}, {b, e});
    }
    const Token open = tok_;
    advance();
    std::vector<Term> args;
    if (tok_.kind == Tok::RParen) {
      e = tok_.end;
      advance();
      return Formula::atom(std::move(name), {}, {b, e});
    }
    for (;;) {
      if (tok_.kind != Tok::Ident) {
        if (tok_.kind == Tok::End) {
          return fail(ParseCause::UnbalancedParenthesis, {open.begin, text_.size()},
                      "missing closing parenthesis in argument list");
        }
        return fail_at_token("an argument");
      }
      args.push_back(resolve_term(tok_.text));
      advance();
      if (tok_.kind == Tok::Comma) {
        advance();
        continue;
      }
      if (tok_.kind == Tok::RParen) {
        e = tok_.end;
        advance();
        break;
      }
      if (tok_.kind == Tok::End) {
        return fail(ParseCause::UnbalancedParenthesis, {open.begin, text_.size()},
                    "missing closing parenthesis in argument list");
      }
      return fail_at_token("',' or ')'");
    }
    return Formula::atom(std::move(name), std::move(args), {b, e});
  }

  Term resolve_term(std::string_view name) const {
    const bool bound =
        std::find(scope_.rbegin(), scope_.rend(), name) != scope_.rend();
    if (bound || is_variable_shaped(name)) return Term::variable(std::string(name));
    return Term::constant(std::string(name));
  }

  std::string_view text_;
  Lexer lex_;
  Token tok_;
  std::vector<std::string> scope_;
  std::optional<ParseFailure> failure_;
  int depth_ = 0;
};

}  // namespace

ParseResult parse_formula(std::string_view text, const ParseOptions& options) {
  if (text.size() > options.max_input_bytes) {
    return {nullptr,
            ParseFailure{ParseCause::InputTooLong,
                         {options.max_input_bytes, text.size()},
                         "input exceeds the configured length limit"}};
  }
  return Parser(text).run();
}

}  // namespace folpipe::fol
