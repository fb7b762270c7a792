#pragma once

// Recursive-descent parser for the ASCII dGL grammar.
//
//   terms:     + - * / ^ with the usual precedence, unary minus, decimal
//              literals; ^ takes a literal nonnegative integer exponent
//   compare:   = != < <= > >=
//   formulas:  ! & | -> <-> (right-assoc), \forall x phi, \exists x phi,
//              true, false
//   games:     x := e, x := *, ?phi, {x' = e, y' = f & Q}, a; b, a ++ b,
//              {a}*, {a}^@
//   modality:  <a> phi, [a] phi; a trailing ';' before '>' or ']' is
//              accepted since LLMs habitually emit it
//   comments:  '#' to end of line
//
// The input is arbitrary bytes. Parsing never throws out of parse_formula:
// failures are returned as Diagnostics, with Unicode detection running on
// the raw input first so that UnicodeChar dominates downstream errors.

#include "dgl/ast.hpp"
#include "dgl/diagnostics.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dgl {

struct ParseResult {
  FormulaPtr formula;  // set iff diagnostics empty
  Diagnostics diagnostics;
  bool ok() const { return formula != nullptr; }
};

namespace parse_detail {

inline std::pair<size_t, size_t> line_col(std::string_view src, size_t offset) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < offset && i < src.size(); ++i) {
    if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
  }
  return {line, col};
}

inline Diagnostic make_diag(DiagnosticCode code, std::string message,
                            std::string_view src, size_t offset, size_t end) {
  Diagnostic d;
  d.code = code;
  d.message = std::move(message);
  d.offset = offset;
  auto [line, col] = line_col(src, offset);
  d.line = line;
  d.column = col;
  if (offset < src.size() && end > offset)
    d.excerpt = std::string(src.substr(offset, std::min(end, src.size()) - offset));
  return d;
}

// Decodes one UTF-8 scalar for the feedback message; falls back to a hex
// escape on malformed bytes.
inline std::pair<std::string, size_t> utf8_char_at(std::string_view src, size_t i) {
  unsigned char b = src[i];
  size_t len = b >= 0xF0 ? 4 : b >= 0xE0 ? 3 : b >= 0xC0 ? 2 : 1;
  if (len == 1 || i + len > src.size()) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02X", b);
    return {buf, 1};
  }
  for (size_t k = 1; k < len; ++k)
    if ((static_cast<unsigned char>(src[i + k]) & 0xC0) != 0x80) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\x%02X", b);
      return {buf, 1};
    }
  return {std::string(src.substr(i, len)), len};
}

enum class Tok {
  Ident, Number, True, False, Forall, Exists,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Lt, Gt, Le, Ge, Eq, Ne,
  Not, And, Or, Imply, Equiv,
  Plus, Minus, Star, Slash, Caret,
  Assign, Semicolon, Comma, Question, Prime, Choice, DualMark,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  size_t offset;
};

// Internal error carried to the diagnose() stage.
struct ParseError {
  DiagnosticCode code;
  std::string message;
  size_t offset;
  size_t end;
};

[[noreturn]] inline void fail(DiagnosticCode code, std::string msg, size_t offset,
                              size_t end = 0) {
  throw ParseError{code, std::move(msg), offset, end ? end : offset + 1};
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  const size_t n = src.size();
  auto two = [&](size_t k) { return i + 1 < n && src[i + 1] == k; };
  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { ++i; continue; }
    if (c == '#') {  // comment to end of line
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i + 1;
      while (j < n && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word(src.substr(i, j - i));
      Tok kind = word == "true" ? Tok::True : word == "false" ? Tok::False : Tok::Ident;
      out.push_back({kind, std::move(word), start});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < n && src[j] == '.' && j + 1 < n && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), start});
      i = j;
      continue;
    }
    if (c == '\\') {
      size_t j = i + 1;
      while (j < n && std::isalpha(static_cast<unsigned char>(src[j]))) ++j;
      std::string word(src.substr(i, j - i));
      if (word == "\\forall") out.push_back({Tok::Forall, word, start});
      else if (word == "\\exists") out.push_back({Tok::Exists, word, start});
      else fail(DiagnosticCode::UnknownToken,
                "Unexpected token '" + word + "'; only \\forall and \\exists start with a backslash.",
                start, j);
      i = j;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
      case '{': out.push_back({Tok::LBrace, "{", start}); ++i; break;
      case '}': out.push_back({Tok::RBrace, "}", start}); ++i; break;
      case '[': out.push_back({Tok::LBracket, "[", start}); ++i; break;
      case ']': out.push_back({Tok::RBracket, "]", start}); ++i; break;
      case ';': out.push_back({Tok::Semicolon, ";", start}); ++i; break;
      case ',': out.push_back({Tok::Comma, ",", start}); ++i; break;
      case '?': out.push_back({Tok::Question, "?", start}); ++i; break;
      case '\'': out.push_back({Tok::Prime, "'", start}); ++i; break;
      case '*': out.push_back({Tok::Star, "*", start}); ++i; break;
      case '/': out.push_back({Tok::Slash, "/", start}); ++i; break;
      case '=': out.push_back({Tok::Eq, "=", start}); ++i; break;
      case '&': out.push_back({Tok::And, "&", start}); ++i; break;
      case '|': out.push_back({Tok::Or, "|", start}); ++i; break;
      case '+':
        if (two('+')) { out.push_back({Tok::Choice, "++", start}); i += 2; }
        else { out.push_back({Tok::Plus, "+", start}); ++i; }
        break;
      case '-':
        if (two('>')) { out.push_back({Tok::Imply, "->", start}); i += 2; }
        else { out.push_back({Tok::Minus, "-", start}); ++i; }
        break;
      case '<':
        if (i + 2 < n && src[i + 1] == '-' && src[i + 2] == '>') {
          out.push_back({Tok::Equiv, "<->", start});
          i += 3;
        } else if (two('=')) { out.push_back({Tok::Le, "<=", start}); i += 2; }
        else { out.push_back({Tok::Lt, "<", start}); ++i; }
        break;
      case '>':
        if (two('=')) { out.push_back({Tok::Ge, ">=", start}); i += 2; }
        else { out.push_back({Tok::Gt, ">", start}); ++i; }
        break;
      case '!':
        if (two('=')) { out.push_back({Tok::Ne, "!=", start}); i += 2; }
        else { out.push_back({Tok::Not, "!", start}); ++i; }
        break;
      case ':':
        if (two('=')) { out.push_back({Tok::Assign, ":=", start}); i += 2; }
        else fail(DiagnosticCode::UnknownToken, "Unexpected token ':'; assignment is written ':='.", start);
        break;
      case '^':
        if (two('@')) { out.push_back({Tok::DualMark, "^@", start}); i += 2; }
        else { out.push_back({Tok::Caret, "^", start}); ++i; }
        break;
      case '@':
        fail(DiagnosticCode::UnknownToken, "Unexpected token '@'; the dual operator is written '^@' after a braced game.", start);
      default: {
        char buf[8];
        std::snprintf(buf, sizeof buf, "0x%02X", static_cast<unsigned char>(c));
        fail(DiagnosticCode::UnknownToken,
             std::string("Unexpected character '") + (std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : std::string(buf)) + "' in the input.",
             start);
      }
    }
  }
  out.push_back({Tok::End, "", n});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), toks_(lex(src)) {}

  FormulaPtr parse_input() {
    FormulaPtr f = formula();
    if (peek().kind != Tok::End) {
      if (!open_delims_.empty())
        fail_unbalanced(open_delims_.back());
      fail(DiagnosticCode::TrailingInput,
           "Unexpected trailing input starting with '" + peek().text + "' after a complete formula.",
           peek().offset, peek().offset + peek().text.size());
    }
    return f;
  }

 private:
  std::string_view src_;
  std::vector<Token> toks_;
  size_t pos_ = 0;
  struct OpenDelim { char open; char close; size_t offset; };
  std::vector<OpenDelim> open_delims_;

  const Token& peek(size_t k = 0) const {
    size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind == k) { ++pos_; return true; }
    return false;
  }

  [[noreturn]] void fail_unbalanced(const OpenDelim& d) {
    auto [line, col] = line_col(src_, d.offset);
    fail(DiagnosticCode::UnbalancedDelimiter,
         std::string("The delimiter '") + d.open + "' opened at line " + std::to_string(line) +
             ", column " + std::to_string(col) + " is never closed; expected '" + d.close + "'.",
         d.offset);
  }

  void push_delim(char open, char close, size_t offset) {
    open_delims_.push_back({open, close, offset});
  }

  void expect_close(Tok k, char shown) {
    if (!accept(k)) fail_unbalanced(open_delims_.back());
    (void)shown;
    open_delims_.pop_back();
  }

  /* ---- terms ---- */

  TermPtr term() { return additive(); }

  TermPtr additive() {
    TermPtr t = multiplicative();
    for (;;) {
      if (accept(Tok::Plus)) t = add(t, multiplicative());
      else if (accept(Tok::Minus)) t = sub(t, multiplicative());
      else return t;
    }
  }

  TermPtr multiplicative() {
    TermPtr t = unary_term();
    for (;;) {
      if (accept(Tok::Star)) t = mul(t, unary_term());
      else if (accept(Tok::Slash)) t = div(t, unary_term());
      else return t;
    }
  }

  TermPtr unary_term() {
    if (accept(Tok::Minus)) return neg(unary_term());
    return power();
  }

  TermPtr power() {
    TermPtr base = atom_term();
    while (peek().kind == Tok::Caret) {
      const Token& caret = peek();
      advance();
      const Token& e = peek();
      if (e.kind != Tok::Number || e.text.find('.') != std::string::npos)
        fail(DiagnosticCode::UnknownToken,
             "The exponent after '^' must be a literal nonnegative integer, not '" + e.text + "'.",
             e.kind == Tok::End ? caret.offset : e.offset,
             e.kind == Tok::End ? caret.offset + 1 : e.offset + e.text.size());
      advance();
      unsigned long exp = 0;
      try {
        exp = std::stoul(e.text);
      } catch (...) {
        fail(DiagnosticCode::UnknownToken, "The exponent '" + e.text + "' is too large.", e.offset,
             e.offset + e.text.size());
      }
      if (exp > 1000000)
        fail(DiagnosticCode::UnknownToken, "The exponent '" + e.text + "' is too large.", e.offset,
             e.offset + e.text.size());
      base = Term::mk_pow(base, static_cast<unsigned>(exp));
    }
    return base;
  }

  TermPtr atom_term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        advance();
        return Term::mk_var(t.text);
      case Tok::Number: {
        advance();
        auto v = parse_decimal(t.text);
        if (!v)
          fail(DiagnosticCode::UnknownToken, "Malformed number literal '" + t.text + "'.", t.offset,
               t.offset + t.text.size());
        return Term::mk_num(*v, t.text);
      }
      case Tok::LParen: {
        advance();
        push_delim('(', ')', t.offset);
        TermPtr inner = term();
        expect_close(Tok::RParen, ')');
        return inner;
      }
      default:
        fail(DiagnosticCode::UnknownToken,
             "Unexpected token '" + (t.kind == Tok::End ? std::string("end of input") : t.text) +
                 "' while parsing a term.",
             t.offset, t.offset + std::max<size_t>(1, t.text.size()));
    }
  }

  /* ---- formulas ---- */

  FormulaPtr formula() { return equiv_level(); }

  FormulaPtr equiv_level() {
    FormulaPtr lhs = imply_level();
    if (accept(Tok::Equiv)) return f_equiv(lhs, equiv_level());
    return lhs;
  }

  FormulaPtr imply_level() {
    FormulaPtr lhs = or_level();
    if (accept(Tok::Imply)) return f_imply(lhs, imply_level());
    return lhs;
  }

  FormulaPtr or_level() {
    FormulaPtr lhs = and_level();
    if (accept(Tok::Or)) return f_or(lhs, or_level());
    return lhs;
  }

  FormulaPtr and_level() {
    FormulaPtr lhs = unary_formula();
    if (accept(Tok::And)) return f_and(lhs, and_level());
    return lhs;
  }

  FormulaPtr unary_formula() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::True: advance(); return Formula::mk_true();
      case Tok::False: advance(); return Formula::mk_false();
      case Tok::Not: advance(); return Formula::mk_not(unary_formula());
      case Tok::Forall:
      case Tok::Exists: {
        advance();
        const Token& v = peek();
        if (v.kind != Tok::Ident)
          fail(DiagnosticCode::UnknownToken,
               "Expected a variable name after '" + t.text + "', found '" + v.text + "'.",
               v.kind == Tok::End ? t.offset : v.offset);
        advance();
        FormulaPtr body = unary_formula();
        return Formula::quantifier(t.kind == Tok::Forall ? FormulaKind::Forall : FormulaKind::Exists,
                                   v.text, body);
      }
      case Tok::Lt: {  // diamond modality
        advance();
        push_delim('<', '>', t.offset);
        GamePtr g = modal_game(Tok::Gt, t.offset);
        expect_close(Tok::Gt, '>');
        return diamond(g, unary_formula_or_missing(t.offset, "<"));
      }
      case Tok::LBracket: {
        advance();
        push_delim('[', ']', t.offset);
        GamePtr g = modal_game(Tok::RBracket, t.offset);
        expect_close(Tok::RBracket, ']');
        return box(g, unary_formula_or_missing(t.offset, "["));
      }
      case Tok::LParen: {
        // Ambiguous: a parenthesized term beginning a comparison, or a
        // parenthesized formula. Try the comparison reading first and
        // backtrack; the formula branch reports the error if both fail.
        size_t save_pos = pos_;
        size_t save_delims = open_delims_.size();
        try {
          return comparison();
        } catch (const ParseError&) {
          pos_ = save_pos;
          open_delims_.resize(save_delims);
        }
        advance();
        push_delim('(', ')', t.offset);
        FormulaPtr inner = formula();
        expect_close(Tok::RParen, ')');
        return inner;
      }
      case Tok::Ident:
      case Tok::Number:
      case Tok::Minus:
        return comparison();
      default:
        fail(DiagnosticCode::UnknownToken,
             "Unexpected token '" + (t.kind == Tok::End ? std::string("end of input") : t.text) +
                 "' while parsing a formula.",
             t.offset, t.offset + std::max<size_t>(1, t.text.size()));
    }
  }

  FormulaPtr unary_formula_or_missing(size_t modality_offset, const std::string& opener) {
    if (peek().kind == Tok::End) {
      auto [line, col] = line_col(src_, modality_offset);
      fail(DiagnosticCode::BadModality,
           "The modality at line " + std::to_string(line) + ", column " + std::to_string(col) +
               " is malformed: it is missing a postcondition formula after '" + opener + "...'.",
           modality_offset);
    }
    return unary_formula();
  }

  FormulaPtr comparison() {
    TermPtr lhs = term();
    const Token& t = peek();
    RelOp op;
    switch (t.kind) {
      case Tok::Eq: op = RelOp::Eq; break;
      case Tok::Ne: op = RelOp::Ne; break;
      case Tok::Lt: op = RelOp::Lt; break;
      case Tok::Le: op = RelOp::Le; break;
      case Tok::Gt: op = RelOp::Gt; break;
      case Tok::Ge: op = RelOp::Ge; break;
      default:
        fail(DiagnosticCode::UnknownToken,
             "Expected a comparison operator after a term, found '" +
                 (t.kind == Tok::End ? std::string("end of input") : t.text) + "'.",
             t.offset, t.offset + std::max<size_t>(1, t.text.size()));
    }
    advance();
    return Formula::mk_cmp(lhs, op, term());
  }

  /* ---- games ---- */

  // Sequence inside a modality: the closing delimiter is known, and a
  // trailing ';' right before it is tolerated.
  GamePtr modal_game(Tok closer, size_t modality_offset) {
    if (peek().kind == closer) {
      auto [line, col] = line_col(src_, modality_offset);
      fail(DiagnosticCode::BadModality,
           "The modality at line " + std::to_string(line) + ", column " + std::to_string(col) +
               " is malformed: it contains no game.",
           modality_offset);
    }
    return game_choice(closer);
  }

  GamePtr game_choice(Tok closer) {
    GamePtr lhs = game_seq(closer);
    if (accept(Tok::Choice)) return Game::mk_choice(lhs, game_choice(closer));
    return lhs;
  }

  GamePtr game_seq(Tok closer) {
    GamePtr first = game_statement(closer);
    if (peek().kind == Tok::Semicolon) {
      advance();
      const Token& next = peek();
      if (next.kind == Tok::Gt || next.kind == Tok::RBracket) return first;  // trailing ';'
      if (starts_statement(next.kind)) return Game::mk_seq(first, game_seq(closer));
      fail(DiagnosticCode::UnknownToken,
           "Unexpected token '" + (next.kind == Tok::End ? std::string("end of input") : next.text) +
               "' after ';' where a game statement was expected.",
           next.offset, next.offset + std::max<size_t>(1, next.text.size()));
    }
    // No separator. If another statement follows, the ';' was forgotten;
    // otherwise leave the token for the enclosing delimiter to judge.
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Assign)
      fail(DiagnosticCode::MissingSemicolon,
           "Game statements must be separated by ';' but '" + peek().text +
               "' directly follows a statement.",
           peek().offset, peek().offset + peek().text.size());
    return first;
  }

  static bool starts_statement(Tok k) {
    return k == Tok::Ident || k == Tok::Question || k == Tok::LBrace;
  }

  GamePtr game_statement(Tok closer) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        advance();
        if (!accept(Tok::Assign))
          fail(DiagnosticCode::UnknownToken,
               "Expected ':=' after variable '" + t.text + "' in a game statement.",
               peek().offset, peek().offset + std::max<size_t>(1, peek().text.size()));
        if (accept(Tok::Star)) return Game::mk_assign_any(t.text);
        return Game::mk_assign(t.text, term());
      }
      case Tok::Question:
        advance();
        return Game::mk_test(formula());
      case Tok::LBrace: {
        advance();
        push_delim('{', '}', t.offset);
        if (peek().kind == Tok::Ident && peek(1).kind == Tok::Prime)
          return ode_body(t.offset);
        GamePtr inner = game_choice(Tok::RBrace);
        expect_close(Tok::RBrace, '}');
        if (accept(Tok::Star)) return Game::mk_loop(inner);
        if (accept(Tok::DualMark)) return Game::mk_dual(inner);
        return inner;
      }
      default:
        fail(DiagnosticCode::UnknownToken,
             "Unexpected token '" + (t.kind == Tok::End ? std::string("end of input") : t.text) +
                 "' while parsing a game.",
             t.offset, t.offset + std::max<size_t>(1, t.text.size()));
    }
    (void)closer;
  }

  [[noreturn]] void fail_bad_ode(size_t brace_offset, const std::string& what, size_t at) {
    auto [line, col] = line_col(src_, brace_offset);
    fail(DiagnosticCode::BadODE,
         "The differential equation system at line " + std::to_string(line) + ", column " +
             std::to_string(col) + " is malformed: " + what + ".",
         at);
  }

  GamePtr ode_body(size_t brace_offset) {
    std::vector<OdeEquation> eqs;
    IdentSet bound;
    for (;;) {
      const Token& v = peek();
      if (v.kind != Tok::Ident)
        fail_bad_ode(brace_offset, "expected a primed variable declaration like x' = e",
                     v.kind == Tok::End ? brace_offset : v.offset);
      advance();
      if (!accept(Tok::Prime))
        fail_bad_ode(brace_offset, "expected ''' after variable '" + v.text + "'",
                     peek().offset);
      if (!accept(Tok::Eq))
        fail_bad_ode(brace_offset, "expected '=' after '" + v.text + "''", peek().offset);
      if (bound.count(v.text))
        fail_bad_ode(brace_offset, "variable '" + v.text + "' is bound twice", v.offset);
      bound.insert(v.text);
      eqs.push_back({v.text, term()});
      if (accept(Tok::Comma)) continue;
      break;
    }
    FormulaPtr domain;
    if (accept(Tok::And)) {
      if (peek().kind == Tok::RBrace)
        fail_bad_ode(brace_offset, "the domain constraint after '&' is empty", peek().offset);
      domain = formula();
    }
    expect_close(Tok::RBrace, '}');
    return Game::mk_ode(std::move(eqs), std::move(domain));
  }
};

}  // namespace parse_detail

// Scans raw bytes; any non-ASCII byte yields the paper-style feedback
// diagnostic before grammar processing is attempted.
inline std::optional<Diagnostic> scan_unicode(std::string_view src) {
  for (size_t i = 0; i < src.size(); ++i) {
    if (static_cast<unsigned char>(src[i]) >= 0x80) {
      auto [ch, len] = parse_detail::utf8_char_at(src, i);
      auto d = parse_detail::make_diag(
          DiagnosticCode::UnicodeChar,
          "The input formula contains an unsupported Unicode character (possibly " + ch +
              "). Use only ASCII characters.",
          src, i, i + len);
      return d;
    }
  }
  return std::nullopt;
}

inline ParseResult parse_formula(std::string_view src) {
  ParseResult result;
  if (auto unicode = scan_unicode(src)) {
    result.diagnostics.push_back(*unicode);
    return result;
  }
  try {
    parse_detail::Parser p(src);
    result.formula = p.parse_input();
  } catch (const parse_detail::ParseError& e) {
    result.diagnostics.push_back(
        parse_detail::make_diag(e.code, e.message, src, e.offset, e.end));
  } catch (const std::exception& e) {
    result.diagnostics.push_back(parse_detail::make_diag(
        DiagnosticCode::Other, std::string("The input could not be parsed: ") + e.what(), src, 0, 0));
  }
  if (!result.formula && result.diagnostics.empty()) {
    result.diagnostics.push_back(parse_detail::make_diag(
        DiagnosticCode::Other, "The input could not be parsed.", src, 0, 0));
  }
  return result;
}

// One-line rendering used by the CLI and transcripts.
inline std::string format_diagnostic(const Diagnostic& d) {
  return std::string(diagnostic_code_name(d.code)) + " at " + std::to_string(d.line) + ":" +
         std::to_string(d.column) + ": " + d.message;
}

}  // namespace dgl
