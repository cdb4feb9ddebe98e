#include "polytheta/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <optional>
#include <vector>

namespace polytheta {

namespace {

std::string located(const SourceSpan& s, const std::string& message) {
  return std::to_string(s.line) + ":" + std::to_string(s.col_start) + ": " + message;
}

enum class Tok { integer, ident, plus, minus, star, caret, lparen, rparen, comma, slash, end };

struct Token {
  Tok kind;
  std::string_view text;
  std::int64_t value = 0;
  SourceSpan span;
};

const char* tok_name(Tok k) {
  switch (k) {
    case Tok::integer: return "integer";
    case Tok::ident: return "name";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::star: return "'*'";
    case Tok::caret: return "'^'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::slash: return "'/'";
    case Tok::end: return "end of input";
  }
  return "token";
}

std::vector<Token> tokenize(std::string_view text, TextOrigin origin) {
  std::vector<Token> out;
  std::size_t line = origin.line;
  std::size_t col = origin.column;
  std::size_t pos = 0;
  auto span_of = [&](std::size_t start_col, std::size_t len) {
    return SourceSpan{line, start_col, start_col + (len == 0 ? 0 : len - 1)};
  };
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == '\n') {
      ++line;
      col = 1;
      ++pos;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++pos;
      ++col;
      continue;
    }
    const unsigned char uc = static_cast<unsigned char>(c);
    if (std::isdigit(uc)) {
      std::size_t end = pos;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      Token t{Tok::integer, text.substr(pos, end - pos), 0, span_of(col, end - pos)};
      const auto res = std::from_chars(text.data() + pos, text.data() + end, t.value);
      if (res.ec != std::errc{}) throw ParseError(t.span, "integer literal out of range");
      out.push_back(t);
      col += end - pos;
      pos = end;
      continue;
    }
    if (std::isalpha(uc) || c == '_') {
      std::size_t end = pos;
      while (end < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
        ++end;
      out.push_back(Token{Tok::ident, text.substr(pos, end - pos), 0, span_of(col, end - pos)});
      col += end - pos;
      pos = end;
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::plus; break;
      case '-': k = Tok::minus; break;
      case '*': k = Tok::star; break;
      case '^': k = Tok::caret; break;
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      case ',': k = Tok::comma; break;
      case '/': k = Tok::slash; break;
      default:
        if (uc >= 0x80) throw ParseError(span_of(col, 1), "non-ASCII character; use phi/psi names");
        throw ParseError(span_of(col, 1), std::string("unexpected character '") + c + "'");
    }
    out.push_back(Token{k, text.substr(pos, 1), 0, span_of(col, 1)});
    ++pos;
    ++col;
  }
  out.push_back(Token{Tok::end, {}, 0, SourceSpan{line, col, col}});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, TextOrigin origin) : toks_(tokenize(text, origin)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(std::string_view name) const { return at(Tok::ident) && peek().text == name; }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  const Token& expect(Tok k, const char* context) {
    if (!at(k)) fail(peek(), std::string("expected ") + tok_name(k) + " " + context + ", found " + describe_tok(peek()));
    return take();
  }

  [[noreturn]] static void fail(const Token& t, const std::string& message) {
    throw ParseError(t.span, message);
  }

  static std::string describe_tok(const Token& t) {
    if (t.kind == Tok::end) return "end of input";
    return "'" + std::string(t.text) + "'";
  }

  void expect_end() {
    if (!at(Tok::end)) fail(peek(), "unexpected " + describe_tok(peek()));
  }

  // ---- theta expressions ----

  ThetaExpression expression() {
    ThetaExpression e;
    if (at(Tok::integer) && peek().value == 0 && peek(1).kind == Tok::end) {
      take();
      return e;
    }
    e.terms.push_back(term());
    while (at(Tok::plus)) {
      take();
      e.terms.push_back(term());
    }
    expect_end();
    return e;
  }

  ProductTerm single_term() {
    ProductTerm t = term();
    expect_end();
    return t;
  }

  ProductTerm term() {
    ProductTerm t;
    if (at(Tok::integer)) {
      const Token& m = take();
      if (m.value < 1) fail(m, "multiplier must be a positive integer");
      t.multiplier = m.value;
      expect(Tok::star, "after multiplier");
    }
    if (at_ident("q")) {
      take();
      t.shift = 1;
      if (at(Tok::caret)) {
        take();
        t.shift = exponent_value("q-shift");
      }
      expect(Tok::star, "after q-shift");
    }
    factor(t);
    while (at(Tok::star)) {
      take();
      factor(t);
    }
    return t;
  }

  std::int64_t exponent_value(const char* what) {
    if (at(Tok::minus)) {
      const Token& minus = take();
      SourceSpan s = minus.span;
      if (at(Tok::integer)) s.col_end = take().span.col_end;
      throw ParseError(s, std::string("negative exponent in ") + what);
    }
    return expect(Tok::integer, (std::string("for ") + what).c_str()).value;
  }

  // arg := '1' | 'q' ['^' int]
  std::int64_t arg() {
    if (at(Tok::integer)) {
      const Token& t = take();
      if (t.value != 1) fail(t, "theta argument must be 1 or a power of q");
      return 0;
    }
    if (!at_ident("q")) fail(peek(), "expected q^n, found " + describe_tok(peek()));
    take();
    if (!at(Tok::caret)) return 1;
    take();
    return exponent_value("theta argument");
  }

  void factor(ProductTerm& t) {
    if (!at(Tok::ident)) fail(peek(), "expected a theta function, found " + describe_tok(peek()));
    const Token name = take();
    ThetaAtom a;
    if (name.text == "f") {
      expect(Tok::lparen, "after f");
      a.i = arg();
      expect(Tok::comma, "between f arguments");
      a.j = arg();
      expect(Tok::rparen, "closing f(...)");
    } else if (name.text == "phi" || name.text == "psi" || name.text == "X" || name.text == "Y") {
      expect(Tok::lparen, "after theta name");
      const std::int64_t k = arg();
      expect(Tok::rparen, "closing theta argument");
      if (name.text == "phi") a = atoms::phi(k);
      if (name.text == "psi") a = atoms::psi(k);
      if (name.text == "X") a = atoms::X(k);
      if (name.text == "Y") a = atoms::Y(k);
    } else {
      fail(name, "unknown theta function '" + std::string(name.text) + "'");
    }
    if (a.i == 0 && a.j == 0) fail(name, "theta atom with i = j = 0 is not a power series");
    std::int64_t count = 1;
    if (at(Tok::caret)) {
      take();
      const Token& p = expect(Tok::integer, "as power");
      if (p.value < 1) fail(p, "power must be a positive integer");
      if (p.value > 64) fail(p, "power too large");
      count = p.value;
    }
    for (std::int64_t r = 0; r < count; ++r) t.atoms.push_back(a);
  }

  // ---- polygonal sums ----

  PolygonalSum sum() {
    PolygonalSum s;
    s.terms.push_back(pterm());
    while (at(Tok::plus)) {
      take();
      s.terms.push_back(pterm());
    }
    expect_end();
    return s;
  }

  QuadTerm pterm() {
    const SourceSpan start = peek().span;
    Coeff c = 1;
    if (at(Tok::integer)) {
      const Token& m = take();
      if (m.value < 1) fail(m, "coefficient must be a positive integer");
      c = m.value;
      if (at(Tok::star)) take();
    }
    if (!at(Tok::ident)) fail(peek(), "expected p<m> or x(Ax+B)/2, found " + describe_tok(peek()));
    const Token name = take();
    if (name.text == "x") return general_form(c, start);
    std::string_view digits = name.text;
    if (!digits.empty() && digits.front() == 'p') digits.remove_prefix(1);
    else fail(name, "expected p<m> or x(Ax+B)/2, found '" + std::string(name.text) + "'");
    if (!digits.empty() && digits.front() == '_') digits.remove_prefix(1);
    std::int64_t m = 0;
    if (digits.empty()) {
      // "p 5" style is tolerated when the number follows as its own token.
      m = expect(Tok::integer, "after p").value;
    } else {
      const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), m);
      if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size())
        fail(name, "malformed polygonal name '" + std::string(name.text) + "'");
    }
    if (m < 3) fail(name, "polygonal numbers need m >= 3, got " + std::to_string(m));
    if (m > 1'000'000) fail(name, "polygonal order too large");
    return term_from_polygonal(c, static_cast<int>(m));
  }

  QuadTerm general_form(Coeff c, SourceSpan start) {
    expect(Tok::lparen, "after x");
    const std::int64_t A = expect(Tok::integer, "for A in x(Ax+B)/2").value;
    const Token& x = expect(Tok::ident, "after A");
    if (x.text != "x") fail(x, "expected x in x(Ax+B)/2");
    std::int64_t sign = 1;
    if (at(Tok::minus)) {
      take();
      sign = -1;
    } else {
      expect(Tok::plus, "in x(Ax+B)/2");
    }
    const std::int64_t B = sign * expect(Tok::integer, "for B in x(Ax+B)/2").value;
    expect(Tok::rparen, "closing x(Ax+B)");
    expect(Tok::slash, "before /2");
    const Token& two = expect(Tok::integer, "after '/'");
    if (two.value != 2) fail(two, "general form must be divided by 2");
    SourceSpan whole = start;
    whole.col_end = two.span.col_end;
    try {
      return make_quad_term(c, A, B);
    } catch (const DomainError& e) {
      throw ParseError(whole, e.what());
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string power_arg(std::int64_t k) {
  if (k == 0) return "1";
  if (k == 1) return "q";
  return "q^" + std::to_string(k);
}

}  // namespace

ParseError::ParseError(SourceSpan span, const std::string& message)
    : Error(located(span, message)), span_(span), message_(message) {}

ThetaExpression parse_theta_expression(std::string_view text, TextOrigin origin) {
  return Parser(text, origin).expression();
}

ProductTerm parse_product_term(std::string_view text, TextOrigin origin) {
  return Parser(text, origin).single_term();
}

PolygonalSum parse_polygonal_sum(std::string_view text, TextOrigin origin) {
  return Parser(text, origin).sum();
}

std::string serialize(const ThetaAtom& a) {
  if (a.i >= 1) {
    if (a.j == a.i) return "phi(" + power_arg(a.i) + ")";
    if (a.j == 3 * a.i) return "psi(" + power_arg(a.i) + ")";
    if (a.j == 2 * a.i) return "X(" + power_arg(a.i) + ")";
    if (a.j == 5 * a.i) return "Y(" + power_arg(a.i) + ")";
  }
  return "f(" + power_arg(a.i) + ", " + power_arg(a.j) + ")";
}

std::string serialize(const ProductTerm& t) {
  std::string out;
  if (t.multiplier != 1) out += std::to_string(t.multiplier) + "*";
  if (t.shift != 0) out += power_arg(t.shift) + "*";
  for (std::size_t k = 0; k < t.atoms.size();) {
    std::size_t run = 1;
    while (k + run < t.atoms.size() && t.atoms[k + run] == t.atoms[k]) ++run;
    if (k != 0) out += "*";
    out += serialize(t.atoms[k]);
    if (run > 1) out += "^" + std::to_string(run);
    k += run;
  }
  return out;
}

std::string serialize(const ThetaExpression& e) {
  if (e.terms.empty()) return "0";
  std::string out;
  for (const auto& t : e.terms) {
    if (!out.empty()) out += " + ";
    out += serialize(t);
  }
  return out;
}

std::string serialize(const QuadTerm& t) {
  std::string out;
  if (t.coeff != 1) out += std::to_string(t.coeff) + "*";
  if (t.A >= 1 && t.B == -(t.A - 2)) return out + "p" + std::to_string(t.A + 2);
  out += "x(" + std::to_string(t.A) + "x" + (t.B < 0 ? "-" : "+") +
         std::to_string(t.B < 0 ? -t.B : t.B) + ")/2";
  return out;
}

std::string serialize(const PolygonalSum& s) {
  std::string out;
  for (const auto& t : s.terms) {
    if (!out.empty()) out += " + ";
    out += serialize(t);
  }
  return out;
}

}  // namespace polytheta
