#include "slhkit/op_parse.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "slhkit/errors.hpp"

namespace slh {

namespace {

struct Token {
  enum class Kind { ident, number, punct, end };
  Kind kind = Kind::end;
  std::string text;
  double value = 0.0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  bool accept_punct(const char* p) {
    if (tok_.kind == Token::Kind::punct && tok_.text == p) {
      advance();
      return true;
    }
    return false;
  }

  void expect_punct(const char* p) {
    if (!accept_punct(p))
      throw OperatorParseError("expected '" + std::string(p) + "' near '" + tok_.text +
                               "' in operator expression");
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok_ = Token{};
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::end;
      tok_.text = "<end>";
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      const char* start = text_.c_str() + pos_;
      char* end = nullptr;
      tok_.value = std::strtod(start, &end);
      tok_.kind = Token::Kind::number;
      tok_.text = std::string(start, static_cast<std::size_t>(end - start));
      pos_ += static_cast<std::size_t>(end - start);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        ++pos_;
      tok_.kind = Token::Kind::ident;
      tok_.text = text_.substr(start, pos_ - start);
      return;
    }
    tok_.kind = Token::Kind::punct;
    tok_.text = std::string(1, c);
    ++pos_;
  }

  std::string text_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text, const std::set<std::string>& complex_names)
      : lex_(text), complex_names_(complex_names) {}

  OperatorExpr parse() {
    OperatorExpr e = parse_expr();
    if (lex_.peek().kind != Token::Kind::end)
      throw OperatorParseError("unexpected trailing input '" + lex_.peek().text +
                               "' in operator expression");
    return e;
  }

 private:
  OperatorExpr parse_expr() {
    bool neg = lex_.accept_punct("-");
    OperatorExpr e = parse_term();
    if (neg) e = -e;
    while (true) {
      if (lex_.accept_punct("+")) {
        e = e + parse_term();
      } else if (lex_.accept_punct("-")) {
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  OperatorExpr parse_term() {
    OperatorExpr e = parse_factor();
    while (lex_.accept_punct("*")) e = e * parse_factor();
    return e;
  }

  OperatorExpr parse_factor() {
    OperatorExpr e = parse_primary();
    if (lex_.accept_punct("^")) {
      const Token t = lex_.take();
      if (t.kind != Token::Kind::number || t.value != std::floor(t.value) || t.value < 0)
        throw OperatorParseError("exponent must be a nonnegative integer, got '" + t.text + "'");
      OperatorExpr r(1.0);
      for (int k = 0; k < static_cast<int>(t.value); ++k) r = r * e;
      return r;
    }
    return e;
  }

  std::string parse_label() {
    lex_.expect_punct("[");
    const Token t = lex_.take();
    if (t.kind != Token::Kind::ident)
      throw OperatorParseError("expected a space label inside '[...]', got '" + t.text + "'");
    lex_.expect_punct("]");
    return t.text;
  }

  // Linear combination of real symbols used as a trig argument.
  LinArg parse_linear() {
    LinArg total;
    bool first = true;
    while (true) {
      double sign = 1.0;
      if (lex_.accept_punct("-")) {
        sign = -1.0;
      } else if (lex_.accept_punct("+")) {
        // explicit plus
      } else if (!first) {
        break;
      }
      double coeff = sign;
      std::string symbol;
      bool any = false;
      while (true) {
        const Token& p = lex_.peek();
        if (p.kind == Token::Kind::number) {
          coeff *= lex_.take().value;
        } else if (p.kind == Token::Kind::ident && p.text == "pi") {
          lex_.take();
          coeff *= M_PI;
        } else if (p.kind == Token::Kind::ident) {
          if (!symbol.empty())
            throw OperatorParseError("trig argument term has more than one symbol");
          symbol = lex_.take().text;
        } else {
          break;
        }
        any = true;
        if (!lex_.accept_punct("*")) break;
      }
      if (!any) throw OperatorParseError("empty term in trig argument");
      if (symbol.empty()) {
        total = total.plus(LinArg::number(coeff));
      } else {
        total = total.plus(LinArg::symbol(symbol, coeff));
      }
      first = false;
    }
    return total;
  }

  OperatorExpr parse_primary() {
    const Token& p = lex_.peek();
    if (p.kind == Token::Kind::number) {
      return OperatorExpr(lex_.take().value);
    }
    if (p.kind == Token::Kind::punct && p.text == "(") {
      lex_.take();
      OperatorExpr e = parse_expr();
      lex_.expect_punct(")");
      return e;
    }
    if (p.kind != Token::Kind::ident)
      throw OperatorParseError("unexpected '" + p.text + "' in operator expression");

    const std::string name = lex_.take().text;
    if (name == "i") return OperatorExpr(Complex(0.0, 1.0));
    if (name == "pi") return OperatorExpr(M_PI);
    if (name == "sin" || name == "cos" || name == "expi") {
      lex_.expect_punct("(");
      const LinArg a = parse_linear();
      lex_.expect_punct(")");
      if (name == "sin") return OperatorExpr(ScalarExpr::sin(a));
      if (name == "cos") return OperatorExpr(ScalarExpr::cos(a));
      return OperatorExpr(ScalarExpr::expi(a));
    }
    if (name == "inv") {
      lex_.expect_punct("(");
      OperatorExpr e = parse_expr();
      lex_.expect_punct(")");
      if (!e.is_scalar())
        throw OperatorParseError("inv(...) requires a scalar argument");
      return OperatorExpr(ScalarExpr::inverse(e.scalar_part()));
    }
    if (name == "conj") {
      lex_.expect_punct("(");
      const Token t = lex_.take();
      if (t.kind != Token::Kind::ident)
        throw OperatorParseError("conj(...) expects a symbol name, got '" + t.text + "'");
      lex_.expect_punct(")");
      const bool complex_domain = complex_names_.count(t.text) > 0;
      return OperatorExpr(ScalarExpr::symbol(t.text, !complex_domain).conj());
    }

    const bool has_label =
        lex_.peek().kind == Token::Kind::punct && lex_.peek().text == "[";
    if (has_label) {
      const std::string label = parse_label();
      if (name == "X") return OperatorExpr::pauli_x(label);
      if (name == "Y") return OperatorExpr::pauli_y(label);
      if (name == "Z") return OperatorExpr::pauli_z(label);
      if (name == "a") return OperatorExpr::annihilator(label);
      if (name == "adag") return OperatorExpr::creator(label);
      if (name == "sp") return OperatorExpr::sigma_plus(label);
      if (name == "sm") return OperatorExpr::sigma_minus(label);
      if (name == "p0") return OperatorExpr::projector0(label);
      if (name == "p1") return OperatorExpr::projector1(label);
      throw OperatorParseError("unknown operator '" + name + "[...]'");
    }
    return OperatorExpr(ScalarExpr::symbol(name, complex_names_.count(name) == 0));
  }

  Lexer lex_;
  std::set<std::string> complex_names_;
};

}  // namespace

OperatorExpr parse_operator(const std::string& text,
                            const std::set<std::string>& complex_names) {
  return Parser(text, complex_names).parse();
}

ScalarExpr parse_scalar(const std::string& text, const std::set<std::string>& complex_names) {
  const OperatorExpr e = parse_operator(text, complex_names);
  if (!e.is_scalar())
    throw OperatorParseError("expected a scalar expression, found operator factors in '" + text +
                             "'");
  return e.scalar_part();
}

}  // namespace slh
