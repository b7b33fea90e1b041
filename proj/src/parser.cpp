// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <charconv>
#include <string>

#include "akkt/expr.hpp"

namespace akkt {
namespace {

class Parser {
 public:
  Parser(std::string_view text, int n) : text_(text), n_(n) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = Expr::sum(std::move(lhs), term());
      else if (accept('-'))
        lhs = Expr::sum(std::move(lhs), Expr::negate(term()));
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr::product(std::move(lhs), unary());
      else if (accept('/'))
        lhs = Expr::quotient(std::move(lhs), unary());
      else
        return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::negate(unary());
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    skip();
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    int exponent = integer("integer exponent");
    return Expr::power(std::move(base), negative ? -exponent : exponent);
  }

  int integer(const char* what) {
    std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail(std::string("expected ") + what);
    int value = 0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (res.ec != std::errc() || res.ptr == text_.data() + start)
      fail(std::string("expected ") + what);
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return value;
  }

  Expr atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    if (accept('(')) {
      Expr inner = expr();
      expect(')');
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    double value = 0.0;
    const char* first = text_.data() + pos_;
    auto res = std::from_chars(first, text_.data() + text_.size(), value,
                               std::chars_format::general);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return Expr::constant(value);
  }

  Expr name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::string_view word = text_.substr(start, pos_ - start);
    if (word == "x") {
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("expected variable index after 'x'");
      int index = integer("variable index");
      if (index >= n_) {
        pos_ = start;
        fail("variable x" + std::to_string(index) + " out of range for dimension " +
             std::to_string(n_));
      }
      return Expr::variable(index);
    }
    NodeKind kind;
    if (word == "exp")
      kind = NodeKind::Exp;
    else if (word == "log")
      kind = NodeKind::Log;
    else if (word == "sin")
      kind = NodeKind::Sin;
    else if (word == "cos")
      kind = NodeKind::Cos;
    else if (word == "sqrt")
      kind = NodeKind::Sqrt;
    else {
      pos_ = start;
      fail("unknown function '" + std::string(word) + "'");
    }
    expect('(');
    Expr arg = expr();
    expect(')');
    return Expr::unary(kind, std::move(arg));
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, int n) {
  if (n < 1) throw std::invalid_argument("dimension must be at least 1");
  return Parser(text, n).parse();
}

}  // namespace akkt
