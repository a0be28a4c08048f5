#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "radcon/core.hpp"

// Small analytic-expression grammar over (t, x1, x2, x3):
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := '-' factor | primary
//   primary := number | 'pi' | 't' | 'x1' | 'x2' | 'x3'
//            | ('exp' | 'cos' | 'sin') '(' expr ')'
//            | 'pow' '(' expr ',' expr ')'
//            | '(' expr ')'
//
// Numbers are ordinary floating-point literals.

namespace radcon {

struct ExpressionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace expr_detail {

struct Node {
  enum class Op {
    constant,
    var_t,
    var_x1,
    var_x2,
    var_x3,
    add,
    sub,
    mul,
    div,
    neg,
    pw,
    exp,
    cos,
    sin
  };
  Op op;
  double value = 0.0;
  std::unique_ptr<Node> a, b;

  double eval(double t, const Vec3& x) const {
    switch (op) {
      case Op::constant: return value;
      case Op::var_t: return t;
      case Op::var_x1: return x[0];
      case Op::var_x2: return x[1];
      case Op::var_x3: return x[2];
      case Op::add: return a->eval(t, x) + b->eval(t, x);
      case Op::sub: return a->eval(t, x) - b->eval(t, x);
      case Op::mul: return a->eval(t, x) * b->eval(t, x);
      case Op::div: return a->eval(t, x) / b->eval(t, x);
      case Op::neg: return -a->eval(t, x);
      case Op::pw: return std::pow(a->eval(t, x), b->eval(t, x));
      case Op::exp: return std::exp(a->eval(t, x));
      case Op::cos: return std::cos(a->eval(t, x));
      default: return std::sin(a->eval(t, x));
    }
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  std::unique_ptr<Node> parse() {
    auto node = expression();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return node;
  }

 private:
  using Op = Node::Op;

  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression: " + what + " at position " +
                          std::to_string(pos_) + " in \"" + s_ + "\"");
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::unique_ptr<Node> make(Op op, std::unique_ptr<Node> a = nullptr,
                             std::unique_ptr<Node> b = nullptr) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  std::unique_ptr<Node> expression() {
    auto node = term();
    for (;;) {
      if (consume('+'))
        node = make(Op::add, std::move(node), term());
      else if (consume('-'))
        node = make(Op::sub, std::move(node), term());
      else
        return node;
    }
  }

  std::unique_ptr<Node> term() {
    auto node = factor();
    for (;;) {
      if (consume('*'))
        node = make(Op::mul, std::move(node), factor());
      else if (consume('/'))
        node = make(Op::div, std::move(node), factor());
      else
        return node;
    }
  }

  std::unique_ptr<Node> factor() {
    if (consume('-')) return make(Op::neg, factor());
    return primary();
  }

  std::unique_ptr<Node> primary() {
    skip_space();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (consume('(')) {
      auto node = expression();
      if (!consume(')')) fail("expected ')'");
      return node;
    }
    fail("unexpected character");
  }

  std::unique_ptr<Node> number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = make(Op::constant);
    n->value = v;
    return n;
  }

  std::unique_ptr<Node> identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_]))))
      ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "t") return make(Op::var_t);
    if (name == "x1") return make(Op::var_x1);
    if (name == "x2") return make(Op::var_x2);
    if (name == "x3") return make(Op::var_x3);
    if (name == "pi") {
      auto n = make(Op::constant);
      n->value = std::numbers::pi;
      return n;
    }
    if (name == "exp" || name == "cos" || name == "sin") {
      if (!consume('(')) fail("expected '(' after " + name);
      auto arg = expression();
      if (!consume(')')) fail("expected ')'");
      return make(name == "exp" ? Op::exp : (name == "cos" ? Op::cos : Op::sin),
                  std::move(arg));
    }
    if (name == "pow") {
      if (!consume('(')) fail("expected '(' after pow");
      auto a = expression();
      if (!consume(',')) fail("expected ',' in pow");
      auto b = expression();
      if (!consume(')')) fail("expected ')'");
      return make(Op::pw, std::move(a), std::move(b));
    }
    fail("unknown identifier '" + name + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace expr_detail

// A parsed analytic expression; keeps its source text so configurations
// round-trip verbatim. Copyable (the compiled tree is shared).
class Expression {
 public:
  Expression() : Expression("0") {}

  explicit Expression(const std::string& text)
      : text_(text),
        root_(std::shared_ptr<const expr_detail::Node>(
            expr_detail::Parser(text).parse().release())) {}

  double operator()(double t, const Vec3& x) const { return root_->eval(t, x); }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const expr_detail::Node> root_;
};

}  // namespace radcon
