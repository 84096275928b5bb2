#include "nlpl/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace nlpl {

ExprError::ExprError(const std::string& what, std::size_t column)
    : ConfigError(what + " at column " + std::to_string(column)), column_(column) {}

struct Expression::Node {
  enum class Op { Num, X, Y, Add, Sub, Mul, Div, Pow, Neg, Min, Max, Abs };
  Op op = Op::Num;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;

  double eval(double x, double y) const {
    switch (op) {
      case Op::Num: return value;
      case Op::X: return x;
      case Op::Y: return y;
      case Op::Add: return a->eval(x, y) + b->eval(x, y);
      case Op::Sub: return a->eval(x, y) - b->eval(x, y);
      case Op::Mul: return a->eval(x, y) * b->eval(x, y);
      case Op::Div: return a->eval(x, y) / b->eval(x, y);
      case Op::Pow: return std::pow(a->eval(x, y), b->eval(x, y));
      case Op::Neg: return -a->eval(x, y);
      case Op::Min: return std::min(a->eval(x, y), b->eval(x, y));
      case Op::Max: return std::max(a->eval(x, y), b->eval(x, y));
      case Op::Abs: return std::abs(a->eval(x, y));
    }
    return 0.0;
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view t) : t_(t) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ < t_.size()) fail(std::string("unexpected '") + t_[pos_] + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ExprError(what, pos_ + 1); }

  void skip() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < t_.size() && t_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto n = term();
    for (;;) {
      if (eat('+')) n = make(Node::Op::Add, n, term());
      else if (eat('-')) n = make(Node::Op::Sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    auto n = unary();
    for (;;) {
      if (eat('*')) n = make(Node::Op::Mul, n, unary());
      else if (eat('/')) n = make(Node::Op::Div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Op::Neg, unary());
    if (eat('+')) return unary();
    auto base = atom();
    if (eat('^')) return make(Node::Op::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= t_.size()) fail("unexpected end of expression");
    const char c = t_[pos_];
    if (eat('(')) {
      auto n = expr();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < t_.size() && std::isalnum(static_cast<unsigned char>(t_[pos_]))) ++pos_;
      const std::string_view name = t_.substr(start, pos_ - start);
      if (name == "x") return make(Node::Op::X);
      if (name == "y") return make(Node::Op::Y);
      if (name == "pi") return make(Node::Op::Num, nullptr, nullptr, std::numbers::pi);
      if (name == "e") return make(Node::Op::Num, nullptr, nullptr, std::numbers::e);
      if (name == "abs") {
        expect('(');
        auto a = expr();
        expect(')');
        return make(Node::Op::Abs, a);
      }
      if (name == "min" || name == "max") {
        expect('(');
        auto a = expr();
        expect(',');
        auto b = expr();
        expect(')');
        return make(name == "min" ? Node::Op::Min : Node::Op::Max, a, b);
      }
      pos_ = start;
      fail("unknown name '" + std::string(name) + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    double v = 0.0;
    const char* first = t_.data() + pos_;
    const auto res = std::from_chars(first, t_.data() + t_.size(), v);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return make(Node::Op::Num, nullptr, nullptr, v);
  }

  std::string_view t_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.source_ = std::string(text);
  return e;
}

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

}  // namespace nlpl
