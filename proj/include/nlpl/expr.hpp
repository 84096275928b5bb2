#pragma once

// Arithmetic expressions in x and y for exterior data given in a config.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          right associative
//   atom   := number | x | y | pi | e | '(' expr ')'
//           | (min | max) '(' expr ',' expr ')' | abs '(' expr ')'

#include "nlpl/errors.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace nlpl {

class ExprError : public ConfigError {
 public:
  ExprError(const std::string& what, std::size_t column);
  std::size_t column() const { return column_; }  // 1-based

 private:
  std::size_t column_;
};

class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text);  // throws ExprError

  double operator()(double x, double y = 0.0) const;
  const std::string& source() const { return source_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace nlpl
