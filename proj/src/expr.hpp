#pragma once

#include <memory>
#include <string>

namespace fpt {

// Arithmetic expressions in one variable x: numbers, + - * / ^ (with ^
// binding tightest and right-associative), unary minus, parentheses, and the
// functions sin, cos, exp, tanh, atan, abs.
class Expression {
 public:
  struct Node;

  double eval(double x) const;
  std::string pretty_print() const;

  const Node& root() const { return *root_; }
  bool same_tree(const Expression& other) const;

 private:
  friend Expression parse_expression(const std::string& src);
  std::shared_ptr<const Node> root_;
};

// Throws error(errc::syntax_error) with the byte offset in the message, or
// errc::unknown_identifier for names other than x and the function set.
Expression parse_expression(const std::string& src);

}  // namespace fpt
