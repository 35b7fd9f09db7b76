#pragma once

#include <memory>
#include <string>

namespace specwave {

// Arithmetic expressions in one named variable, used for potentials (in x)
// and time coefficients (in t).
//
// Grammar: numbers, the bound variable, pi, + - * / ^, parentheses, and the
// functions exp, sin, cos, abs, sqrt, pow(a, b). '^' binds tighter than
// unary minus and associates right.
class Expression {
 public:
  Expression() = default;

  // Parses `text` with `var` as the only admissible identifier.
  // Throws PreconditionError on syntax errors or unknown identifiers.
  static Expression parse(const std::string& text, const std::string& var);

  double operator()(double value) const;

  bool empty() const { return root_ == nullptr; }
  const std::string& text() const { return text_; }

 private:
  struct Node;
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace specwave
