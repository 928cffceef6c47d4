#pragma once

#include <memory>
#include <string>

namespace caplab {

// Small arithmetic expression over one variable `u`:
//   +, -, *, /, ^, exp, sin, cos, sqrt, log, numeric literals, pi.
// Parsed once into an AST; evaluation and symbolic differentiation are exact.
class Expression {
 public:
  static Expression parse(const std::string& text);

  double eval(double u) const;
  Expression derivative() const;  // d/du, symbolic

  std::string str() const;

  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  ~Expression();

  struct Node;  // AST node, defined in the implementation file

 private:
  explicit Expression(std::shared_ptr<const Node> root);
  std::shared_ptr<const Node> root_;
};

}  // namespace caplab
