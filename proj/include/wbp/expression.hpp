#pragma once

#include <memory>
#include <string>

#include <Eigen/Dense>

namespace wbp {

/// A compiled arithmetic expression over a point x of R^n.
///
/// Grammar:
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('-' | '+') unary | power
///   power  := atom ('^' unary)?
///   atom   := number | name | func '(' expr (',' expr)? ')' | '(' expr ')'
///   name   := r | rp | x1 .. xn | pi
///   func   := exp | log | sqrt | abs | pow
///
/// r is |x|, rp is |x'| = |(x1, .., x_{n-1})|.
class Expression {
 public:
  /// Throws DomainError with the offending column on malformed input.
  static Expression parse(const std::string& text, int n);

  double operator()(const Eigen::VectorXd& x) const;
  const std::string& text() const noexcept { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace wbp
