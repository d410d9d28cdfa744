#pragma once

#include <memory>
#include <string>

#include "robinspec/types.hpp"

namespace robinspec {

/// Complex-valued expression over the boundary coordinates.
///
/// Grammar (case-sensitive):
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := ('+'|'-') unary | power
///   power  := primary ('^' unary)?
///   primary:= number | 'i' | 'pi' | 'x1' | 'x2' | 'x3' | 'r'
///           | func '(' expr ')' | '(' expr ')'
///   func   := exp sin cos tan sinh cosh tanh sqrt log abs re im conj
/// 'r' is |x'|; x1..x3 are tangential coordinates. Arithmetic is complex.
class Expression {
 public:
  static Expression parse(const std::string& text);  // throws std::invalid_argument
  cplx eval(const double* x, int nvars) const;       // x = tangential coords
  const std::string& text() const { return text_; }

  Expression();
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;
  ~Expression();

  struct Node;  // exposed for the out-of-line parser, not part of the API

 private:
  std::unique_ptr<Node> root_;
  std::string text_;
};

}  // namespace robinspec
