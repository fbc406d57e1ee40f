#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dbracket/functions.hpp"
#include "dbracket/types.hpp"

namespace dbracket {

/// Parsed arithmetic expression over named variables.
///
/// Grammar: + - * / ^, unary minus, parentheses, numeric literals, the
/// constant `pi`, and the functions sin cos sinh cosh exp sqrt atan2 acosh.
/// `^` is right associative and binds tighter than unary minus, so -x^2 is
/// -(x^2). Gradients are exact (forward-mode differentiation of the tree).
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text,
                          std::span<const std::string> variables);

  double evaluate(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  std::size_t arity() const { return arity_; }
  const std::string& text() const { return text_; }

  ScalarFunction as_function() const;

 private:
  std::shared_ptr<const Node> root_;
  std::size_t arity_ = 0;
  std::string text_;
};

/// Component-wise vector map built from expressions sharing one variable list.
class ExpressionMap {
 public:
  static ExpressionMap parse(std::span<const std::string> components,
                             std::span<const std::string> variables);

  Vector evaluate(const Vector& x) const;
  Matrix jacobian(const Vector& x) const;
  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return components_.size(); }

 private:
  std::vector<Expression> components_;
  std::size_t input_dim_ = 0;
};

/// Variable names `prefix1 .. prefixN`.
std::vector<std::string> indexed_names(std::string_view prefix, std::size_t n);

}  // namespace dbracket
