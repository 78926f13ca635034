// SPDX-License-Identifier: MIT
/**
 * @file expr.hpp
 * @brief Scalar expression language for metric components, connection
 *        coefficients and potentials.
 *
 * Grammar (whitespace insignificant):
 *
 *     expr   := term (('+' | '-') term)*
 *     term   := unary (('*' | '/') unary)*
 *     unary  := '-' unary | power
 *     power  := atom ('^' ['-'] number)?
 *     atom   := number | name | name '(' expr ')' | '(' expr ')'
 *
 * so '^' binds tighter than unary minus ("-u^2" is -(u^2)). Function names
 * (sin cos exp log sqrt tanh) are reserved; every other name must be one of
 * the declared coordinates. Numbers are decimal with an optional exponent.
 */
#pragma once

#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hessborn/jet.hpp"

namespace hessborn {

/// Malformed expression text; `offset` is the byte offset of the problem.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left a function's domain; `offset` locates the failing node.
class EvalDomainError : public std::domain_error {
 public:
  EvalDomainError(const std::string& what, std::size_t offset)
      : std::domain_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

enum class Func { Sin, Cos, Exp, Log, Sqrt, Tanh };

struct ExprNode {
  enum class Kind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
  Kind kind;
  std::size_t offset = 0;
  double number = 0.0;  // Constant value or Pow exponent
  int variable = -1;
  Func func = Func::Sin;
  std::shared_ptr<const ExprNode> lhs, rhs;
};

/// Immutable parsed expression over a fixed coordinate list.
class Expr {
 public:
  Expr() = default;

  static Expr parse(std::string_view text, std::span<const std::string> coords);
  static Expr constant(double c, int dimension);
  /// (a + b) * 0.5, used to symmetrize component grids.
  static Expr average(const Expr& a, const Expr& b);

  double evaluate(std::span<const double> args) const;
  Jet evaluate(std::span<const Jet> args) const;

  std::set<int> free_coordinates() const;
  /// Fully parenthesized rendering; parse(to_string()) reproduces the tree.
  std::string to_string() const;
  /// True for a literal zero (possibly negated/parenthesized).
  bool is_literal_zero() const;

  int dimension() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coordinates() const { return coords_; }
  const std::string& source() const { return source_; }
  bool empty() const { return root_ == nullptr; }

 private:
  std::shared_ptr<const ExprNode> root_;
  std::vector<std::string> coords_;
  std::string source_;
};

/// Validates a coordinate list: non-empty, distinct, [A-Za-z][A-Za-z0-9_]*,
/// and disjoint from the reserved function names. Throws std::invalid_argument.
void validate_coordinate_names(std::span<const std::string> coords);

bool is_reserved_function(std::string_view name);

}  // namespace hessborn
