#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace asymint {

/// Scalar function of t built from numbers, t, + - * / ^, exp, log, sin, cos, abs.
class FunctionExpr {
 public:
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Sin, Cos, Abs };

  struct Node {
    Kind kind;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  /// The constant zero.
  FunctionExpr();

  [[nodiscard]] static FunctionExpr parse(std::string_view text);
  [[nodiscard]] static FunctionExpr constant(double value);

  /// Throws DomainError or Overflow instead of returning a non-finite value.
  [[nodiscard]] double operator()(double t) const;

  /// Fully parenthesised text that parses back to the same tree.
  [[nodiscard]] std::string to_string() const;
  /// Tree form such as Mul(0.001, Exp(Neg(t))).
  [[nodiscard]] std::string structure() const;

  [[nodiscard]] const std::string& source() const noexcept { return source_; }
  [[nodiscard]] const Node& root() const noexcept { return *root_; }
  /// True when the tree is a literal 0.
  [[nodiscard]] bool is_zero() const noexcept;

 private:
  FunctionExpr(std::shared_ptr<const Node> root, std::string source);
  std::shared_ptr<const Node> root_;
  std::string source_;
};

[[nodiscard]] inline FunctionExpr parse(std::string_view text) { return FunctionExpr::parse(text); }
[[nodiscard]] inline double eval(const FunctionExpr& e, double t) { return e(t); }
[[nodiscard]] bool same_structure(const FunctionExpr& a, const FunctionExpr& b);

}  // namespace asymint
