#pragma once

#include "mwf/expr/poly.hpp"

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mwf::expr {

enum class Node : std::uint8_t { Number, Variable, Constant, Neg, Add, Sub, Mul, Div, Pow, Call, Opaque };

/// Immutable expression tree as written by a user. Copies share structure.
class ScalarExpr {
 public:
  ScalarExpr();  // the number 0

  static ScalarExpr number(const Rational& value);
  static ScalarExpr variable(std::string name);
  static ScalarExpr constant(std::string name);
  static ScalarExpr neg(ScalarExpr a);
  static ScalarExpr add(ScalarExpr a, ScalarExpr b);
  static ScalarExpr sub(ScalarExpr a, ScalarExpr b);
  static ScalarExpr mul(ScalarExpr a, ScalarExpr b);
  static ScalarExpr div(ScalarExpr a, ScalarExpr b);
  static ScalarExpr pow(ScalarExpr base, int exponent);
  static ScalarExpr call(Fn f, ScalarExpr arg);
  static ScalarExpr opaque(std::string name, std::vector<ScalarExpr> args, std::vector<int> tags = {});

  Node kind() const;
  const Rational& value() const;       // Number
  const std::string& name() const;     // Variable, Constant, Opaque
  Fn fn() const;                       // Call
  int exponent() const;                // Pow
  std::span<const ScalarExpr> children() const;
  const std::vector<int>& tags() const;  // Opaque

  friend bool operator==(const ScalarExpr& a, const ScalarExpr& b);

  struct Impl;

 private:
  explicit ScalarExpr(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

using NormalForm = Poly;

std::string print(const ScalarExpr& e);
std::ostream& operator<<(std::ostream& os, const ScalarExpr& e);

/// Canonical sum-of-products form; idempotent up to to_expr/normalize round trips.
NormalForm normalize(const ScalarExpr& e);

/// Canonical tree for a normal form (what gets printed).
ScalarExpr to_expr(const Poly& p);

std::string print(const Poly& p);
std::ostream& operator<<(std::ostream& os, const Poly& p);

/// Partial derivative, returned in canonical form.
ScalarExpr diff(const ScalarExpr& e, std::string_view var);

/// Evaluates the tree directly (no normalization).
double eval(const ScalarExpr& e, const Bindings& b);
double eval(const ScalarExpr& e, const Bindings& point, const Bindings& consts);

enum class ZeroStatus : std::uint8_t { ProvenZero, ProvenNonzero, Unknown };

std::string_view to_string(ZeroStatus s);

/// ProvenZero iff the normal form is literally 0. ProvenNonzero needs a sample
/// point with |value| > 1e-9 and no opaque symbols present. Otherwise Unknown.
ZeroStatus is_zero(const Poly& p);
ZeroStatus is_zero(const ScalarExpr& e);

/// Points used by is_zero; exposed so tests can cross-check verdicts.
std::vector<Bindings> sample_points(const Poly& p);

}  // namespace mwf::expr
