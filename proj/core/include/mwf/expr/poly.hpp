#pragma once

// Canonical (normal-form) representation of scalar expressions.
//
// A Poly is a finite sum of rational multiples of monomials; a monomial is a
// product of atoms raised to nonzero integer powers. Atoms are coordinate
// variables, named constants, elementary functions of a normalized argument,
// opaque function symbols carrying partial-derivative tags, and reciprocals of
// sums. Every Poly is kept reduced under these rewrites:
//
//   mu0            -> 1 / (c^2 eps0)             (so c^2 mu0 eps0 = 1)
//   cos(u)^n, n>=2 -> cos(u)^(n-2) (1 - sin(u)^2)
//   cosh(u)^n, n>=2-> cosh(u)^(n-2) (1 + sinh(u)^2)
//   exp(a) exp(b)  -> exp(a + b)
//   f(-u)          -> -f(u) for sin/sinh,  f(u) for cos/cosh
//   f(0)           -> its value
//
// Every rewrite is a true identity, so two Polys that compare equal denote the
// same function. The converse does not hold in general.

#include "mwf/expr/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mwf::expr {

enum class Fn : std::uint8_t { Sin, Cos, Exp, Sinh, Cosh };

std::string_view fn_name(Fn f);
std::optional<Fn> fn_from_name(std::string_view name);

enum class AtomKind : std::uint8_t { Variable, Constant, Function, Opaque, Reciprocal };

class Atom;
using AtomRef = std::shared_ptr<const Atom>;

struct Factor {
  AtomRef atom;
  int exponent = 1;
};

using Monomial = std::vector<Factor>;

class Poly;

struct Term {
  Monomial mono;
  Rational coeff;
};

/// Bit assigned to each coordinate variable; used for cheap dependency checks.
unsigned variable_bit(std::string_view name);

class Poly {
 public:
  Poly() = default;
  Poly(const Rational& value);  // NOLINT(google-explicit-constructor)
  Poly(long value) : Poly(Rational(value)) {}  // NOLINT(google-explicit-constructor)
  Poly(int value) : Poly(Rational(value)) {}   // NOLINT(google-explicit-constructor)

  static Poly variable(std::string_view name);
  /// Named constant. `mu0` is eliminated in favour of 1/(c^2 eps0).
  static Poly constant(std::string_view name);
  static Poly function(Fn f, const Poly& arg);
  /// Opaque symbol name(args...) differentiated `tags[p]` times in argument p.
  static Poly opaque(std::string name, std::vector<Poly> args, std::vector<int> tags = {});
  static Poly reciprocal(const Poly& p);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::optional<Rational> as_rational() const;
  bool has_opaque() const;
  bool depends_on(std::string_view var) const;
  unsigned variable_mask() const;

  Poly pow(int n) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator/(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);

  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  friend bool operator==(const Poly& a, const Poly& b);
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b);

  /// Builds directly from already-reduced terms in canonical order.
  static Poly from_sorted_terms(std::vector<Term> terms);

 private:
  std::vector<Term> terms_;
};

class Atom {
 public:
  AtomKind kind = AtomKind::Variable;
  std::string name;        // variable / constant / opaque name
  Fn fn = Fn::Sin;         // Function only
  std::vector<Poly> args;  // Function: 1 arg; Opaque: declared args; Reciprocal: the denominator
  std::vector<int> tags;   // Opaque only: derivative count per argument position
  unsigned var_mask = 0;
  bool contains_opaque = false;
};

int compare_atoms(const Atom& a, const Atom& b);
int compare_monomials(const Monomial& a, const Monomial& b);

/// Partial derivative with respect to a coordinate variable.
Poly diff(const Poly& p, std::string_view var);

using Substitution = std::map<std::string, Poly, std::less<>>;
Poly substitute(const Poly& p, const Substitution& s);

/// Numeric bindings for evaluation. Coordinates and constants share one map.
struct Bindings {
  std::map<std::string, double, std::less<>> values;
};

/// IEEE evaluation. Throws EvalError for unbound names, opaque symbols or singular points.
double evaluate(const Poly& p, const Bindings& b);

/// Sum of |term| at the point; the natural scale against which round-off in evaluate() is judged.
double evaluate_magnitude(const Poly& p, const Bindings& b);

}  // namespace mwf::expr
