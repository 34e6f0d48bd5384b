#pragma once

#include "mwf/expr/expr.hpp"
#include "mwf/expr/parse.hpp"
#include "mwf/forms/chart.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwf {

using expr::Poly;
using expr::ZeroStatus;

/// Increasing multi-index stored as a bit set of coordinate positions (n <= 4).
using Basis = std::uint8_t;

std::vector<int> basis_indices(Basis b);
/// Throws std::invalid_argument unless `indices` is strictly increasing and below `n`.
Basis basis_from_indices(const std::vector<int>& indices, int n);
int basis_degree(Basis b);

/// Lexicographic order of the index lists, so dx1^dx2 < dx1^dx3 < dx2^dx3.
struct BasisOrder {
  bool operator()(Basis a, Basis b) const noexcept;
};

class ChartMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Differential k-form on a flat chart. Degree n+1 is reserved for the zero
/// form produced by d of a top form or a wedge that overflows the dimension.
class DifferentialForm {
 public:
  using Terms = std::map<Basis, Poly, BasisOrder>;

  DifferentialForm(Chart chart, int degree);

  static DifferentialForm scalar(Chart chart, Poly value);
  static DifferentialForm basis(Chart chart, const std::vector<int>& indices, Poly coeff = Poly(1));
  static DifferentialForm volume(Chart chart);

  const Chart& chart() const noexcept { return chart_; }
  int degree() const noexcept { return degree_; }
  int dimension() const noexcept { return chart_.dimension(); }
  bool beyond_top() const noexcept { return degree_ > chart_.dimension(); }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Poly coeff(Basis b) const;
  Poly coeff(std::initializer_list<int> indices) const;
  /// Coefficient of a 0-form; for other degrees the only term if the form is top degree.
  Poly scalar_value() const;

  /// Adds `value` to the coefficient of `b`, dropping the entry if it cancels.
  void add_term(Basis b, const Poly& value);

  DifferentialForm map_coefficients(const std::function<Poly(const Poly&)>& f) const;

  friend DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator-(const DifferentialForm& a);
  friend DifferentialForm operator*(const Poly& s, const DifferentialForm& w);
  friend DifferentialForm operator*(const DifferentialForm& w, const Poly& s) { return s * w; }
  friend bool operator==(const DifferentialForm& a, const DifferentialForm& b);

 private:
  Chart chart_;
  int degree_;
  Terms terms_;
};

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm ext_d(const DifferentialForm& w);
DifferentialForm hodge(const DifferentialForm& w);
/// Codifferential taken literally as hodge(ext_d(hodge(w))), with no degree-dependent sign.
DifferentialForm codiff(const DifferentialForm& w);
/// dδ - δd for degree >= 1; the classical sum of second partials for 0-forms. Euclidean3 only.
DifferentialForm laplacian(const DifferentialForm& w);
/// Derivative of every coefficient with respect to t. Euclidean3 only.
DifferentialForm time_partial(const DifferentialForm& w);
DifferentialForm partial(const DifferentialForm& w, std::string_view var);

/// g(alpha, beta) for forms of equal degree with the chart's diagonal metric.
Poly inner_product(const DifferentialForm& a, const DifferentialForm& b);

/// Coefficient substitution (e.g. x0 -> c*t); bases are untouched.
DifferentialForm substitute(const DifferentialForm& w, const expr::Substitution& s);
/// ProvenZero iff every coefficient is; ProvenNonzero if any coefficient is; otherwise Unknown.
ZeroStatus zero_status(const DifferentialForm& w);

/// Square matrix acting on chart coordinates: x_i -> sum_j m(i,j) x_j.
class LinearMap {
 public:
  explicit LinearMap(int n);
  static LinearMap identity(int n);
  /// Boost with rapidity zeta along coordinate x1 of Minkowski4.
  static LinearMap boost(const Rational& zeta);
  static LinearMap boost(const Poly& zeta);

  int size() const noexcept { return n_; }
  const Poly& operator()(int i, int j) const { return m_[static_cast<std::size_t>(i * n_ + j)]; }
  Poly& operator()(int i, int j) { return m_[static_cast<std::size_t>(i * n_ + j)]; }
  Poly determinant() const;

  friend LinearMap operator*(const LinearMap& a, const LinearMap& b);

 private:
  int n_;
  std::vector<Poly> m_;
};

class SingularMap : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pullback along x -> L x. Throws SingularMap unless det L is ProvenNonzero.
DifferentialForm pullback_linear(const DifferentialForm& w, const LinearMap& L);

/// Text form used by the CLI: "x2 dx1 + x1 dx2", "-1 dx2^dx3", "0".
std::string basis_name(const Chart& chart, Basis b);
std::string print(const DifferentialForm& w);
std::ostream& operator<<(std::ostream& os, const DifferentialForm& w);

/// Form literal: coefficients in the expression grammar, `dxN` basis covectors,
/// `^` between forms for wedge and juxtaposition for multiplication.
DifferentialForm parse_form(std::string_view text, const expr::ParseContext& ctx);
DifferentialForm parse_form(std::string_view text, const Chart& chart);

}  // namespace mwf
