#pragma once

// Periodic uniform cubical complex and its signed incidence matrices.
//
// Cell numbering with N = Nx Ny Nz and v = i + Nx (j + Ny k):
//   vertex v;  edge a*N + v from v to v + e_a;
//   face a*N + v spanning the two other axes in cyclic order (yz, zx, xy) at corner v;
//   volume v with corner v.

#include "mwf/forms/form.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace mwf::dec {

/// Compressed sparse rows with small integer entries.
class Csr {
 public:
  Csr() = default;
  Csr(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) { row_ptr_.reserve(rows + 1); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzeros() const noexcept { return col_.size(); }

  /// Appends row `r`; rows must be added in order.
  void push_row(std::size_t r, const std::vector<std::pair<std::uint32_t, int>>& entries);

  const std::vector<std::size_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<std::uint32_t>& col() const noexcept { return col_; }
  const std::vector<std::int32_t>& val() const noexcept { return val_; }

  Csr transpose() const;
  /// y = A x.
  void apply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> apply(const std::vector<double>& x) const;
  /// Exact integer product.
  friend Csr operator*(const Csr& a, const Csr& b);
  /// Largest |entry|; 0 for the zero matrix.
  std::int64_t max_abs() const;
  std::int32_t at(std::size_t r, std::size_t c) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_;
  std::vector<std::int32_t> val_;
};

class ComplexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Dims = std::array<int, 3>;
using Point = std::array<double, 3>;

class Complex {
 public:
  /// Throws ComplexError unless every dimension is >= 4 and h > 0.
  Complex(Dims dims, double h);

  const Dims& dims() const noexcept { return dims_; }
  double h() const noexcept { return h_; }
  std::size_t n() const noexcept { return n_; }

  std::size_t vertices() const noexcept { return n_; }
  std::size_t edges() const noexcept { return 3 * n_; }
  std::size_t faces() const noexcept { return 3 * n_; }
  std::size_t volumes() const noexcept { return n_; }
  std::size_t cells(int degree) const;

  std::size_t vertex(int i, int j, int k) const;
  std::array<int, 3> position(std::size_t v) const;
  /// Vertex one step along `axis` (periodic); step may be negative.
  std::size_t shift(std::size_t v, int axis, int step = 1) const;

  /// Center of a k-cell in physical coordinates (the cell's corner is at integer multiples of h).
  Point center(int degree, std::size_t cell) const;

  const Csr& d0() const noexcept { return d0_; }
  const Csr& d1() const noexcept { return d1_; }
  const Csr& d2() const noexcept { return d2_; }
  const Csr& d0t() const noexcept { return d0t_; }
  const Csr& d1t() const noexcept { return d1t_; }

  /// Diagonal Hodge weights (dual measure / primal measure): h for edges, 1/h for faces.
  double hodge1() const noexcept { return h_; }
  double hodge2() const noexcept { return 1.0 / h_; }

 private:
  Dims dims_;
  double h_;
  std::size_t n_;
  Csr d0_, d1_, d2_, d0t_, d1t_;
};

/// Scalar or vector field given by closed-form component functions of position.
using ScalarField = std::function<double(const Point&)>;
using VectorField = std::array<ScalarField, 3>;

/// Midpoint rule: value at the cell center times the cell measure.
/// Degree 1 takes the component along the edge, degree 2 the component normal to the face.
std::vector<double> sample(const Complex& k, int degree, const VectorField& field);
std::vector<double> sample(const Complex& k, int degree, const ScalarField& field);

/// De Rham map of a symbolic Euclidean3 form at time t; `constants` binds c, eps0 and friends.
std::vector<double> sample_form(const Complex& k, const DifferentialForm& w, double t,
                                const expr::Bindings& constants = {});

}  // namespace mwf::dec
