#include "mwf/dec/complex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace mwf::dec {

void Csr::push_row(std::size_t r, const std::vector<std::pair<std::uint32_t, int>>& entries) {
  if (r + 1 != row_ptr_.size()) throw std::logic_error("Csr rows must be pushed in order");
  std::map<std::uint32_t, int> merged;
  for (const auto& [c, v] : entries) merged[c] += v;
  for (const auto& [c, v] : merged) {
    if (v == 0) continue;
    col_.push_back(c);
    val_.push_back(v);
  }
  row_ptr_.push_back(col_.size());
}

Csr Csr::transpose() const {
  Csr t(cols_, rows_);
  std::vector<std::size_t> counts(cols_ + 1, 0);
  for (std::uint32_t c : col_) ++counts[c + 1];
  for (std::size_t i = 0; i < cols_; ++i) counts[i + 1] += counts[i];
  t.row_ptr_ = counts;
  t.col_.resize(col_.size());
  t.val_.resize(val_.size());
  std::vector<std::size_t> next(counts.begin(), counts.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      const std::size_t dst = next[col_[p]]++;
      t.col_[dst] = static_cast<std::uint32_t>(r);
      t.val_[dst] = val_[p];
    }
  }
  return t;
}

void Csr::apply(const std::vector<double>& x, std::vector<double>& y) const {
  if (x.size() != cols_) throw std::invalid_argument("Csr::apply: size mismatch");
  y.assign(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += val_[p] * x[col_[p]];
    y[r] = s;
  }
}

std::vector<double> Csr::apply(const std::vector<double>& x) const {
  std::vector<double> y;
  apply(x, y);
  return y;
}

Csr operator*(const Csr& a, const Csr& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("Csr product: size mismatch");
  Csr out(a.rows_, b.cols_);
  std::vector<std::pair<std::uint32_t, int>> row;
  for (std::size_t r = 0; r < a.rows_; ++r) {
    row.clear();
    for (std::size_t p = a.row_ptr_[r]; p < a.row_ptr_[r + 1]; ++p) {
      const std::size_t m = a.col_[p];
      for (std::size_t q = b.row_ptr_[m]; q < b.row_ptr_[m + 1]; ++q) row.emplace_back(b.col_[q], a.val_[p] * b.val_[q]);
    }
    out.push_row(r, row);
  }
  return out;
}

std::int64_t Csr::max_abs() const {
  std::int64_t m = 0;
  for (std::int32_t v : val_) m = std::max<std::int64_t>(m, std::abs(v));
  return m;
}

std::int32_t Csr::at(std::size_t r, std::size_t c) const {
  for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
    if (col_[p] == c) return val_[p];
  }
  return 0;
}

Complex::Complex(Dims dims, double h) : dims_(dims), h_(h) {
  for (int d : dims) {
    if (d < 4) throw ComplexError("every grid dimension must be at least 4, got " + std::to_string(d));
  }
  if (!(h > 0) || !std::isfinite(h)) throw ComplexError("grid spacing must be positive");
  n_ = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];

  using Row = std::vector<std::pair<std::uint32_t, int>>;
  auto id = [](std::size_t x) { return static_cast<std::uint32_t>(x); };

  d0_ = Csr(edges(), vertices());
  for (int a = 0; a < 3; ++a) {
    for (std::size_t v = 0; v < n_; ++v) d0_.push_row(a * n_ + v, Row{{id(shift(v, a)), 1}, {id(v), -1}});
  }

  d1_ = Csr(faces(), edges());
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    for (std::size_t v = 0; v < n_; ++v) {
      d1_.push_row(a * n_ + v, Row{{id(b * n_ + v), 1},
                                   {id(c * n_ + shift(v, b)), 1},
                                   {id(b * n_ + shift(v, c)), -1},
                                   {id(c * n_ + v), -1}});
    }
  }

  d2_ = Csr(volumes(), faces());
  for (std::size_t v = 0; v < n_; ++v) {
    Row row;
    for (int a = 0; a < 3; ++a) {
      row.emplace_back(id(a * n_ + shift(v, a)), 1);
      row.emplace_back(id(a * n_ + v), -1);
    }
    d2_.push_row(v, row);
  }

  d0t_ = d0_.transpose();
  d1t_ = d1_.transpose();
}

std::size_t Complex::cells(int degree) const {
  switch (degree) {
    case 0: return vertices();
    case 1: return edges();
    case 2: return faces();
    case 3: return volumes();
    default: throw ComplexError("cochain degree must be 0..3");
  }
}

std::size_t Complex::vertex(int i, int j, int k) const {
  auto wrap = [](int x, int n) { return ((x % n) + n) % n; };
  return static_cast<std::size_t>(wrap(i, dims_[0])) +
         static_cast<std::size_t>(dims_[0]) *
             (static_cast<std::size_t>(wrap(j, dims_[1])) + static_cast<std::size_t>(dims_[1]) * wrap(k, dims_[2]));
}

std::array<int, 3> Complex::position(std::size_t v) const {
  const int i = static_cast<int>(v % dims_[0]);
  const std::size_t rest = v / dims_[0];
  return {i, static_cast<int>(rest % dims_[1]), static_cast<int>(rest / dims_[1])};
}

std::size_t Complex::shift(std::size_t v, int axis, int step) const {
  std::array<int, 3> p = position(v);
  p[axis] += step;
  return vertex(p[0], p[1], p[2]);
}

Point Complex::center(int degree, std::size_t cell) const {
  const std::size_t v = cell % n_;
  const int a = static_cast<int>(cell / n_);
  const std::array<int, 3> p = position(v);
  Point x{p[0] * h_, p[1] * h_, p[2] * h_};
  switch (degree) {
    case 0: break;
    case 1: x[a] += 0.5 * h_; break;
    case 2:
      x[(a + 1) % 3] += 0.5 * h_;
      x[(a + 2) % 3] += 0.5 * h_;
      break;
    case 3:
      for (double& xi : x) xi += 0.5 * h_;
      break;
    default: throw ComplexError("cochain degree must be 0..3");
  }
  return x;
}

std::vector<double> sample(const Complex& k, int degree, const VectorField& field) {
  if (degree != 1 && degree != 2) throw ComplexError("vector fields sample onto edges or faces");
  const double measure = degree == 1 ? k.h() : k.h() * k.h();
  std::vector<double> out(k.cells(degree));
  for (std::size_t cell = 0; cell < out.size(); ++cell) {
    const int a = static_cast<int>(cell / k.n());
    out[cell] = field[a] ? measure * field[a](k.center(degree, cell)) : 0.0;
  }
  return out;
}

std::vector<double> sample(const Complex& k, int degree, const ScalarField& field) {
  if (degree != 0 && degree != 3) throw ComplexError("scalar fields sample onto vertices or volumes");
  const double measure = degree == 0 ? 1.0 : k.h() * k.h() * k.h();
  std::vector<double> out(k.cells(degree));
  for (std::size_t cell = 0; cell < out.size(); ++cell) out[cell] = measure * field(k.center(degree, cell));
  return out;
}

std::vector<double> sample_form(const Complex& k, const DifferentialForm& w, double t,
                                const expr::Bindings& constants) {
  if (!(w.chart() == Chart::euclidean3())) throw ChartMismatch("only euclidean3 forms can be sampled");
  auto scalar = [&](const Poly& p) -> ScalarField {
    if (p.is_zero()) return {};
    return [p, t, &constants](const Point& x) {
      expr::Bindings b = constants;
      b.values["x1"] = x[0];
      b.values["x2"] = x[1];
      b.values["x3"] = x[2];
      b.values["t"] = t;
      return expr::evaluate(p, b);
    };
  };
  auto zero_if_empty = [](ScalarField f) -> ScalarField {
    if (f) return f;
    return [](const Point&) { return 0.0; };
  };
  switch (w.degree()) {
    case 0: return sample(k, 0, zero_if_empty(scalar(w.scalar_value())));
    case 1: return sample(k, 1, VectorField{scalar(w.coeff({0})), scalar(w.coeff({1})), scalar(w.coeff({2}))});
    case 2:
      // Faces are oriented dx2^dx3, dx3^dx1, dx1^dx2.
      return sample(k, 2, VectorField{scalar(w.coeff({1, 2})), scalar(-w.coeff({0, 2})), scalar(w.coeff({0, 1}))});
    case 3: return sample(k, 3, zero_if_empty(scalar(w.coeff({0, 1, 2}))));
    default: throw DegreeError("cannot sample a form beyond top degree");
  }
}

}  // namespace mwf::dec
