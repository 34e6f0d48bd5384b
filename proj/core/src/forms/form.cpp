#include "mwf/forms/form.hpp"

#include "mwf/expr/errors.hpp"
#include "mwf/expr/parser.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <ostream>

namespace mwf {

std::vector<int> basis_indices(Basis b) {
  std::vector<int> out;
  for (int i = 0; i < 8; ++i) {
    if (b & (1u << i)) out.push_back(i);
  }
  return out;
}

Basis basis_from_indices(const std::vector<int>& indices, int n) {
  Basis b = 0;
  int prev = -1;
  for (int i : indices) {
    if (i <= prev || i >= n) throw std::invalid_argument("basis indices must be strictly increasing and below the dimension");
    b = static_cast<Basis>(b | (1u << i));
    prev = i;
  }
  return b;
}

int basis_degree(Basis b) { return std::popcount(static_cast<unsigned>(b)); }

bool BasisOrder::operator()(Basis a, Basis b) const noexcept {
  unsigned x = a;
  unsigned y = b;
  while (x != 0 && y != 0) {
    const int i = std::countr_zero(x);
    const int j = std::countr_zero(y);
    if (i != j) return i < j;
    x &= x - 1;
    y &= y - 1;
  }
  return x == 0 && y != 0;
}

namespace {

int mask_of(int n) { return (1 << n) - 1; }

// (-1)^(number of pairs i in a, j in b with i > j): the sign of sorting a then b.
int merge_sign(Basis a, Basis b) {
  int inversions = 0;
  for (int j : basis_indices(b)) inversions += std::popcount(static_cast<unsigned>(a) >> (j + 1));
  return (inversions % 2) ? -1 : 1;
}

void require_same_chart(const DifferentialForm& a, const DifferentialForm& b, const char* op) {
  if (!(a.chart() == b.chart())) throw ChartMismatch(std::string(op) + ": forms live on different charts");
}

}  // namespace

DifferentialForm::DifferentialForm(Chart chart, int degree) : chart_(chart), degree_(degree) {
  if (degree < 0 || degree > chart.dimension() + 1) throw DegreeError("form degree out of range");
}

DifferentialForm DifferentialForm::scalar(Chart chart, Poly value) {
  DifferentialForm w(chart, 0);
  w.add_term(0, value);
  return w;
}

DifferentialForm DifferentialForm::basis(Chart chart, const std::vector<int>& indices, Poly coeff) {
  DifferentialForm w(chart, static_cast<int>(indices.size()));
  w.add_term(basis_from_indices(indices, chart.dimension()), coeff);
  return w;
}

DifferentialForm DifferentialForm::volume(Chart chart) {
  DifferentialForm w(chart, chart.dimension());
  w.add_term(static_cast<Basis>(mask_of(chart.dimension())), Poly(1));
  return w;
}

Poly DifferentialForm::coeff(Basis b) const {
  auto it = terms_.find(b);
  return it == terms_.end() ? Poly() : it->second;
}

Poly DifferentialForm::coeff(std::initializer_list<int> indices) const {
  return coeff(basis_from_indices(std::vector<int>(indices), dimension()));
}

Poly DifferentialForm::scalar_value() const {
  if (degree_ == 0) return coeff(Basis{0});
  if (degree_ == dimension()) return coeff(static_cast<Basis>(mask_of(dimension())));
  throw DegreeError("scalar_value needs a 0-form or a top-degree form");
}

void DifferentialForm::add_term(Basis b, const Poly& value) {
  if (basis_degree(b) != degree_ || b > mask_of(dimension())) throw DegreeError("basis does not match form degree");
  if (value.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(b, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DifferentialForm DifferentialForm::map_coefficients(const std::function<Poly(const Poly&)>& f) const {
  DifferentialForm out(chart_, degree_);
  for (const auto& [b, p] : terms_) out.add_term(b, f(p));
  return out;
}

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
  require_same_chart(a, b, "+");
  if (a.degree_ != b.degree_) throw DegreeError("cannot add forms of different degree");
  DifferentialForm out = a;
  for (const auto& [basis, p] : b.terms_) out.add_term(basis, p);
  return out;
}

DifferentialForm operator-(const DifferentialForm& a) {
  return a.map_coefficients([](const Poly& p) { return -p; });
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) { return a + (-b); }

DifferentialForm operator*(const Poly& s, const DifferentialForm& w) {
  return w.map_coefficients([&s](const Poly& p) { return s * p; });
}

bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
  if (!(a.chart_ == b.chart_) || a.degree_ != b.degree_ || a.terms_.size() != b.terms_.size()) return false;
  return std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first && x.second == y.second; });
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  require_same_chart(a, b, "wedge");
  const int n = a.dimension();
  const int degree = std::min(a.degree() + b.degree(), n + 1);
  DifferentialForm out(a.chart(), degree);
  if (degree > n) return out;
  for (const auto& [ba, pa] : a.terms()) {
    for (const auto& [bb, pb] : b.terms()) {
      if (ba & bb) continue;
      const Poly product = pa * pb;
      out.add_term(static_cast<Basis>(ba | bb), merge_sign(ba, bb) < 0 ? -product : product);
    }
  }
  return out;
}

DifferentialForm ext_d(const DifferentialForm& w) {
  const int n = w.dimension();
  DifferentialForm out(w.chart(), std::min(w.degree() + 1, n + 1));
  if (w.degree() >= n) return out;
  for (const auto& [b, p] : w.terms()) {
    for (int j = 0; j < n; ++j) {
      if (b & (1u << j)) continue;
      const Poly dp = expr::diff(p, w.chart().coordinate(j));
      if (dp.is_zero()) continue;
      const int before = std::popcount(static_cast<unsigned>(b) & ((1u << j) - 1));
      out.add_term(static_cast<Basis>(b | (1u << j)), before % 2 ? -dp : dp);
    }
  }
  return out;
}

namespace {

struct StarImage {
  Basis target;
  int sign;
};

// Indexed by basis mask. Euclidean3: bit i is dx^(i+1); orientation dx1^dx2^dx3.
constexpr std::array<StarImage, 8> kStar3 = {{
    {7, 1},   // *1 = dx1^dx2^dx3
    {6, 1},   // *dx1 = dx2^dx3
    {5, -1},  // *dx2 = dx3^dx1
    {4, 1},   // *(dx1^dx2) = dx3
    {3, 1},   // *dx3 = dx1^dx2
    {2, -1},  // *(dx3^dx1) = dx2
    {1, 1},   // *(dx2^dx3) = dx1
    {0, 1},   // *(dx1^dx2^dx3) = 1
}};

// Minkowski4, bit i is dx^i, metric diag(+,-,-,-).
constexpr std::array<StarImage, 16> kStar4 = {{
    {15, 1},   // *1 = dx0^dx1^dx2^dx3
    {14, 1},   // *dx0 = dx1^dx2^dx3
    {13, 1},   // *dx1 = dx0^dx2^dx3
    {12, -1},  // *(dx0^dx1) = -dx2^dx3
    {11, -1},  // *dx2 = dx0^dx3^dx1
    {10, 1},   // *(dx0^dx2) = -dx3^dx1
    {9, 1},    // *(dx1^dx2) = dx0^dx3
    {8, 1},    // *(dx0^dx1^dx2) = dx3
    {7, 1},    // *dx3 = dx0^dx1^dx2
    {6, -1},   // *(dx0^dx3) = -dx1^dx2
    {5, -1},   // *(dx3^dx1) = dx0^dx2
    {4, -1},   // *(dx0^dx3^dx1) = dx2
    {3, 1},    // *(dx2^dx3) = dx0^dx1
    {2, 1},    // *(dx0^dx2^dx3) = dx1
    {1, 1},    // *(dx1^dx2^dx3) = dx0
    {0, -1},   // *(dx0^dx1^dx2^dx3) = -1
}};

StarImage star_of(const Chart& chart, Basis b) {
  return chart.signature() == Signature::Euclidean3 ? kStar3[b] : kStar4[b];
}

}  // namespace

DifferentialForm hodge(const DifferentialForm& w) {
  if (w.beyond_top()) throw DegreeError("hodge star of a form beyond top degree");
  DifferentialForm out(w.chart(), w.dimension() - w.degree());
  for (const auto& [b, p] : w.terms()) {
    const StarImage img = star_of(w.chart(), b);
    out.add_term(img.target, img.sign < 0 ? -p : p);
  }
  return out;
}

DifferentialForm codiff(const DifferentialForm& w) {
  if (w.degree() == 0) throw DegreeError("codifferential of a 0-form");
  if (w.beyond_top()) return DifferentialForm(w.chart(), w.dimension());
  return hodge(ext_d(hodge(w)));
}

DifferentialForm laplacian(const DifferentialForm& w) {
  if (w.chart().signature() != Signature::Euclidean3) throw ChartMismatch("laplacian requires the euclidean3 chart");
  if (w.degree() == 0) {
    DifferentialForm out(w.chart(), 0);
    for (int i = 0; i < w.dimension(); ++i) {
      const std::string x = w.chart().coordinate(i);
      out = out + partial(partial(w, x), x);
    }
    return out;
  }
  return ext_d(codiff(w)) - codiff(ext_d(w));
}

DifferentialForm partial(const DifferentialForm& w, std::string_view var) {
  return w.map_coefficients([var](const Poly& p) { return expr::diff(p, var); });
}

DifferentialForm time_partial(const DifferentialForm& w) {
  if (w.chart().signature() != Signature::Euclidean3) throw ChartMismatch("time derivative requires the euclidean3 chart");
  return partial(w, "t");
}

Poly inner_product(const DifferentialForm& a, const DifferentialForm& b) {
  require_same_chart(a, b, "inner product");
  if (a.degree() != b.degree()) throw DegreeError("inner product of forms of different degree");
  Poly sum;
  for (const auto& [basis, pa] : a.terms()) {
    const Poly pb = b.coeff(basis);
    if (pb.is_zero()) continue;
    int sign = 1;
    for (int i : basis_indices(basis)) sign *= a.chart().metric_sign(i);
    sum += sign < 0 ? -(pa * pb) : pa * pb;
  }
  return sum;
}

DifferentialForm substitute(const DifferentialForm& w, const expr::Substitution& s) {
  return w.map_coefficients([&s](const Poly& p) { return expr::substitute(p, s); });
}

ZeroStatus zero_status(const DifferentialForm& w) {
  bool unknown = false;
  for (const auto& [b, p] : w.terms()) {
    const ZeroStatus s = expr::is_zero(p);
    if (s == ZeroStatus::ProvenNonzero) return s;
    if (s == ZeroStatus::Unknown) unknown = true;
  }
  return unknown ? ZeroStatus::Unknown : ZeroStatus::ProvenZero;
}

// ---------------------------------------------------------------------------

LinearMap::LinearMap(int n) : n_(n), m_(static_cast<std::size_t>(n * n)) {}

LinearMap LinearMap::identity(int n) {
  LinearMap m(n);
  for (int i = 0; i < n; ++i) m(i, i) = Poly(1);
  return m;
}

LinearMap LinearMap::boost(const Rational& zeta) { return boost(Poly(zeta)); }

LinearMap LinearMap::boost(const Poly& zeta) {
  LinearMap m = identity(4);
  const Poly ch = Poly::function(expr::Fn::Cosh, zeta);
  const Poly sh = Poly::function(expr::Fn::Sinh, zeta);
  m(0, 0) = ch;
  m(0, 1) = -sh;
  m(1, 0) = -sh;
  m(1, 1) = ch;
  return m;
}

Poly LinearMap::determinant() const {
  std::vector<int> perm(static_cast<std::size_t>(n_));
  std::iota(perm.begin(), perm.end(), 0);
  Poly det;
  do {
    int inversions = 0;
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) inversions += perm[i] > perm[j];
    }
    Poly term(1);
    for (int i = 0; i < n_ && !term.is_zero(); ++i) term *= (*this)(i, perm[i]);
    det += inversions % 2 ? -term : term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

LinearMap operator*(const LinearMap& a, const LinearMap& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("matrix size mismatch");
  LinearMap out(a.n_);
  for (int i = 0; i < a.n_; ++i) {
    for (int j = 0; j < a.n_; ++j) {
      Poly s;
      for (int k = 0; k < a.n_; ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

DifferentialForm pullback_linear(const DifferentialForm& w, const LinearMap& L) {
  const int n = w.dimension();
  if (L.size() != n) throw ChartMismatch("linear map size does not match chart dimension");
  if (expr::is_zero(L.determinant()) != ZeroStatus::ProvenNonzero) throw SingularMap("linear map is not invertible");

  expr::Substitution sub;
  std::vector<DifferentialForm> covectors;
  for (int i = 0; i < n; ++i) {
    Poly image;
    DifferentialForm dx(w.chart(), 1);
    for (int j = 0; j < n; ++j) {
      image += L(i, j) * Poly::variable(w.chart().coordinate(j));
      dx.add_term(static_cast<Basis>(1u << j), L(i, j));
    }
    sub.emplace(w.chart().coordinate(i), image);
    covectors.push_back(std::move(dx));
  }

  DifferentialForm out(w.chart(), w.degree());
  for (const auto& [b, p] : w.terms()) {
    DifferentialForm piece = DifferentialForm::scalar(w.chart(), expr::substitute(p, sub));
    for (int i : basis_indices(b)) piece = wedge(piece, covectors[static_cast<std::size_t>(i)]);
    out = out + piece;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string basis_name(const Chart& chart, Basis b) {
  std::string out;
  for (int i : basis_indices(b)) {
    if (!out.empty()) out += '^';
    out += "d" + chart.coordinate(i);
  }
  return out;
}

std::string print(const DifferentialForm& w) {
  if (w.is_zero()) return "0";
  if (w.degree() == 0) return expr::print(w.coeff(Basis{0}));
  std::string out;
  bool first = true;
  for (const auto& [b, p] : w.terms()) {
    std::string coeff;
    bool negative = false;
    if (p.terms().size() > 1) {
      coeff = "(" + expr::print(p) + ")";
    } else {
      negative = !first && p.terms().front().coeff < 0;
      coeff = expr::print(negative ? -p : p);
    }
    if (!first) out += negative ? " - " : " + ";
    out += coeff + " " + basis_name(w.chart(), b);
    first = false;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const DifferentialForm& w) { return os << print(w); }

// ---------------------------------------------------------------------------

namespace {

// Scalars are kept as trees until they meet a form, so coefficients normalize
// exactly as parse_expr would normalize them.
struct Literal {
  std::optional<expr::ScalarExpr> tree;
  std::optional<DifferentialForm> form;
};

class FormBuilder {
 public:
  using Value = Literal;
  static constexpr bool kJuxtapose = true;
  static constexpr bool kWedge = true;

  explicit FormBuilder(const expr::ParseContext& ctx) : ctx_(ctx) {}

  DifferentialForm finish(const Value& v) const { return as_form(v); }

  Value number(const Rational& r, std::size_t) { return {expr::ScalarExpr::number(r), std::nullopt}; }

  Value identifier(const std::string& name, std::size_t offset) {
    if (name.size() > 2 && name.starts_with("dx")) {
      const auto idx = ctx_.chart.coordinate_index(name.substr(1));
      if (!idx) throw UnknownIdentifier(offset, name, "not a basis covector of chart " + std::string(ctx_.chart.name()));
      return {std::nullopt, DifferentialForm::basis(ctx_.chart, {*idx})};
    }
    return {expr::detail::make_identifier(name, offset, ctx_), std::nullopt};
  }

  Value call(const std::string& name, std::vector<Value> args, const std::vector<std::size_t>& offsets,
             std::size_t offset) {
    std::vector<expr::ScalarExpr> trees;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!args[i].tree) throw ParseError(offsets[i], "function arguments must be scalars");
      trees.push_back(*args[i].tree);
    }
    return {expr::detail::make_call(name, std::move(trees), offsets, offset), std::nullopt};
  }

  Value neg(Value v, std::size_t) {
    if (v.tree) return {expr::detail::make_neg(*v.tree), std::nullopt};
    return {std::nullopt, -*v.form};
  }

  Value add(Value a, Value b, std::size_t offset) {
    if (a.tree && b.tree) return {expr::ScalarExpr::add(*a.tree, *b.tree), std::nullopt};
    return {std::nullopt, combine(as_form(a), as_form(b), offset, false)};
  }

  Value sub(Value a, Value b, std::size_t offset) {
    if (a.tree && b.tree) return {expr::ScalarExpr::sub(*a.tree, *b.tree), std::nullopt};
    return {std::nullopt, combine(as_form(a), as_form(b), offset, true)};
  }

  Value mul(Value a, Value b, std::size_t offset) {
    if (a.tree && b.tree) return {expr::ScalarExpr::mul(*a.tree, *b.tree), std::nullopt};
    if (a.tree) return {std::nullopt, expr::normalize(*a.tree) * *b.form};
    if (b.tree) return {std::nullopt, *a.form * expr::normalize(*b.tree)};
    const DifferentialForm& fa = *a.form;
    const DifferentialForm& fb = *b.form;
    if (fa.degree() == 0) return {std::nullopt, fa.coeff(Basis{0}) * fb};
    if (fb.degree() == 0) return {std::nullopt, fb.coeff(Basis{0}) * fa};
    throw ParseError(offset, "use ^ to wedge forms of positive degree");
  }

  Value div(Value a, Value b, std::size_t offset) {
    if (!b.tree) throw ParseError(offset, "cannot divide by a form");
    if (a.tree) return {expr::detail::make_div(*a.tree, *b.tree, offset), std::nullopt};
    const expr::ScalarExpr one = expr::ScalarExpr::number(1);
    const Poly inverse = expr::normalize(expr::detail::make_div(one, *b.tree, offset));
    return {std::nullopt, *a.form * inverse};
  }

  Value power(Value v, int n, std::size_t offset) {
    if (!v.tree) throw ParseError(offset, "only scalars can be raised to a power");
    return {expr::ScalarExpr::pow(*v.tree, n), std::nullopt};
  }

  Value wedge(Value a, Value b, std::size_t offset) {
    if (a.tree && b.tree) throw ParseError(offset, "expected integer exponent");
    return {std::nullopt, mwf::wedge(as_form(a), as_form(b))};
  }

 private:
  DifferentialForm as_form(const Value& v) const {
    if (v.form) return *v.form;
    return DifferentialForm::scalar(ctx_.chart, expr::normalize(*v.tree));
  }

  static DifferentialForm combine(DifferentialForm a, DifferentialForm b, std::size_t offset, bool subtract) {
    if (a.degree() != b.degree()) {
      // a bare 0 is accepted in any degree
      if (a.degree() == 0 && a.is_zero()) {
        a = DifferentialForm(b.chart(), b.degree());
      } else if (b.degree() == 0 && b.is_zero()) {
        b = DifferentialForm(a.chart(), a.degree());
      } else {
        throw ParseError(offset, "cannot add forms of degree " + std::to_string(a.degree()) + " and " +
                                     std::to_string(b.degree()));
      }
    }
    return subtract ? a - b : a + b;
  }

  const expr::ParseContext& ctx_;
};

}  // namespace

DifferentialForm parse_form(std::string_view text, const expr::ParseContext& ctx) {
  FormBuilder builder(ctx);
  expr::detail::Parser<FormBuilder> parser(text, builder);
  return builder.finish(parser.parse());
}

DifferentialForm parse_form(std::string_view text, const Chart& chart) {
  expr::ParseContext ctx;
  ctx.chart = chart;
  return parse_form(text, ctx);
}

}  // namespace mwf
