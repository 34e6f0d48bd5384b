#include "mwf/expr/poly.hpp"

#include "mwf/expr/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mwf {

Rational parse_rational(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  BigInt scale = 1;
  bool any = false;
  bool fraction = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits = digits * 10 + (ch - '0');
      if (fraction) scale *= 10;
      any = true;
    } else if (ch == '.' && !fraction) {
      fraction = true;
    } else if (ch == '/' && !fraction && any) {
      const Rational den = parse_rational(text.substr(i + 1));
      if (den == 0) throw std::invalid_argument("zero denominator in rational literal");
      Rational r(digits);
      return (negative ? -r : r) / den;
    } else {
      throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    }
  }
  if (!any) throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
  Rational r(digits, scale);
  return negative ? -r : r;
}

}  // namespace mwf

namespace mwf::expr {

std::string_view fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Exp: return "exp";
    case Fn::Sinh: return "sinh";
    case Fn::Cosh: return "cosh";
  }
  return "?";
}

std::optional<Fn> fn_from_name(std::string_view name) {
  if (name == "sin") return Fn::Sin;
  if (name == "cos") return Fn::Cos;
  if (name == "exp") return Fn::Exp;
  if (name == "sinh") return Fn::Sinh;
  if (name == "cosh") return Fn::Cosh;
  return std::nullopt;
}

unsigned variable_bit(std::string_view name) {
  if (name == "t") return 1U;
  if (name == "x0") return 2U;
  if (name == "x1") return 4U;
  if (name == "x2") return 8U;
  if (name == "x3") return 16U;
  return 32U;
}

namespace {

// Spatial coordinates sort before time so that arguments read "x1 - c*t".
int variable_rank(std::string_view name) {
  if (name == "x1") return 0;
  if (name == "x2") return 1;
  if (name == "x3") return 2;
  if (name == "x0") return 3;
  if (name == "t") return 4;
  return 5;
}

template <class T>
int three_way(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

int compare_polys(const Poly& a, const Poly& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  const std::size_t n = std::min(ta.size(), tb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare_monomials(ta[i].mono, tb[i].mono)) return c;
    if (int c = three_way(ta[i].coeff, tb[i].coeff)) return c;
  }
  return three_way(ta.size(), tb.size());
}

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare_monomials(a, b) < 0; }
};

using Accumulator = std::map<Monomial, Rational, MonoLess>;

AtomRef finish_atom(Atom a) {
  for (const auto& arg : a.args) {
    a.var_mask |= arg.variable_mask();
    a.contains_opaque = a.contains_opaque || arg.has_opaque();
  }
  return std::make_shared<const Atom>(std::move(a));
}

AtomRef function_atom(Fn f, const Poly& arg) {
  Atom a;
  a.kind = AtomKind::Function;
  a.fn = f;
  a.args = {arg};
  return finish_atom(std::move(a));
}

Poly monomial_poly(AtomRef atom, int exponent = 1, Rational coeff = 1) {
  std::vector<Term> terms;
  terms.push_back(Term{Monomial{Factor{std::move(atom), exponent}}, std::move(coeff)});
  return Poly::from_sorted_terms(std::move(terms));
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const int c = a[i].atom == b[j].atom ? 0 : compare_atoms(*a[i].atom, *b[j].atom);
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back(b[j++]);
    } else {
      const int e = a[i].exponent + b[j].exponent;
      if (e != 0) out.push_back(Factor{a[i].atom, e});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

bool is_fn(const Factor& f, Fn fn) {
  return f.atom->kind == AtomKind::Function && f.atom->fn == fn;
}

void accumulate(Accumulator& acc, Monomial m, const Rational& c) {
  if (c == 0) return;

  // exp(a)^i exp(b)^j -> exp(i a + j b)
  {
    int count = 0;
    bool non_unit = false;
    for (const auto& f : m) {
      if (is_fn(f, Fn::Exp)) {
        ++count;
        non_unit = non_unit || f.exponent != 1;
      }
    }
    if (count > 1 || non_unit) {
      Poly arg;
      Monomial rest;
      for (const auto& f : m) {
        if (is_fn(f, Fn::Exp)) {
          arg += Poly(f.exponent) * f.atom->args[0];
        } else {
          rest.push_back(f);
        }
      }
      if (!arg.is_zero()) rest = mono_mul(rest, Monomial{Factor{function_atom(Fn::Exp, arg), 1}});
      accumulate(acc, std::move(rest), c);
      return;
    }
  }

  for (std::size_t i = 0; i < m.size(); ++i) {
    const Factor& f = m[i];
    const bool is_cos = is_fn(f, Fn::Cos);
    const bool is_cosh = is_fn(f, Fn::Cosh);
    if ((is_cos || is_cosh) && f.exponent >= 2) {
      // cos^2 = 1 - sin^2, cosh^2 = 1 + sinh^2
      AtomRef partner = function_atom(is_cos ? Fn::Sin : Fn::Sinh, f.atom->args[0]);
      Monomial reduced = m;
      reduced[i].exponent -= 2;
      if (reduced[i].exponent == 0) reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(i));
      Monomial with_partner = mono_mul(reduced, Monomial{Factor{partner, 2}});
      accumulate(acc, std::move(reduced), c);
      accumulate(acc, std::move(with_partner), is_cos ? Rational(-c) : c);
      return;
    }
    if (f.atom->kind == AtomKind::Reciprocal && f.exponent < 0) {
      const Poly expanded = f.atom->args[0].pow(-f.exponent);
      Monomial rest = m;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      for (const auto& t : expanded.terms()) accumulate(acc, mono_mul(rest, t.mono), c * t.coeff);
      return;
    }
  }

  auto [it, inserted] = acc.try_emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) acc.erase(it);
  }
}

Poly from_accumulator(Accumulator&& acc) {
  std::vector<Term> terms;
  terms.reserve(acc.size());
  while (!acc.empty()) {
    auto node = acc.extract(acc.begin());
    terms.push_back(Term{std::move(node.key()), std::move(node.mapped())});
  }
  return Poly::from_sorted_terms(std::move(terms));
}

Poly scale(const Poly& p, const Rational& k) {
  if (k == 0) return {};
  std::vector<Term> terms = p.terms();
  for (auto& t : terms) t.coeff *= k;
  return Poly::from_sorted_terms(std::move(terms));
}

Poly inverse_monomial(const Term& t) {
  Accumulator acc;
  Monomial inv = t.mono;
  for (auto& f : inv) f.exponent = -f.exponent;
  accumulate(acc, std::move(inv), 1 / t.coeff);
  return from_accumulator(std::move(acc));
}

Poly atom_poly(const AtomRef& a) { return monomial_poly(a); }

Poly diff_atom(const AtomRef& a, std::string_view var) {
  switch (a->kind) {
    case AtomKind::Variable:
      return a->name == var ? Poly(1) : Poly();
    case AtomKind::Constant:
      return {};
    case AtomKind::Function: {
      const Poly& u = a->args[0];
      const Poly du = diff(u, var);
      if (du.is_zero()) return {};
      switch (a->fn) {
        case Fn::Sin: return Poly::function(Fn::Cos, u) * du;
        case Fn::Cos: return -(Poly::function(Fn::Sin, u) * du);
        case Fn::Exp: return atom_poly(a) * du;
        case Fn::Sinh: return Poly::function(Fn::Cosh, u) * du;
        case Fn::Cosh: return Poly::function(Fn::Sinh, u) * du;
      }
      return {};
    }
    case AtomKind::Opaque: {
      Poly out;
      for (std::size_t p = 0; p < a->args.size(); ++p) {
        const Poly du = diff(a->args[p], var);
        if (du.is_zero()) continue;
        std::vector<int> tags = a->tags;
        ++tags[p];
        out += Poly::opaque(a->name, a->args, std::move(tags)) * du;
      }
      return out;
    }
    case AtomKind::Reciprocal: {
      const Poly r = atom_poly(a);
      return -(r * r * diff(a->args[0], var));
    }
  }
  return {};
}

double eval_atom(const Atom& a, const Bindings& b) {
  switch (a.kind) {
    case AtomKind::Variable:
    case AtomKind::Constant: {
      if (auto it = b.values.find(a.name); it != b.values.end()) return it->second;
      if (a.name == "pi") return std::numbers::pi;
      throw EvalError("unbound variable '" + a.name + "'");
    }
    case AtomKind::Function: {
      const double x = evaluate(a.args[0], b);
      switch (a.fn) {
        case Fn::Sin: return std::sin(x);
        case Fn::Cos: return std::cos(x);
        case Fn::Exp: return std::exp(x);
        case Fn::Sinh: return std::sinh(x);
        case Fn::Cosh: return std::cosh(x);
      }
      return 0.0;
    }
    case AtomKind::Opaque:
      throw EvalError("opaque symbol '" + a.name + "' cannot be evaluated");
    case AtomKind::Reciprocal: {
      const double d = evaluate(a.args[0], b);
      if (d == 0.0) throw EvalError("division by zero at evaluation point");
      return 1.0 / d;
    }
  }
  return 0.0;
}

double eval_term(const Term& t, const Bindings& b) {
  double v = to_double(t.coeff);
  for (const auto& f : t.mono) {
    const double x = eval_atom(*f.atom, b);
    if (x == 0.0 && f.exponent < 0) throw EvalError("division by zero at evaluation point");
    v *= std::pow(x, f.exponent);
  }
  return v;
}

}  // namespace

int compare_atoms(const Atom& a, const Atom& b) {
  if (&a == &b) return 0;
  if (a.kind != b.kind) return three_way(static_cast<int>(a.kind), static_cast<int>(b.kind));
  switch (a.kind) {
    case AtomKind::Variable:
      if (int c = three_way(variable_rank(a.name), variable_rank(b.name))) return c;
      return three_way(a.name, b.name);
    case AtomKind::Constant:
      return three_way(a.name, b.name);
    case AtomKind::Function:
      if (a.fn != b.fn) return three_way(static_cast<int>(a.fn), static_cast<int>(b.fn));
      return compare_polys(a.args[0], b.args[0]);
    case AtomKind::Opaque: {
      if (int c = three_way(a.name, b.name)) return c;
      if (int c = three_way(a.args.size(), b.args.size())) return c;
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (int c = compare_polys(a.args[i], b.args[i])) return c;
      }
      return three_way(a.tags, b.tags);
    }
    case AtomKind::Reciprocal:
      return compare_polys(a.args[0], b.args[0]);
  }
  return 0;
}

int compare_monomials(const Monomial& a, const Monomial& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].atom != b[i].atom) {
      if (int c = compare_atoms(*a[i].atom, *b[i].atom)) return c;
    }
    if (a[i].exponent != b[i].exponent) return a[i].exponent > b[i].exponent ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() > b.size() ? -1 : 1;
}

Poly::Poly(const Rational& value) {
  if (value != 0) terms_.push_back(Term{Monomial{}, value});
}

Poly Poly::from_sorted_terms(std::vector<Term> terms) {
  Poly p;
  p.terms_ = std::move(terms);
  return p;
}

Poly Poly::variable(std::string_view name) {
  Atom a;
  a.kind = AtomKind::Variable;
  a.name = std::string(name);
  a.var_mask = variable_bit(name);
  return monomial_poly(finish_atom(std::move(a)));
}

Poly Poly::constant(std::string_view name) {
  if (name == "mu0") return constant("c").pow(-2) * constant("eps0").pow(-1);
  Atom a;
  a.kind = AtomKind::Constant;
  a.name = std::string(name);
  return monomial_poly(finish_atom(std::move(a)));
}

Poly Poly::function(Fn f, const Poly& arg) {
  if (arg.is_zero()) return (f == Fn::Sin || f == Fn::Sinh) ? Poly() : Poly(1);
  if (f == Fn::Exp) return monomial_poly(function_atom(f, arg));
  const bool flip = arg.terms().front().coeff < 0;
  const Poly canonical = monomial_poly(function_atom(f, flip ? -arg : arg));
  return (flip && (f == Fn::Sin || f == Fn::Sinh)) ? -canonical : canonical;
}

Poly Poly::opaque(std::string name, std::vector<Poly> args, std::vector<int> tags) {
  if (tags.size() > args.size()) throw std::invalid_argument("more derivative tags than arguments for " + name);
  tags.resize(args.size(), 0);
  for (int t : tags) {
    if (t < 0) throw std::invalid_argument("negative derivative tag for " + name);
  }
  Atom a;
  a.kind = AtomKind::Opaque;
  a.name = std::move(name);
  a.args = std::move(args);
  a.tags = std::move(tags);
  a.contains_opaque = true;
  return monomial_poly(finish_atom(std::move(a)));
}

Poly Poly::reciprocal(const Poly& p) {
  if (p.is_zero()) throw std::domain_error("division by zero");
  if (p.terms_.size() == 1) return inverse_monomial(p.terms_.front());
  const Rational lead = p.terms_.front().coeff;
  Atom a;
  a.kind = AtomKind::Reciprocal;
  a.args = {scale(p, 1 / lead)};
  return monomial_poly(finish_atom(std::move(a)), 1, 1 / lead);
}

std::optional<Rational> Poly::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.front().mono.empty()) return terms_.front().coeff;
  return std::nullopt;
}

bool Poly::has_opaque() const {
  for (const auto& t : terms_) {
    for (const auto& f : t.mono) {
      if (f.atom->contains_opaque) return true;
    }
  }
  return false;
}

unsigned Poly::variable_mask() const {
  unsigned mask = 0;
  for (const auto& t : terms_) {
    for (const auto& f : t.mono) mask |= f.atom->var_mask;
  }
  return mask;
}

bool Poly::depends_on(std::string_view var) const { return (variable_mask() & variable_bit(var)) != 0; }

Poly Poly::pow(int n) const {
  if (n == 0) return Poly(1);
  if (n < 0) return reciprocal(*this).pow(-n);
  Poly result(1);
  Poly base = *this;
  while (true) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n == 0) break;
    base = base * base;
  }
  return result;
}

Poly operator+(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::vector<Term> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.terms_.size() && j < b.terms_.size()) {
    const int c = compare_monomials(a.terms_[i].mono, b.terms_[j].mono);
    if (c < 0) {
      out.push_back(a.terms_[i++]);
    } else if (c > 0) {
      out.push_back(b.terms_[j++]);
    } else {
      Rational sum = a.terms_[i].coeff + b.terms_[j].coeff;
      if (sum != 0) out.push_back(Term{a.terms_[i].mono, std::move(sum)});
      ++i;
      ++j;
    }
  }
  for (; i < a.terms_.size(); ++i) out.push_back(a.terms_[i]);
  for (; j < b.terms_.size(); ++j) out.push_back(b.terms_[j]);
  return Poly::from_sorted_terms(std::move(out));
}

Poly operator-(const Poly& a) { return scale(a, -1); }

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (auto k = a.as_rational()) return scale(b, *k);
  if (auto k = b.as_rational()) return scale(a, *k);
  Accumulator acc;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) accumulate(acc, mono_mul(ta.mono, tb.mono), ta.coeff * tb.coeff);
  }
  return from_accumulator(std::move(acc));
}

Poly operator/(const Poly& a, const Poly& b) { return a * Poly::reciprocal(b); }

bool operator==(const Poly& a, const Poly& b) { return compare_polys(a, b) == 0; }

std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
  const int c = compare_polys(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Poly diff(const Poly& p, std::string_view var) {
  const unsigned bit = variable_bit(var);
  Poly out;
  for (const auto& t : p.terms()) {
    for (std::size_t i = 0; i < t.mono.size(); ++i) {
      const Factor& f = t.mono[i];
      if ((f.atom->var_mask & bit) == 0) continue;
      const Poly d = diff_atom(f.atom, var);
      if (d.is_zero()) continue;
      Monomial rest = t.mono;
      rest[i].exponent -= 1;
      if (rest[i].exponent == 0) rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      Accumulator acc;
      accumulate(acc, std::move(rest), t.coeff * f.exponent);
      out += from_accumulator(std::move(acc)) * d;
    }
  }
  return out;
}

Poly substitute(const Poly& p, const Substitution& s) {
  if (s.empty()) return p;
  unsigned target_mask = 0;
  bool targets_constants = false;
  for (const auto& [name, value] : s) {
    const unsigned bit = variable_bit(name);
    if (bit == 32U) {
      targets_constants = true;
    } else {
      target_mask |= bit;
    }
  }

  std::map<const Atom*, Poly> memo;
  auto sub_atom = [&](const AtomRef& a) -> Poly {
    if (!targets_constants && (a->var_mask & target_mask) == 0) return atom_poly(a);
    if (auto it = memo.find(a.get()); it != memo.end()) return it->second;
    Poly r;
    switch (a->kind) {
      case AtomKind::Variable:
      case AtomKind::Constant: {
        auto it = s.find(a->name);
        r = it != s.end() ? it->second : atom_poly(a);
        break;
      }
      case AtomKind::Function:
        r = Poly::function(a->fn, substitute(a->args[0], s));
        break;
      case AtomKind::Opaque: {
        std::vector<Poly> args;
        args.reserve(a->args.size());
        for (const auto& arg : a->args) args.push_back(substitute(arg, s));
        r = Poly::opaque(a->name, std::move(args), a->tags);
        break;
      }
      case AtomKind::Reciprocal:
        r = Poly::reciprocal(substitute(a->args[0], s));
        break;
    }
    memo.emplace(a.get(), r);
    return r;
  };

  Poly out;
  for (const auto& t : p.terms()) {
    Poly term(t.coeff);
    for (const auto& f : t.mono) term = term * sub_atom(f.atom).pow(f.exponent);
    out += term;
  }
  return out;
}

double evaluate(const Poly& p, const Bindings& b) {
  double sum = 0.0;
  for (const auto& t : p.terms()) sum += eval_term(t, b);
  return sum;
}

double evaluate_magnitude(const Poly& p, const Bindings& b) {
  double sum = 0.0;
  for (const auto& t : p.terms()) sum += std::abs(eval_term(t, b));
  return sum;
}

}  // namespace mwf::expr
