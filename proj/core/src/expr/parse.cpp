#include "mwf/expr/parse.hpp"

#include "mwf/expr/parser.hpp"

#include <array>
#include <cctype>

namespace mwf::expr {

namespace detail {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char ch = static_cast<unsigned char>(text[i]);
    if (std::isspace(ch)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(ch) || (ch == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      out.push_back({Tok::Number, std::string(text.substr(start, i - start)), start});
      continue;
    }
    if (std::isalpha(ch) || ch == '_') {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(text.substr(start, i - start)), start});
      continue;
    }
    switch (ch) {
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
      case '(':
      case ')':
      case ',':
        out.push_back({Tok::Op, std::string(1, static_cast<char>(ch)), start});
        ++i;
        continue;
      default:
        throw ParseError(start, std::string("unexpected character '") + static_cast<char>(ch) + "'");
    }
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

}  // namespace detail

namespace {

constexpr std::array<std::string_view, 16> kReserved = {"sin", "cos",  "exp", "sinh", "cosh", "diff", "pdiff", "pi",
                                                        "c",   "eps0", "mu0", "t",    "x0",   "x1",   "x2",    "x3"};

bool is_named_constant(std::string_view name) { return name == "c" || name == "eps0" || name == "mu0" || name == "pi"; }

bool is_function_name(std::string_view name) {
  return fn_from_name(name).has_value() || name == "diff" || name == "pdiff";
}

void check_arity(const std::string& name, std::size_t got, std::size_t want, std::size_t offset) {
  if (got != want) {
    throw ParseError(offset, name + " expects " + std::to_string(want) + " argument" + (want == 1 ? "" : "s"));
  }
}

int derivative_position(const Rational& r, std::size_t arity, std::size_t offset) {
  if (!is_integer(r) || r < 1 || r > static_cast<long>(arity)) {
    throw ParseError(offset, "pdiff position must be an integer between 1 and " + std::to_string(arity));
  }
  return static_cast<int>(boost::multiprecision::numerator(r)) - 1;
}

}  // namespace

namespace detail {

ScalarExpr make_identifier(const std::string& name, std::size_t offset, const ParseContext& ctx) {
  if (ctx.chart.allows_variable(name)) return ScalarExpr::variable(name);
  if (is_named_constant(name) || ctx.symbols.contains(name)) return ScalarExpr::constant(name);
  if (name.size() == 2 && name[0] == 'x' && name[1] >= '0' && name[1] <= '3') {
    throw UnknownIdentifier(offset, name, "not a coordinate of chart " + std::string(ctx.chart.name()));
  }
  if (is_function_name(name)) throw ParseError(offset, "function '" + name + "' used without arguments");
  throw UnknownIdentifier(offset, name);
}

ScalarExpr make_call(const std::string& name, std::vector<ScalarExpr> args, const std::vector<std::size_t>& offsets,
                     std::size_t offset) {
  if (auto f = fn_from_name(name)) {
    check_arity(name, args.size(), 1, offset);
    return ScalarExpr::call(*f, std::move(args[0]));
  }
  if (name == "diff") {
    check_arity(name, args.size(), 2, offset);
    if (args[1].kind() != Node::Variable) throw ParseError(offsets[1], "diff expects a coordinate as second argument");
    return diff(args[0], args[1].name());
  }
  if (name == "pdiff") {
    check_arity(name, args.size(), 2, offset);
    const ScalarExpr& target = args[0];
    if (target.kind() != Node::Opaque) throw ParseError(offsets[0], "pdiff expects an opaque function symbol");
    if (args[1].kind() != Node::Number) throw ParseError(offsets[1], "pdiff expects an argument position");
    const int pos = derivative_position(args[1].value(), target.children().size(), offsets[1]);
    std::vector<int> tags = target.tags();
    ++tags[static_cast<std::size_t>(pos)];
    std::vector<ScalarExpr> kids(target.children().begin(), target.children().end());
    return ScalarExpr::opaque(target.name(), std::move(kids), std::move(tags));
  }
  if (is_reserved(name)) throw ParseError(offset, "'" + name + "' is not a function");
  return ScalarExpr::opaque(name, std::move(args));
}

ScalarExpr make_neg(ScalarExpr v) {
  if (v.kind() == Node::Number) return ScalarExpr::number(-v.value());
  return ScalarExpr::neg(std::move(v));
}

ScalarExpr make_div(ScalarExpr a, ScalarExpr b, std::size_t offset) {
  if (b.kind() == Node::Number && b.value() == 0) throw ParseError(offset, "division by zero");
  if (a.kind() == Node::Number && b.kind() == Node::Number) return ScalarExpr::number(a.value() / b.value());
  return ScalarExpr::div(std::move(a), std::move(b));
}

}  // namespace detail

namespace {

using detail::make_call;
using detail::make_div;
using detail::make_identifier;
using detail::make_neg;

// Builds ScalarExpr trees exactly as written, folding only numeric negation and
// numeric division so that printed rationals read back as single numbers.
class TreeBuilder {
 public:
  using Value = ScalarExpr;
  static constexpr bool kJuxtapose = false;
  static constexpr bool kWedge = false;

  explicit TreeBuilder(const ParseContext& ctx) : ctx_(ctx) {}

  Value number(const Rational& r, std::size_t) { return ScalarExpr::number(r); }

  Value identifier(const std::string& name, std::size_t offset) { return make_identifier(name, offset, ctx_); }

  Value call(const std::string& name, std::vector<Value> args, const std::vector<std::size_t>& offsets,
             std::size_t offset) {
    return make_call(name, std::move(args), offsets, offset);
  }

  Value neg(Value v, std::size_t) { return make_neg(std::move(v)); }
  Value add(Value a, Value b, std::size_t) { return ScalarExpr::add(std::move(a), std::move(b)); }
  Value sub(Value a, Value b, std::size_t) { return ScalarExpr::sub(std::move(a), std::move(b)); }
  Value mul(Value a, Value b, std::size_t) { return ScalarExpr::mul(std::move(a), std::move(b)); }
  Value div(Value a, Value b, std::size_t offset) { return make_div(std::move(a), std::move(b), offset); }
  Value power(Value v, int n, std::size_t) { return ScalarExpr::pow(std::move(v), n); }

 private:
  const ParseContext& ctx_;
};

}  // namespace

bool is_reserved(std::string_view name) {
  for (auto r : kReserved) {
    if (r == name) return true;
  }
  return false;
}

ScalarExpr parse_expr(std::string_view text, const ParseContext& ctx) {
  TreeBuilder builder(ctx);
  detail::Parser<TreeBuilder> parser(text, builder);
  return parser.parse();
}

ScalarExpr parse_expr(std::string_view text, const Chart& chart) {
  ParseContext ctx;
  ctx.chart = chart;
  return parse_expr(text, ctx);
}

}  // namespace mwf::expr
