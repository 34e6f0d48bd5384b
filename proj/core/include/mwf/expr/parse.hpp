#pragma once

#include "mwf/expr/expr.hpp"
#include "mwf/forms/chart.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mwf::expr {

/// Names a parser may resolve besides the reserved ones.
struct ParseContext {
  Chart chart = Chart::euclidean3();
  std::set<std::string, std::less<>> symbols;  // declared constants such as E0 or zeta
};

/// Reserved identifiers: sin cos exp sinh cosh diff pdiff pi c eps0 mu0 t x0..x3.
bool is_reserved(std::string_view name);

/// Parses the expression grammar. Unknown call names become opaque function
/// symbols; `diff(e, v)` differentiates and `pdiff(F(...), k)` tags an opaque
/// symbol with a derivative in its k-th argument (1-based).
ScalarExpr parse_expr(std::string_view text, const ParseContext& ctx);
ScalarExpr parse_expr(std::string_view text, const Chart& chart);

namespace detail {

// Node constructors shared with the form-literal parser; they apply the same
// folding and name resolution as parse_expr.
ScalarExpr make_identifier(const std::string& name, std::size_t offset, const ParseContext& ctx);
ScalarExpr make_call(const std::string& name, std::vector<ScalarExpr> args, const std::vector<std::size_t>& offsets,
                     std::size_t offset);
ScalarExpr make_neg(ScalarExpr v);
ScalarExpr make_div(ScalarExpr a, ScalarExpr b, std::size_t offset);

}  // namespace detail

}  // namespace mwf::expr
