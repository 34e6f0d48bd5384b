#pragma once

// JSON documents accepted by the command-line tool.
//
// Every document may carry "constants": ["E0", ...] to declare extra symbols.
// A form is either a literal string ("x2 dx1 + x1 dx2") or an object
// {"chart": "minkowski4", "degree": 2, "terms": [{"basis": [0, 1], "coeff": "-E1(x0,x1,x2,x3)"}]}
// with 0-based, strictly increasing basis positions.

#include "mwf/bundle/bundle.hpp"
#include "mwf/dec/simulation.hpp"
#include "mwf/em/em3.hpp"
#include "mwf/em/em4.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace mwf::cli {

using nlohmann::json;

/// Structurally invalid document.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json load_json(const std::filesystem::path& path);

expr::ParseContext context_for(const json& doc, const Chart& chart);

Poly read_scalar(const json& j, const expr::ParseContext& ctx);
/// `degree` < 0 accepts any degree.
DifferentialForm read_form(const json& j, const expr::ParseContext& ctx, int degree = -1);
json write_form(const DifferentialForm& w);

/// {"E", "H", "D", "B", "J", "rho"} on Euclidean3; absent members are zero.
/// "constitutive": true derives D and H from E and B.
em3::Field read_field3(const json& doc);

struct Potential3Doc {
  em3::Potential p;
  DifferentialForm rho{Chart::euclidean3(), 3};
  DifferentialForm J{Chart::euclidean3(), 2};
};

/// {"A", "Phi", "rho", "J"}.
Potential3Doc read_potential3(const json& doc);

/// {"F"} or {"E": [..3], "B": [..3]}, plus an optional current given as {"Jtilde"} or {"rho", "J": [..3]}.
/// Without a current the field is taken in vacuum.
em4::Field read_field4(const json& doc);

/// The current of a 4D document, if any.
std::optional<DifferentialForm> read_current4(const json& doc, const expr::ParseContext& ctx);

/// {"I"} or {"Phi", "A": [..3]}.
DifferentialForm read_potential4(const json& doc);

/// {"chart", "charts": [{"name", "box": [{"coordinate", "lo", "hi"}]}],
///  "potentials": [{"chart", "A"}], "transitions": [{"to", "from", "lambda"}]}
bundle::Bundle read_bundle(const json& doc);

/// {"dims", "h", "dt" | "courant", "cfl_dims", "steps", "units": "normalized" | "si",
///  "initial": "zero" | {"type": "plane_wave", ...}, "source": {"type": "current_pulse", ...},
///  "diagnostics_every", "threads"}
dec::SimConfig read_sim_config(const json& doc);

}  // namespace mwf::cli
