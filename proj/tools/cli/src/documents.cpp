#include "mwf/cli/documents.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

namespace mwf::cli {

namespace {

const Chart kE3 = Chart::euclidean3();
const Chart kM4 = Chart::minkowski4();

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be a JSON object");
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InputError("unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("key '") + key + "' has the wrong type");
  }
}

DifferentialForm form_or_zero(const json& doc, const char* key, const expr::ParseContext& ctx, int degree) {
  if (!doc.contains(key)) return DifferentialForm(ctx.chart, degree);
  return read_form(doc.at(key), ctx, degree);
}

em4::Vec3 read_vec3(const json& j, const expr::ParseContext& ctx, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw InputError(where + " must be an array of three expressions");
  return {read_scalar(j[0], ctx), read_scalar(j[1], ctx), read_scalar(j[2], ctx)};
}

std::optional<Rational> read_bound(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const json& v = j.at(key);
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw InputError(std::string("interval bound '") + key + "' must be an integer, a rational string or null");
}

}  // namespace

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

expr::ParseContext context_for(const json& doc, const Chart& chart) {
  expr::ParseContext ctx{chart, {}};
  if (doc.is_object() && doc.contains("constants")) {
    const json& names = doc.at("constants");
    if (!names.is_array()) throw InputError("constants must be an array of names");
    for (const json& n : names) {
      if (!n.is_string()) throw InputError("constants must be an array of names");
      ctx.symbols.insert(n.get<std::string>());
    }
  }
  return ctx;
}

Poly read_scalar(const json& j, const expr::ParseContext& ctx) {
  if (j.is_number_integer()) return Poly(Rational(j.get<long long>()));
  if (!j.is_string()) throw InputError("expected an expression string");
  return expr::normalize(expr::parse_expr(j.get<std::string>(), ctx));
}

DifferentialForm read_form(const json& j, const expr::ParseContext& ctx, int degree) {
  if (j.is_string()) {
    DifferentialForm w = parse_form(j.get<std::string>(), ctx);
    if (degree >= 0 && w.degree() != degree && !w.is_zero()) {
      throw DegreeError("expected a " + std::to_string(degree) + "-form, got degree " + std::to_string(w.degree()));
    }
    if (degree >= 0 && w.is_zero()) return DifferentialForm(ctx.chart, degree);
    return w;
  }
  check_keys(j, {"chart", "degree", "terms"}, "form document");
  Chart chart = ctx.chart;
  if (j.contains("chart")) {
    const auto named = Chart::from_name(get_or<std::string>(j, "chart", ""));
    if (!named) throw InputError("unknown chart '" + j.at("chart").dump() + "'");
    if (*named != ctx.chart) {
      throw ChartMismatch("form document on " + std::string(named->name()) + " where " +
                          std::string(ctx.chart.name()) + " is required");
    }
    chart = *named;
  }
  if (!j.contains("degree")) throw InputError("form document needs a degree");
  const int k = get_or<int>(j, "degree", 0);
  if (k < 0 || k > chart.dimension()) throw DegreeError("form degree out of range");
  if (degree >= 0 && k != degree) {
    throw DegreeError("expected a " + std::to_string(degree) + "-form, got degree " + std::to_string(k));
  }
  DifferentialForm w(chart, k);
  const json terms = j.contains("terms") ? j.at("terms") : json::array();
  if (!terms.is_array()) throw InputError("terms must be an array");
  for (const json& t : terms) {
    check_keys(t, {"basis", "coeff"}, "form term");
    const auto indices = get_or<std::vector<int>>(t, "basis", {});
    if (static_cast<int>(indices.size()) != k) throw DegreeError("basis length does not match the form degree");
    if (!t.contains("coeff")) throw InputError("form term needs a coeff");
    w.add_term(basis_from_indices(indices, chart.dimension()), read_scalar(t.at("coeff"), ctx));
  }
  return w;
}

json write_form(const DifferentialForm& w) {
  json terms = json::array();
  for (const auto& [b, c] : w.terms()) terms.push_back({{"basis", basis_indices(b)}, {"coeff", expr::print(c)}});
  return {{"chart", std::string(w.chart().name())}, {"degree", w.degree()}, {"terms", terms}};
}

em3::Field read_field3(const json& doc) {
  check_keys(doc, {"constants", "E", "H", "D", "B", "J", "rho", "constitutive"}, "3D field document");
  const expr::ParseContext ctx = context_for(doc, kE3);
  em3::Field f;
  f.E = form_or_zero(doc, "E", ctx, 1);
  f.B = form_or_zero(doc, "B", ctx, 2);
  f.J = form_or_zero(doc, "J", ctx, 2);
  f.rho = form_or_zero(doc, "rho", ctx, 3);
  if (get_or<bool>(doc, "constitutive", false)) {
    if (doc.contains("D") || doc.contains("H")) throw InputError("constitutive fields derive D and H; do not give them");
    return em3::apply_constitutive(f);
  }
  f.D = form_or_zero(doc, "D", ctx, 2);
  f.H = form_or_zero(doc, "H", ctx, 1);
  return f;
}

Potential3Doc read_potential3(const json& doc) {
  check_keys(doc, {"constants", "A", "Phi", "rho", "J"}, "3D potential document");
  const expr::ParseContext ctx = context_for(doc, kE3);
  Potential3Doc out;
  out.p.A = form_or_zero(doc, "A", ctx, 1);
  out.p.Phi = form_or_zero(doc, "Phi", ctx, 0);
  out.rho = form_or_zero(doc, "rho", ctx, 3);
  out.J = form_or_zero(doc, "J", ctx, 2);
  return out;
}

std::optional<DifferentialForm> read_current4(const json& doc, const expr::ParseContext& ctx) {
  if (doc.contains("Jtilde")) {
    if (doc.contains("rho") || doc.contains("J")) throw InputError("give the current either as Jtilde or as rho and J");
    return read_form(doc.at("Jtilde"), ctx, 1);
  }
  if (!doc.contains("rho") && !doc.contains("J")) return std::nullopt;
  const Poly rho = doc.contains("rho") ? read_scalar(doc.at("rho"), ctx) : Poly(0);
  const em4::Vec3 J = doc.contains("J") ? read_vec3(doc.at("J"), ctx, "J") : em4::Vec3{Poly(0), Poly(0), Poly(0)};
  return em4::four_current(rho, J);
}

em4::Field read_field4(const json& doc) {
  check_keys(doc, {"constants", "F", "E", "B", "Jtilde", "rho", "J"}, "4D field document");
  const expr::ParseContext ctx = context_for(doc, kM4);
  em4::Field f;
  if (doc.contains("F")) {
    if (doc.contains("E") || doc.contains("B")) throw InputError("give the field either as F or as E and B");
    f.F = read_form(doc.at("F"), ctx, 2);
  } else {
    const em4::Vec3 zero{Poly(0), Poly(0), Poly(0)};
    const em4::Vec3 E = doc.contains("E") ? read_vec3(doc.at("E"), ctx, "E") : zero;
    const em4::Vec3 B = doc.contains("B") ? read_vec3(doc.at("B"), ctx, "B") : zero;
    f = em4::assemble_faraday(E, B);
  }
  f.Jtilde = read_current4(doc, ctx).value_or(DifferentialForm(kM4, 1));
  return f;
}

DifferentialForm read_potential4(const json& doc) {
  check_keys(doc, {"constants", "I", "Phi", "A", "Jtilde", "rho", "J"}, "4D potential document");
  const expr::ParseContext ctx = context_for(doc, kM4);
  if (doc.contains("I")) {
    if (doc.contains("Phi") || doc.contains("A")) throw InputError("give the potential either as I or as Phi and A");
    return read_form(doc.at("I"), ctx, 1);
  }
  const Poly phi = doc.contains("Phi") ? read_scalar(doc.at("Phi"), ctx) : Poly(0);
  const em4::Vec3 A = doc.contains("A") ? read_vec3(doc.at("A"), ctx, "A") : em4::Vec3{Poly(0), Poly(0), Poly(0)};
  return em4::potential(phi, A);
}

bundle::Bundle read_bundle(const json& doc) {
  check_keys(doc, {"constants", "chart", "charts", "potentials", "transitions"}, "bundle document");
  bundle::Bundle b;
  if (doc.contains("chart")) {
    const auto named = Chart::from_name(get_or<std::string>(doc, "chart", ""));
    if (!named) throw InputError("unknown chart " + doc.at("chart").dump());
    b.base = *named;
  }
  const expr::ParseContext ctx = context_for(doc, b.base);
  auto array = [&](const char* key) {
    const json a = doc.contains(key) ? doc.at(key) : json::array();
    if (!a.is_array()) throw InputError(std::string(key) + " must be an array");
    return a;
  };
  for (const json& c : array("charts")) {
    check_keys(c, {"name", "box"}, "cover chart");
    bundle::CoverChart chart{get_or<std::string>(c, "name", ""), {}};
    const json box = c.contains("box") ? c.at("box") : json::array();
    if (!box.is_array()) throw InputError("box must be an array of intervals");
    for (const json& iv : box) {
      check_keys(iv, {"coordinate", "lo", "hi"}, "interval");
      chart.box.push_back({get_or<std::string>(iv, "coordinate", ""), read_bound(iv, "lo"), read_bound(iv, "hi")});
    }
    b.charts.push_back(std::move(chart));
  }
  for (const json& p : array("potentials")) {
    check_keys(p, {"chart", "A"}, "local potential");
    if (!p.contains("A")) throw InputError("local potential needs A");
    b.potentials.push_back({get_or<std::string>(p, "chart", ""), read_form(p.at("A"), ctx, 1)});
  }
  for (const json& t : array("transitions")) {
    check_keys(t, {"to", "from", "lambda"}, "transition");
    if (!t.contains("lambda")) throw InputError("transition needs lambda");
    b.transitions.push_back(
        {get_or<std::string>(t, "to", ""), get_or<std::string>(t, "from", ""), read_scalar(t.at("lambda"), ctx)});
  }
  bundle::validate(b);
  return b;
}

dec::SimConfig read_sim_config(const json& doc) {
  check_keys(doc,
             {"dims", "h", "dt", "courant", "cfl_dims", "steps", "units", "initial", "source", "diagnostics_every",
              "threads"},
             "simulation config");
  dec::SimConfig cfg;
  if (doc.contains("dims")) {
    const auto dims = get_or<std::vector<int>>(doc, "dims", {});
    if (dims.size() != 3) throw InputError("dims must have three entries");
    cfg.dims = {dims[0], dims[1], dims[2]};
  }
  cfg.h = get_or<double>(doc, "h", cfg.h);
  if (doc.contains("dt")) {
    if (doc.contains("courant")) throw InputError("give either dt or courant");
    cfg.dt = get_or<double>(doc, "dt", 0.0);
  }
  cfg.courant = get_or<double>(doc, "courant", cfg.courant);
  cfg.cfl_dims = get_or<int>(doc, "cfl_dims", cfg.cfl_dims);
  cfg.steps = get_or<long>(doc, "steps", cfg.steps);
  const std::string units = get_or<std::string>(doc, "units", "normalized");
  if (units != "normalized" && units != "si") throw InputError("units must be \"normalized\" or \"si\"");
  cfg.si_units = units == "si";
  cfg.diagnostics_every = get_or<long>(doc, "diagnostics_every", cfg.diagnostics_every);
  cfg.threads = get_or<int>(doc, "threads", cfg.threads);

  if (doc.contains("initial")) {
    const json& init = doc.at("initial");
    const std::string type = init.is_string() ? init.get<std::string>() : get_or<std::string>(init, "type", "");
    if (type == "zero") {
      if (init.is_object()) check_keys(init, {"type"}, "initial condition");
      cfg.initial = dec::ZeroInitial{};
    } else if (type == "plane_wave") {
      check_keys(init, {"type", "axis", "cells_per_wavelength", "polarization", "amplitude"}, "plane_wave");
      dec::PlaneWave w;
      w.axis = get_or<int>(init, "axis", w.axis);
      w.cells_per_wavelength = get_or<int>(init, "cells_per_wavelength", w.cells_per_wavelength);
      w.polarization = get_or<int>(init, "polarization", w.polarization);
      w.amplitude = get_or<double>(init, "amplitude", w.amplitude);
      cfg.initial = w;
    } else {
      throw InputError("initial condition must be \"zero\" or {\"type\": \"plane_wave\", ...}");
    }
  }
  if (doc.contains("source")) {
    const json& src = doc.at("source");
    check_keys(src, {"type", "axis", "cell", "amplitude", "t0", "width"}, "source");
    if (get_or<std::string>(src, "type", "") != "current_pulse") throw InputError("source type must be current_pulse");
    dec::CurrentPulse p;
    p.axis = get_or<int>(src, "axis", p.axis);
    if (src.contains("cell")) {
      const auto cell = get_or<std::vector<int>>(src, "cell", {});
      if (cell.size() != 3) throw InputError("source cell must have three entries");
      p.cell = {cell[0], cell[1], cell[2]};
    }
    p.amplitude = get_or<double>(src, "amplitude", p.amplitude);
    p.t0 = get_or<double>(src, "t0", p.t0);
    p.width = get_or<double>(src, "width", p.width);
    if (!(p.width > 0)) throw InputError("source width must be positive");
    cfg.source = p;
  }
  return cfg;
}

}  // namespace mwf::cli
