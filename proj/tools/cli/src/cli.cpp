#include "mwf/cli/cli.hpp"

#include "mwf/cli/documents.hpp"
#include "mwf/expr/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <variant>

namespace mwf::cli {

namespace {

const Chart kE3 = Chart::euclidean3();
const Chart kM4 = Chart::minkowski4();

struct Globals {
  std::string chart = "euclidean3";
  std::string format = "text";
  std::vector<std::string> constants;

  bool json_output() const { return format == "json"; }

  expr::ParseContext context() const {
    expr::ParseContext ctx{*Chart::from_name(chart), {}};
    ctx.symbols.insert(constants.begin(), constants.end());
    return ctx;
  }

  /// Document context extended by the command-line constants.
  expr::ParseContext context(const json& doc, const Chart& c) const {
    expr::ParseContext ctx = context_for(doc, c);
    ctx.symbols.insert(constants.begin(), constants.end());
    return ctx;
  }
};

/// Documents may declare constants; the command line can add more.
json with_constants(json doc, const Globals& g) {
  if (g.constants.empty() || !doc.is_object()) return doc;
  json& names = doc["constants"];
  if (names.is_null()) names = json::array();
  if (!names.is_array()) return doc;
  for (const std::string& c : g.constants) names.push_back(c);
  return doc;
}

std::string_view status_word(ZeroStatus s) {
  switch (s) {
    case ZeroStatus::ProvenZero: return "verified";
    case ZeroStatus::ProvenNonzero: return "refuted";
    case ZeroStatus::Unknown: return "inconclusive";
  }
  return "inconclusive";
}

struct Equation {
  std::string name;
  ZeroStatus status;
  std::optional<std::string> residual;
};

using Value = std::variant<DifferentialForm, Poly, std::string>;

struct Report {
  std::vector<std::pair<std::string, Value>> values;
  std::vector<Equation> equations;

  void check(std::string name, const DifferentialForm& residual) {
    equations.push_back({std::move(name), zero_status(residual), print(residual)});
  }
  void check(std::string name, const Poly& residual) {
    equations.push_back({std::move(name), expr::is_zero(residual), expr::print(residual)});
  }
  void check(std::string name, ZeroStatus status) { equations.push_back({std::move(name), status, std::nullopt}); }

  int exit_code() const {
    bool unknown = false;
    for (const Equation& e : equations) {
      if (e.status == ZeroStatus::ProvenNonzero) return kRefuted;
      unknown = unknown || e.status == ZeroStatus::Unknown;
    }
    return unknown ? kInconclusive : kVerified;
  }

  void write(std::ostream& out, bool as_json) const {
    if (as_json) {
      json vals = json::object();
      for (const auto& [label, v] : values) {
        if (const auto* w = std::get_if<DifferentialForm>(&v)) vals[label] = write_form(*w);
        else if (const auto* p = std::get_if<Poly>(&v)) vals[label] = expr::print(*p);
        else vals[label] = std::get<std::string>(v);
      }
      json eqs = json::array();
      for (const Equation& e : equations) {
        json row{{"name", e.name}, {"status", status_word(e.status)}};
        if (e.residual) row["residual"] = *e.residual;
        eqs.push_back(row);
      }
      out << json{{"values", vals}, {"equations", eqs}}.dump() << '\n';
      return;
    }
    for (const auto& [label, v] : values) {
      out << label << " = ";
      if (const auto* w = std::get_if<DifferentialForm>(&v)) out << print(*w);
      else if (const auto* p = std::get_if<Poly>(&v)) out << expr::print(*p);
      else out << std::get<std::string>(v);
      out << '\n';
    }
    for (const Equation& e : equations) {
      out << "EQ " << e.name << ' ' << status_word(e.status);
      if (e.status == ZeroStatus::ProvenNonzero && e.residual) out << ": residual = " << *e.residual;
      out << '\n';
    }
  }
};

std::string shortest(double x) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

void write_form_result(std::ostream& out, const DifferentialForm& w, bool as_json) {
  if (as_json) out << write_form(w).dump() << '\n';
  else out << print(w) << '\n';
}

Report verify_maxwell3(const json& doc) {
  const em3::MaxwellResiduals r = em3::maxwell_residuals(read_field3(doc));
  Report rep;
  rep.check("dD=rho", r.r1);
  rep.check("dH=J+dD/dt", r.r2);
  rep.check("dB=0", r.r3);
  rep.check("dE+dB/dt=0", r.r4);
  return rep;
}

Report verify_maxwell4(const json& doc) {
  const em4::MaxwellResiduals r = em4::maxwell_residuals(read_field4(doc));
  Report rep;
  rep.check("dF=0", r.h);
  rep.check("deltaF=J", r.i);
  return rep;
}

Report verify_potential3(const json& doc) {
  const Potential3Doc d = read_potential3(doc);
  const em3::PotentialResiduals r = em3::potential_equation_residuals(d.p, d.rho, d.J);
  Report rep;
  rep.check("potential-Phi", r.q1);
  rep.check("potential-A", r.q2);
  return rep;
}

Report verify_wave3(const json& doc) {
  const Potential3Doc d = read_potential3(doc);
  const em3::PotentialResiduals r = em3::wave_residuals(d.p, d.rho, d.J);
  Report rep;
  rep.check("lorenz", em3::lorenz_residual(d.p));
  rep.check("wave-Phi", r.q1);
  rep.check("wave-A", r.q2);
  return rep;
}

Report gauge3(const json& doc, const std::string& lambda_text, const Globals& g) {
  const Potential3Doc d = read_potential3(doc);
  const Poly lambda = expr::normalize(expr::parse_expr(lambda_text, g.context(doc, kE3)));
  const em3::Potential p2 = em3::gauge_transform(d.p, lambda);
  const em3::FieldPair before = em3::fields_from_potentials(d.p);
  const em3::FieldPair after = em3::fields_from_potentials(p2);
  Report rep;
  rep.values.emplace_back("A'", p2.A);
  rep.values.emplace_back("Phi'", p2.Phi);
  rep.check("E'=E", after.E - before.E);
  rep.check("B'=B", after.B - before.B);
  return rep;
}

Report gauge4(const json& doc, const std::string& lambda_text, const Globals& g) {
  const DifferentialForm I = read_potential4(doc);
  const Poly lambda = expr::normalize(expr::parse_expr(lambda_text, g.context(doc, kM4)));
  const DifferentialForm I2 = em4::gauge(I, lambda);
  Report rep;
  rep.values.emplace_back("I'", I2);
  rep.check("F'=F", em4::potential_ops(I2).F - em4::potential_ops(I).F);
  return rep;
}

Report lorenz3(const json& doc) {
  Report rep;
  rep.check("lorenz", em3::lorenz_residual(read_potential3(doc).p));
  return rep;
}

Report lorenz4(const json& doc) {
  const em4::PotentialOps ops = em4::potential_ops(read_potential4(doc));
  Report rep;
  rep.values.emplace_back("F", ops.F);
  rep.check("lorenz", ops.lorenz);
  return rep;
}

Report boost(const json& doc, const std::string& zeta_text) {
  const em4::Field f = read_field4(doc);
  const em4::BoostReport r = em4::boost_covariance(f, parse_rational(zeta_text));
  Report rep;
  rep.values.emplace_back("F'", r.F_boosted);
  rep.check("interval", r.interval);
  rep.check("naturality", r.naturality);
  if (r.vacuum_before) rep.check("vacuum", r.vacuum_after);
  return rep;
}

Report continuity(const json& doc, const Globals& g) {
  const std::optional<DifferentialForm> jt = read_current4(doc, g.context(doc, kM4));
  if (!jt) throw InputError("continuity needs a current: Jtilde, or rho and J");
  Report rep;
  rep.check("continuity", em4::continuity_residual(*jt));
  return rep;
}

Report bundle_check(const json& doc) {
  const bundle::Bundle b = read_bundle(doc);
  const bundle::ConnectionReport conn = bundle::cocycle_check(b);
  const bundle::CurvatureReport curv = bundle::curvature_agreement(b);
  Report rep;
  if (curv.F) rep.values.emplace_back("F", *curv.F);
  for (const bundle::OverlapResult& o : conn.overlaps) {
    rep.equations.push_back({"compat(" + o.u + "," + o.v + ")", o.status, print(o.residual)});
  }
  for (const bundle::TripleResult& t : conn.triples) rep.check("cocycle(" + t.u + "," + t.v + "," + t.w + ")", t.status);
  for (const bundle::OverlapResult& o : curv.overlaps) {
    rep.equations.push_back({"curvature(" + o.u + "," + o.v + ")", o.status, print(o.residual)});
  }
  return rep;
}

int simulate(const json& doc, const std::string& dump_prefix, bool as_json, std::ostream& out) {
  const dec::SimConfig cfg = read_sim_config(doc);
  json samples = json::array();
  if (!as_json) out << dec::kCsvHeader << '\n';
  const dec::SimResult r = dec::simulate(cfg, [&](const dec::Diagnostics& d) {
    if (as_json) {
      samples.push_back({{"step", d.step},
                         {"time", d.time},
                         {"divB", d.divB},
                         {"charge_residual", d.charge_residual},
                         {"energy", d.energy}});
    } else {
      out << dec::csv_row(d) << '\n';
    }
  });
  if (as_json) out << json{{"samples", samples}}.dump() << '\n';
  if (!dump_prefix.empty()) {
    const dec::Complex k(cfg.dims, cfg.h);
    for (const auto& [suffix, degree, values] :
         {std::tuple{".e.decf", 1, &r.state.e}, std::tuple{".b.decf", 2, &r.state.b}}) {
      std::ofstream f(dump_prefix + suffix, std::ios::binary);
      if (!f) throw InputError("cannot write " + dump_prefix + suffix);
      dec::write_dump(f, k, degree, *values);
    }
  }
  return kVerified;
}

struct WaveSpeedArgs {
  std::vector<int> dims{60, 8, 8};
  double h = 1.0;
  int wavelength = 20;
  int periods = 2;
  dec::WaveSpeedOptions opts;
};

int wave_speed(const WaveSpeedArgs& a, bool as_json, std::ostream& out) {
  const dec::Complex k({a.dims[0], a.dims[1], a.dims[2]}, a.h);
  const dec::WaveSpeed w = dec::measure_wave_speed(k, a.wavelength, a.periods, a.opts);
  if (as_json) {
    out << json{{"speed", w.speed}, {"steps", w.steps}, {"dt", w.dt}}.dump() << '\n';
  } else {
    out << "speed = " << shortest(w.speed) << '\n' << "steps = " << w.steps << '\n' << "dt = " << shortest(w.dt) << '\n';
  }
  return kVerified;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential-form toolkit for Maxwell's equations", "mwf"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--chart", g.chart, "Chart for form literals")
      ->check(CLI::IsMember({"euclidean3", "minkowski4"}))
      ->capture_default_str();
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--const", g.constants, "Declare a constant symbol usable in expressions (repeatable)")
      ->allow_extra_args(false);

  std::string form_a, form_b;
  auto* deriv = app.add_subcommand("deriv", "Exterior derivative d of a form literal");
  auto* star = app.add_subcommand("star", "Hodge star of a form literal");
  auto* codiff = app.add_subcommand("codiff", "Codifferential *d* of a form literal");
  auto* lap = app.add_subcommand("laplacian", "Laplacian of a form literal (euclidean3)");
  for (CLI::App* sub : {deriv, star, codiff, lap}) sub->add_option("form", form_a, "Form literal")->required();
  auto* wedge_cmd = app.add_subcommand("wedge", "Wedge product of two form literals");
  wedge_cmd->add_option("left", form_a, "Form literal")->required();
  wedge_cmd->add_option("right", form_b, "Form literal")->required();

  std::string file;
  auto* verify = app.add_subcommand("verify", "Check a system of equations; exit 0 verified, 1 refuted, 2 inconclusive");
  verify->require_subcommand(1);
  auto* v_m3 = verify->add_subcommand("maxwell3", "Maxwell's equations for a 3D field document");
  auto* v_m4 = verify->add_subcommand("maxwell4", "dF = 0 and deltaF = J for a 4D field document");
  auto* v_p3 = verify->add_subcommand("potential3", "Potential equations for a 3D potential document");
  auto* v_w3 = verify->add_subcommand("wave3", "Lorenz condition and wave equations for a 3D potential document");
  for (CLI::App* sub : {v_m3, v_m4, v_p3, v_w3}) sub->add_option("file", file, "JSON document")->required();

  std::string lambda, zeta;
  auto* g3 = app.add_subcommand("gauge3", "Gauge-transform a 3D potential and check that E and B are unchanged");
  auto* g4 = app.add_subcommand("gauge4", "Gauge-transform a 4D potential and check that F is unchanged");
  for (CLI::App* sub : {g3, g4}) {
    sub->add_option("--lambda", lambda, "Gauge function")->required();
    sub->add_option("file", file, "JSON potential document")->required();
  }
  auto* l3 = app.add_subcommand("lorenz3", "Lorenz condition for a 3D potential document");
  auto* l4 = app.add_subcommand("lorenz4", "Lorenz condition for a 4D potential document");
  auto* bst = app.add_subcommand("boost", "Boost a 4D field along x1 and check covariance");
  bst->add_option("--zeta", zeta, "Rapidity as an exact rational, e.g. 1/2")->required();
  auto* cont = app.add_subcommand("continuity", "Continuity of the 4-current in a 4D document");
  auto* bchk = app.add_subcommand("bundle-check", "Cocycle and curvature checks for a bundle document");
  for (CLI::App* sub : {l3, l4, bst, cont, bchk}) sub->add_option("file", file, "JSON document")->required();

  std::string config, dump_prefix;
  auto* sim = app.add_subcommand("simulate", "Run the discrete Maxwell solver and print diagnostics as CSV");
  sim->add_option("--config", config, "JSON simulation config")->required();
  sim->add_option("--dump", dump_prefix, "Write final fields to PREFIX.e.decf and PREFIX.b.decf");

  WaveSpeedArgs ws;
  auto* wsp = app.add_subcommand("wave-speed", "Measure the plane-wave speed of the discrete solver, in units of c");
  wsp->add_option("--dims", ws.dims, "Grid cells per axis")->expected(3)->capture_default_str();
  wsp->add_option("--spacing", ws.h, "Grid spacing")->capture_default_str();
  wsp->add_option("--wavelength", ws.wavelength, "Cells per wavelength")->capture_default_str();
  wsp->add_option("--periods", ws.periods, "Periods to track")->capture_default_str();
  wsp->add_option("--courant", ws.opts.courant, "Courant number")->capture_default_str();
  wsp->add_option("--cfl-dims", ws.opts.cfl_dims, "Active dimensions in the CFL limit")->capture_default_str();
  wsp->add_option("--threads", ws.opts.threads, "Worker threads")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kVerified : kUsage;
  }

  try {
    const bool as_json = g.json_output();
    auto doc = [&] { return with_constants(load_json(file), g); };
    auto literal = [&](const std::string& text) { return parse_form(text, g.context()); };
    auto form_result = [&](const DifferentialForm& w) {
      write_form_result(out, w, as_json);
      return static_cast<int>(kVerified);
    };
    auto report = [&](const Report& r) {
      r.write(out, as_json);
      return r.exit_code();
    };

    if (deriv->parsed()) return form_result(ext_d(literal(form_a)));
    if (star->parsed()) return form_result(hodge(literal(form_a)));
    if (codiff->parsed()) return form_result(mwf::codiff(literal(form_a)));
    if (lap->parsed()) return form_result(laplacian(literal(form_a)));
    if (wedge_cmd->parsed()) return form_result(wedge(literal(form_a), literal(form_b)));
    if (v_m3->parsed()) return report(verify_maxwell3(doc()));
    if (v_m4->parsed()) return report(verify_maxwell4(doc()));
    if (v_p3->parsed()) return report(verify_potential3(doc()));
    if (v_w3->parsed()) return report(verify_wave3(doc()));
    if (g3->parsed()) return report(gauge3(doc(), lambda, g));
    if (g4->parsed()) return report(gauge4(doc(), lambda, g));
    if (l3->parsed()) return report(lorenz3(doc()));
    if (l4->parsed()) return report(lorenz4(doc()));
    if (bst->parsed()) return report(boost(doc(), zeta));
    if (cont->parsed()) return report(continuity(doc(), g));
    if (bchk->parsed()) return report(bundle_check(doc()));
    if (sim->parsed()) return simulate(load_json(config), dump_prefix, as_json, out);
    if (wsp->parsed()) return wave_speed(ws, as_json, out);
    err << app.help();
    return kUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kBadInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace mwf::cli
