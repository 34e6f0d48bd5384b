#include "mwf/cli/cli.hpp"
#include "mwf/cli/documents.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mwf;
using namespace mwf::cli;

namespace {

const std::filesystem::path kGolden = MWF_GOLDEN_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) { return (kGolden / name).string(); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name, const std::string& contents) {
  const auto p = std::filesystem::temp_directory_path() / ("mwf_cli_test_" + name);
  std::ofstream(p) << contents;
  return p;
}

}  // namespace

TEST_SUITE("golden") {
  TEST_CASE("plane wave satisfies the spacetime equations") {
    const Result r = invoke({"verify", "maxwell4", golden("planewave.json")});
    CHECK(r.code == 0);
    CHECK(r.out == "EQ dF=0 verified\nEQ deltaF=J verified\n");
    CHECK(r.out == slurp(kGolden / "maxwell4_planewave.out"));
  }

  TEST_CASE("Hodge star of dx0^dx1") {
    const Result r = invoke({"star", "--chart", "minkowski4", "dx0^dx1"});
    CHECK(r.code == 0);
    CHECK(r.out == "-1 dx2^dx3\n");
    CHECK(r.out == slurp(kGolden / "star_minkowski4.out"));
  }

  TEST_CASE("bad field refutes Gauss's law") {
    const Result r = invoke({"verify", "maxwell3", golden("badfield.json")});
    CHECK(r.code == 1);
    CHECK(r.out.rfind("EQ dD=rho refuted: residual = eps0 dx1^dx2^dx3\n", 0) == 0);
    CHECK(r.out == slurp(kGolden / "maxwell3_badfield.out"));
  }

  TEST_CASE("corrupted bundle names its overlap") {
    const Result r = invoke({"bundle-check", golden("bundle_corrupt.json")});
    CHECK(r.code == 1);
    CHECK(r.out == slurp(kGolden / "bundle_corrupt.out"));
    CHECK(invoke({"bundle-check", golden("bundle.json")}).code == 0);
  }

  TEST_CASE("reports are byte-stable across runs") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"verify", "maxwell4", golden("planewave.json")},
          std::vector<std::string>{"boost", "--zeta", "1/2", golden("planewave.json")},
          std::vector<std::string>{"--format", "json", "verify", "maxwell3", golden("badfield.json")}}) {
      CHECK(invoke(args).out == invoke(args).out);
    }
  }
}

TEST_SUITE("exit codes") {
  TEST_CASE("usage errors") {
    CHECK(invoke({}).code == kUsage);
    CHECK(invoke({"frobnicate"}).code == kUsage);
    CHECK(invoke({"verify"}).code == kUsage);
    CHECK(invoke({"verify", "maxwell9", "x.json"}).code == kUsage);
    CHECK(invoke({"star"}).code == kUsage);
    CHECK(invoke({"--format", "xml", "star", "dx1"}).code == kUsage);
    CHECK(invoke({"--chart", "sphere", "star", "dx1"}).code == kUsage);
    CHECK(invoke({"gauge3", golden("planewave.json")}).code == kUsage);
  }

  TEST_CASE("input errors") {
    CHECK(invoke({"star", "dx1 +"}).code == kBadInput);
    CHECK(invoke({"star", "E0 dx1"}).code == kBadInput);
    CHECK(invoke({"verify", "maxwell3", golden("does_not_exist.json")}).code == kBadInput);
    CHECK(invoke({"verify", "maxwell3", scratch("broken.json", "{\"E\": ").string()}).code == kBadInput);
    CHECK(invoke({"verify", "maxwell3", scratch("key.json", "{\"Q\": \"dx1\"}").string()}).code == kBadInput);
    CHECK(invoke({"verify", "maxwell3", scratch("deg.json", "{\"E\": \"dx1^dx2\"}").string()}).code == kBadInput);
    CHECK(invoke({"verify", "maxwell4", scratch("chart.json", "{\"F\": {\"chart\": \"euclidean3\", \"degree\": 2}}")
                                            .string()})
              .code == kBadInput);
    CHECK(invoke({"--chart", "minkowski4", "laplacian", "x0"}).code == kBadInput);
    CHECK(invoke({"boost", "--zeta", "one", golden("planewave.json")}).code == kBadInput);
    CHECK(invoke({"continuity", golden("planewave.json")}).code == kBadInput);
    CHECK(invoke({"wave-speed", "--dims", "64", "8", "8"}).code == kBadInput);
    CHECK(invoke({"wave-speed", "--courant", "1.5"}).code == kBadInput);
  }

  TEST_CASE("inconclusive is distinct from refuted") {
    const auto doc = scratch("opaque.json", R"j({"E": ["F1(x0,x1,x2,x3)", "0", "0"]})j");
    const Result r = invoke({"verify", "maxwell4", doc.string()});
    CHECK(r.code == kInconclusive);
    CHECK(r.out.find("inconclusive") != std::string::npos);
  }

  TEST_CASE("every subcommand has help") {
    for (const std::vector<std::string>& cmd :
         {std::vector<std::string>{"deriv"}, {"star"}, {"codiff"}, {"wedge"}, {"laplacian"}, {"verify"},
          {"verify", "maxwell3"}, {"verify", "maxwell4"}, {"verify", "potential3"}, {"verify", "wave3"},
          {"gauge3"}, {"gauge4"}, {"lorenz3"}, {"lorenz4"}, {"boost"}, {"continuity"}, {"bundle-check"},
          {"simulate"}, {"wave-speed"}}) {
      std::vector<std::string> args = cmd;
      args.push_back("--help");
      const Result r = invoke(args);
      CHECK(r.code == 0);
      CHECK(r.out.find("Usage:") != std::string::npos);
      CHECK(r.out.find("--help") != std::string::npos);
    }
    CHECK(invoke({"boost", "--help"}).out.find("--zeta") != std::string::npos);
    CHECK(invoke({"gauge4", "--help"}).out.find("--lambda") != std::string::npos);
    CHECK(invoke({"simulate", "--help"}).out.find("--config") != std::string::npos);
    CHECK(invoke({"--help"}).out.find("--format") != std::string::npos);
  }
}

TEST_SUITE("subcommands") {
  TEST_CASE("form operators") {
    CHECK(invoke({"deriv", "x1*x2 dx3"}).out == "x2 dx1^dx3 + x1 dx2^dx3\n");
    CHECK(invoke({"deriv", "x1 dx1 + x2 dx2"}).out == "0\n");
    CHECK(invoke({"star", "dx1"}).out == "1 dx2^dx3\n");
    CHECK(invoke({"codiff", "x1 dx1 + x2 dx2"}).out == "2\n");
    CHECK(invoke({"laplacian", "x1^2*x2"}).out == "2*x2\n");
    CHECK(invoke({"wedge", "dx1", "dx2"}).out == "1 dx1^dx2\n");
    CHECK(invoke({"wedge", "dx2", "dx1"}).out == "-1 dx1^dx2\n");
    CHECK(invoke({"--const", "E0", "star", "E0 dx1"}).out == "E0 dx2^dx3\n");
    CHECK(invoke({"star", "--chart", "minkowski4", "dx1^dx2"}).out == "1 dx0^dx3\n");
  }

  TEST_CASE("JSON form output parses back") {
    const Result r = invoke({"--format", "json", "star", "--chart", "minkowski4", "x1 dx0^dx1"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    const DifferentialForm w = read_form(doc, expr::ParseContext{Chart::minkowski4(), {}});
    CHECK(w == parse_form("-x1 dx2^dx3", Chart::minkowski4()));
  }

  TEST_CASE("JSON verdicts") {
    const json doc = json::parse(invoke({"--format", "json", "verify", "maxwell3", golden("badfield.json")}).out);
    REQUIRE(doc["equations"].size() == 4);
    CHECK(doc["equations"][0]["name"] == "dD=rho");
    CHECK(doc["equations"][0]["status"] == "refuted");
    CHECK(doc["equations"][0]["residual"] == "eps0 dx1^dx2^dx3");
    CHECK(doc["equations"][1]["status"] == "verified");
  }

  TEST_CASE("gauge and Lorenz") {
    const auto p3 = scratch("p3.json", R"j({"Phi": "x1*t", "A": "x2 dx1"})j");
    const Result g = invoke({"gauge3", "--lambda", "x1*x2*t", p3.string()});
    CHECK(g.code == 0);
    CHECK(g.out.find("EQ E'=E verified\nEQ B'=B verified\n") != std::string::npos);
    CHECK(invoke({"lorenz3", p3.string()}).out == "EQ lorenz refuted: residual = x1/c^2\n");

    const auto static_p = scratch("p3s.json", R"j({"Phi": "x1", "A": "x2 dx1 - x1 dx2"})j");
    CHECK(invoke({"lorenz3", static_p.string()}).code == 0);

    const auto p4 = scratch("p4.json", R"j({"Phi": "x0*x1", "A": ["0", "0", "0"]})j");
    const Result l4 = invoke({"lorenz4", p4.string()});
    CHECK(l4.code == 1);
    CHECK(l4.out.find("EQ lorenz refuted: residual = x1\n") != std::string::npos);
    CHECK(invoke({"gauge4", "--lambda", "sin(x0)*x3", p4.string()}).code == 0);
  }

  TEST_CASE("potential and wave verification") {
    // A static point-free configuration: Phi = x1^2 - x2^2 is harmonic, A = 0.
    const auto vac = scratch("vac.json", R"j({"Phi": "x1^2 - x2^2"})j");
    CHECK(invoke({"verify", "potential3", vac.string()}).code == 0);
    CHECK(invoke({"verify", "wave3", vac.string()}).code == 0);
    const auto charged = scratch("charged.json", R"j({"Phi": "x1^2"})j");
    CHECK(invoke({"verify", "wave3", charged.string()}).code == 1);
  }

  TEST_CASE("continuity of a 4-current") {
    const auto steady = scratch("steady.json", R"j({"rho": "x1", "J": ["x2", "x3", "x1"]})j");
    CHECK(invoke({"continuity", steady.string()}).out == "EQ continuity verified\n");
    const auto growing = scratch("growing.json", R"j({"Jtilde": "x0 dx0"})j");
    CHECK(invoke({"continuity", growing.string()}).out == "EQ continuity refuted: residual = -1\n");
  }

  TEST_CASE("boost of the plane wave") {
    for (const char* zeta : {"1/2", "1", "2"}) {
      const Result r = invoke({"boost", "--zeta", zeta, golden("planewave.json")});
      CHECK(r.code == 0);
      CHECK(r.out.find("EQ interval verified\nEQ naturality verified\nEQ vacuum verified\n") != std::string::npos);
    }
  }

  TEST_CASE("simulation CSV and dumps") {
    const auto cfg = scratch("sim.json", R"j({"dims": [20, 4, 4], "steps": 20, "diagnostics_every": 10,
        "initial": {"type": "plane_wave", "axis": 0, "cells_per_wavelength": 10, "polarization": 1}})j");
    const auto prefix = (std::filesystem::temp_directory_path() / "mwf_cli_test_dump").string();
    const Result r = invoke({"simulate", "--config", cfg.string(), "--dump", prefix});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "step,time,divB,charge_residual,energy");
    CHECK(rows[1].rfind("0,0,0,0,", 0) == 0);
    CHECK(rows[3].rfind("20,", 0) == 0);
    CHECK(std::filesystem::file_size(prefix + ".e.decf") == 32 + 8 * 3 * 320);
    CHECK(std::filesystem::file_size(prefix + ".b.decf") == 32 + 8 * 3 * 320);
    CHECK(invoke({"simulate", "--config", cfg.string()}).out == r.out);

    const auto bad = scratch("badsim.json", R"j({"dims": [20, 4, 4], "initial": "sine"})j");
    CHECK(invoke({"simulate", "--config", bad.string()}).code == kBadInput);
    const auto fast = scratch("fastsim.json", R"j({"dims": [20, 4, 4], "dt": 1.0})j");
    CHECK(invoke({"simulate", "--config", fast.string()}).code == kBadInput);
  }

  TEST_CASE("wave speed") {
    const Result r = invoke({"--format", "json", "wave-speed", "--dims", "40", "4", "4", "--wavelength", "20"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["speed"].get<double>() == doctest::Approx(0.99623).epsilon(1e-4));
  }
}
