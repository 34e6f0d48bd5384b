#pragma once

// Configured simulation runs, CSV diagnostics and raw field dumps.
//
// Dump layout (little-endian): "DECF", u32 version = 1, u32 degree, u32 Nx, Ny, Nz,
// 8 reserved zero bytes, then one float64 per cell.

#include "mwf/dec/solver.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mwf::dec {

struct ZeroInitial {};

struct SimConfig {
  Dims dims{16, 16, 16};
  double h = 1.0;
  std::optional<double> dt;       // wins over courant when set
  double courant = 0.5;
  int cfl_dims = 3;
  long steps = 100;
  bool si_units = false;
  std::variant<ZeroInitial, PlaneWave> initial;
  std::optional<CurrentPulse> source;
  long diagnostics_every = 1;     // also sampled at step 0 and at the last step
  int threads = 1;
};

struct SimResult {
  SimState state;
  std::vector<Diagnostics> samples;
};

/// Runs the configured simulation. `on_sample` (optional) sees each diagnostics row as it is produced.
SimResult simulate(const SimConfig& cfg, const std::function<void(const Diagnostics&)>& on_sample = {});

inline constexpr const char* kCsvHeader = "step,time,divB,charge_residual,energy";
/// One CSV row with round-trippable doubles.
std::string csv_row(const Diagnostics& d);

struct Dump {
  std::uint32_t degree = 0;
  Dims dims{};
  std::vector<double> values;
};

void write_dump(std::ostream& os, const Complex& k, int degree, const std::vector<double>& values);
/// Throws std::runtime_error on a malformed header or truncated data.
Dump read_dump(std::istream& is);

}  // namespace mwf::dec
