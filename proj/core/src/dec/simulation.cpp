#include "mwf/dec/simulation.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace mwf::dec {

namespace {

constexpr std::uint32_t kDumpVersion = 1;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("truncated field dump");
  return to_little(v);
}

std::string shortest(double x) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

}  // namespace

SimResult simulate(const SimConfig& cfg, const std::function<void(const Diagnostics&)>& on_sample) {
  if (cfg.steps < 0) throw std::invalid_argument("steps must be non-negative");
  if (cfg.diagnostics_every <= 0) throw std::invalid_argument("diagnostics cadence must be positive");
  const Complex k(cfg.dims, cfg.h);
  const Units units = cfg.si_units ? Units::si() : Units::normalized();
  const double dt = cfg.dt ? *cfg.dt : dt_from_courant(k, units, cfg.courant, cfg.cfl_dims);
  const Solver solver(k, dt, units, cfg.cfl_dims, cfg.threads);

  SimResult out;
  if (const auto* wave = std::get_if<PlaneWave>(&cfg.initial)) {
    out.state = plane_wave_state(solver, *wave);
  } else {
    out.state = solver.zero_state();
  }

  auto emit = [&](const Diagnostics& d) {
    out.samples.push_back(d);
    if (on_sample) on_sample(d);
  };
  emit(diagnostics(solver, out.state, {}, {}));

  std::vector<double> rho = gauss_charge(k, out.state);
  std::vector<double> j;
  for (long n = 0; n < cfg.steps; ++n) {
    if (cfg.source) j = pulse_flux(k, *cfg.source, (static_cast<double>(n) + 0.5) * dt);
    solver.step(out.state, j);
    const bool sample = (n + 1) % cfg.diagnostics_every == 0 || n + 1 == cfg.steps;
    if (sample) emit(diagnostics(solver, out.state, rho, j));
    // The residual compares consecutive steps, so the reference charge advances every step.
    rho = gauss_charge(k, out.state);
  }
  return out;
}

std::string csv_row(const Diagnostics& d) {
  return std::to_string(d.step) + "," + shortest(d.time) + "," + shortest(d.divB) + "," +
         shortest(d.charge_residual) + "," + shortest(d.energy);
}

void write_dump(std::ostream& os, const Complex& k, int degree, const std::vector<double>& values) {
  if (values.size() != k.cells(degree)) throw std::invalid_argument("dump size does not match the cochain degree");
  os.write("DECF", 4);
  put<std::uint32_t>(os, kDumpVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(degree));
  for (int d : k.dims()) put<std::uint32_t>(os, static_cast<std::uint32_t>(d));
  put<std::uint64_t>(os, 0);
  for (double v : values) put<double>(os, v);
}

Dump read_dump(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "DECF", 4) != 0) throw std::runtime_error("not a DECF field dump");
  if (get<std::uint32_t>(is) != kDumpVersion) throw std::runtime_error("unsupported DECF version");
  Dump d;
  d.degree = get<std::uint32_t>(is);
  if (d.degree > 3) throw std::runtime_error("DECF degree out of range");
  for (int& n : d.dims) n = static_cast<int>(get<std::uint32_t>(is));
  get<std::uint64_t>(is);
  const std::size_t n = static_cast<std::size_t>(d.dims[0]) * d.dims[1] * d.dims[2];
  const std::size_t count = (d.degree == 1 || d.degree == 2) ? 3 * n : n;
  d.values.resize(count);
  for (double& v : d.values) v = get<double>(is);
  return d;
}

}  // namespace mwf::dec
