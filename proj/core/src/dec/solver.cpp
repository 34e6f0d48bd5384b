#include "mwf/dec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

namespace mwf::dec {

namespace {

// Fixed tiling: tile t covers [t*count/threads, (t+1)*count/threads). Each element is written by
// exactly one tile with the same arithmetic as the serial loop, so results do not depend on threads.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count < 4096) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    const std::size_t lo = count * t / threads, hi = count * (t + 1) / threads;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (std::thread& th : pool) th.join();
}

double row_dot(const Csr& m, std::size_t r, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t p = m.row_ptr()[r]; p < m.row_ptr()[r + 1]; ++p) s += m.val()[p] * x[m.col()[p]];
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double Units::c() const { return 1.0 / std::sqrt(eps0 * mu0); }

Units Units::si() { return {8.8541878128e-12, 1.25663706212e-6}; }

double max_stable_dt(const Complex& k, const Units& u, int cfl_dims) {
  if (cfl_dims < 1 || cfl_dims > 3) throw std::invalid_argument("cfl_dims must be 1, 2 or 3");
  return k.h() / (u.c() * std::sqrt(static_cast<double>(cfl_dims)));
}

double dt_from_courant(const Complex& k, const Units& u, double courant, int cfl_dims) {
  if (!(courant > 0)) throw std::invalid_argument("courant number must be positive");
  return courant * max_stable_dt(k, u, cfl_dims);
}

Solver::Solver(const Complex& k, double dt, Units units, int cfl_dims, int threads)
    : k_(k), dt_(dt), units_(units), threads_(std::max(1, threads)) {
  if (!(dt > 0) || !std::isfinite(dt)) throw CflViolation("time step must be positive");
  const double limit = max_stable_dt(k, units, cfl_dims);
  if (dt > limit * (1 + 1e-12)) {
    throw CflViolation("time step " + std::to_string(dt) + " exceeds the CFL limit " + std::to_string(limit));
  }
}

SimState Solver::zero_state() const {
  SimState s;
  s.e.assign(k_.edges(), 0.0);
  s.b.assign(k_.faces(), 0.0);
  s.dt = dt_;
  s.units = units_;
  return s;
}

SimState Solver::make_state(std::vector<double> e, std::vector<double> b_half_before) const {
  if (e.size() != k_.edges() || b_half_before.size() != k_.faces()) {
    throw std::invalid_argument("state arrays do not match the complex");
  }
  SimState s;
  s.e = std::move(e);
  s.b = std::move(b_half_before);
  s.dt = dt_;
  s.units = units_;
  return s;
}

void Solver::step(SimState& s, const std::vector<double>& j) const {
  if (!j.empty() && j.size() != k_.edges()) throw std::invalid_argument("current flux size mismatch");
  const Csr& d1 = k_.d1();
  const Csr& d1t = k_.d1t();
  const double dt = dt_;
  parallel_for(k_.faces(), threads_, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t f = lo; f < hi; ++f) s.b[f] -= dt * row_dot(d1, f, s.e);
  });
  const double curl_scale = k_.hodge2() / units_.mu0;
  const double e_scale = dt / (units_.eps0 * k_.hodge1());
  parallel_for(k_.edges(), threads_, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      double rhs = curl_scale * row_dot(d1t, r, s.b);
      if (!j.empty()) rhs -= j[r];
      s.e[r] += e_scale * rhs;
    }
  });
  ++s.n;
}

std::vector<double> Solver::next_b(const SimState& s) const {
  std::vector<double> out = k_.d1().apply(s.e);
  for (std::size_t f = 0; f < out.size(); ++f) out[f] = s.b[f] - dt_ * out[f];
  return out;
}

std::vector<double> gauss_charge(const Complex& k, const SimState& s) {
  std::vector<double> flux(s.e.size());
  const double w = s.units.eps0 * k.hodge1();
  for (std::size_t i = 0; i < flux.size(); ++i) flux[i] = w * s.e[i];
  std::vector<double> rho = k.d0t().apply(flux);
  for (double& r : rho) r = -r;
  return rho;
}

Diagnostics diagnostics(const Solver& solver, const SimState& s, const std::vector<double>& rho_prev,
                        const std::vector<double>& j) {
  const Complex& k = solver.complex();
  Diagnostics d;
  d.step = s.n;
  d.time = static_cast<double>(s.n) * s.dt;
  d.divB = max_abs(k.d2().apply(s.b));

  if (!rho_prev.empty()) {
    const std::vector<double> rho = gauss_charge(k, s);
    std::vector<double> source(rho.size(), 0.0);
    if (!j.empty()) source = k.d0t().apply(j);
    double worst = 0.0;
    for (std::size_t v = 0; v < rho.size(); ++v) {
      worst = std::max(worst, std::abs((rho[v] - rho_prev[v]) / s.dt - source[v]));
    }
    d.charge_residual = worst;
  }

  const std::vector<double> b_next = solver.next_b(s);
  double ee = 0.0, bb = 0.0;
  for (double x : s.e) ee += x * x;
  for (std::size_t f = 0; f < b_next.size(); ++f) bb += s.b[f] * b_next[f];
  d.energy = 0.5 * (s.units.eps0 * k.hodge1() * ee + k.hodge2() / s.units.mu0 * bb);
  return d;
}

double yee_omega(double k, double h, double dt, double c) {
  return 2.0 / dt * std::asin(c * dt / h * std::sin(k * h / 2.0));
}

SimState plane_wave_state(const Solver& solver, const PlaneWave& w) {
  const Complex& k = solver.complex();
  if (w.axis < 0 || w.axis > 2 || w.polarization < 0 || w.polarization > 2 || w.axis == w.polarization) {
    throw ComplexError("plane wave needs distinct axis and polarization in 0..2");
  }
  const int n_axis = k.dims()[w.axis];
  if (w.cells_per_wavelength <= 0 || n_axis % w.cells_per_wavelength != 0) {
    throw ComplexError("wavelength of " + std::to_string(w.cells_per_wavelength) + " cells does not divide " +
                       std::to_string(n_axis));
  }
  const int q = 3 - w.axis - w.polarization;
  // Levi-Civita sign of (axis, polarization, q): B = (axis x E)/c.
  const double orient = (w.polarization == (w.axis + 1) % 3) ? 1.0 : -1.0;
  const double h = k.h();
  const double c = solver.units().c();
  const double wavenumber = 2.0 * std::numbers::pi / (w.cells_per_wavelength * h);
  const double omega = yee_omega(wavenumber, h, solver.dt(), c);
  const double phase_b = omega * solver.dt() / 2.0;

  SimState s = solver.zero_state();
  for (std::size_t v = 0; v < k.n(); ++v) {
    const std::size_t edge = w.polarization * k.n() + v;
    s.e[edge] = h * w.amplitude * std::sin(wavenumber * k.center(1, edge)[w.axis]);
    const std::size_t face = q * k.n() + v;
    s.b[face] = orient * h * h * w.amplitude / c * std::sin(wavenumber * k.center(2, face)[w.axis] + phase_b);
  }
  return s;
}

std::vector<double> pulse_flux(const Complex& k, const CurrentPulse& p, double t) {
  if (p.axis < 0 || p.axis > 2) throw ComplexError("pulse axis must be 0..2");
  std::vector<double> j(k.edges(), 0.0);
  const double x = (t - p.t0) / p.width;
  j[p.axis * k.n() + k.vertex(p.cell[0], p.cell[1], p.cell[2])] = p.amplitude * std::exp(-x * x);
  return j;
}

WaveSpeed measure_wave_speed(const Complex& k, int wavelength_cells, int periods, const WaveSpeedOptions& opts) {
  if (periods <= 0) throw std::invalid_argument("periods must be positive");
  const Units units;
  const Solver solver(k, dt_from_courant(k, units, opts.courant, opts.cfl_dims), units, opts.cfl_dims, opts.threads);
  SimState s = plane_wave_state(solver, {0, wavelength_cells, 1, 1.0});

  const double h = k.h();
  const double wavenumber = 2.0 * std::numbers::pi / (wavelength_cells * h);
  const double period = wavelength_cells * h / units.c();
  const long steps = static_cast<long>(std::ceil(periods * period / solver.dt()));

  auto phase = [&] {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < k.dims()[0]; ++i) {
      const std::size_t edge = 1 * k.n() + k.vertex(i, 0, 0);
      acc += s.e[edge] * std::polar(1.0, -wavenumber * k.center(1, edge)[0]);
    }
    return std::arg(acc);
  };

  // Least-squares slope of the unwrapped phase against time.
  double last = phase(), unwrapped = last;
  double st = 0, sp = 0, stt = 0, stp = 0;
  auto accumulate = [&](double t, double p) {
    st += t;
    sp += p;
    stt += t * t;
    stp += t * p;
  };
  accumulate(0.0, unwrapped);
  for (long n = 1; n <= steps; ++n) {
    solver.step(s);
    const double p = phase();
    double delta = p - last;
    while (delta > std::numbers::pi) delta -= 2 * std::numbers::pi;
    while (delta < -std::numbers::pi) delta += 2 * std::numbers::pi;
    unwrapped += delta;
    last = p;
    accumulate(n * solver.dt(), unwrapped);
  }
  const double m = static_cast<double>(steps + 1);
  const double slope = (m * stp - st * sp) / (m * stt - st * st);
  return {-slope / (wavenumber * units.c()), steps, solver.dt()};
}

}  // namespace mwf::dec
