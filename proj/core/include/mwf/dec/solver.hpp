#pragma once

// Leapfrog (Yee) time stepping of the discrete Maxwell system on a periodic
// cubical complex. The state at integer step n holds e^n on primal edges and
// b^(n-1/2) on primal faces; currents are fluxes through dual faces, one per
// primal edge, and charges live on dual volumes, one per primal vertex.

#include "mwf/dec/complex.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mwf::dec {

struct Units {
  double eps0 = 1.0;
  double mu0 = 1.0;
  double c() const;

  static Units normalized() { return {}; }
  static Units si();
};

class CflViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Largest stable step c dt <= h / sqrt(cfl_dims). cfl_dims = 3 in general; fields that are
/// uniform along some axes may declare fewer active dimensions.
double max_stable_dt(const Complex& k, const Units& u, int cfl_dims = 3);

/// dt = courant * h / (c sqrt(cfl_dims)).
double dt_from_courant(const Complex& k, const Units& u, double courant, int cfl_dims = 3);

struct SimState {
  std::vector<double> e;  // e^n, one value per edge
  std::vector<double> b;  // b^(n-1/2), one value per face
  long n = 0;
  double dt = 0.0;
  Units units;
};

class Solver {
 public:
  /// Throws CflViolation if dt exceeds max_stable_dt(k, units, cfl_dims).
  Solver(const Complex& k, double dt, Units units = {}, int cfl_dims = 3, int threads = 1);

  const Complex& complex() const noexcept { return k_; }
  double dt() const noexcept { return dt_; }
  const Units& units() const noexcept { return units_; }

  SimState zero_state() const;
  /// Throws std::invalid_argument on size mismatch.
  SimState make_state(std::vector<double> e, std::vector<double> b_half_before) const;

  /// b^(n+1/2) = b^(n-1/2) - dt d1 e^n
  /// e^(n+1)   = e^n + (dt/eps0) H1^-1 (d1^T H2 (1/mu0) b^(n+1/2) - j)
  /// `j` is the current flux at time n+1/2; empty means no source. Bit-identical for any thread count.
  void step(SimState& s, const std::vector<double>& j = {}) const;

  /// b^(n+1/2) for the current state without advancing it.
  std::vector<double> next_b(const SimState& s) const;

 private:
  const Complex& k_;
  double dt_;
  Units units_;
  int threads_;
};

/// Dual 3-cochain dD = -d0^T (eps0 H1 e).
std::vector<double> gauss_charge(const Complex& k, const SimState& s);

struct Diagnostics {
  long step = 0;
  double time = 0.0;
  double divB = 0.0;             // max |d2 b|
  double charge_residual = 0.0;  // max |(rho^(n+1) - rho^n)/dt - d0^T j|
  double energy = 0.0;
};

/// `rho_prev` is the dual charge before the last step (empty for the initial sample);
/// `j` the flux used by that step. Energy pairs b^(n-1/2) with b^(n+1/2), the quadratic
/// form the leapfrog update conserves.
Diagnostics diagnostics(const Solver& solver, const SimState& s, const std::vector<double>& rho_prev,
                        const std::vector<double>& j);

struct PlaneWave {
  int axis = 0;                  // propagation direction
  int cells_per_wavelength = 20;
  int polarization = 1;          // direction of E, different from axis
  double amplitude = 1.0;
};

/// Discrete angular frequency of an axis-aligned mode: sin(w dt / 2) = (c dt / h) sin(kh / 2).
double yee_omega(double k, double h, double dt, double c);

/// Exact discrete eigenmode: e sampled at t = 0, b at t = -dt/2 with the discrete frequency.
/// Throws ComplexError if the wavelength does not divide the grid along the axis.
SimState plane_wave_state(const Solver& solver, const PlaneWave& wave);

/// Gaussian current pulse through the dual face of one edge.
struct CurrentPulse {
  int axis = 2;
  std::array<int, 3> cell{0, 0, 0};
  double amplitude = 1.0;
  double t0 = 0.0;
  double width = 1.0;
};

std::vector<double> pulse_flux(const Complex& k, const CurrentPulse& p, double t);

struct WaveSpeedOptions {
  double courant = 0.5;
  int cfl_dims = 3;
  int threads = 1;
};

struct WaveSpeed {
  double speed = 0.0;  // in units of c
  long steps = 0;
  double dt = 0.0;
};

/// Launches an x-directed plane wave, follows the phase of its Fourier mode along the x-line
/// through the origin and fits a line to the unwrapped phase. Throws ComplexError if the
/// wavelength does not divide Nx.
WaveSpeed measure_wave_speed(const Complex& k, int wavelength_cells, int periods, const WaveSpeedOptions& opts = {});

}  // namespace mwf::dec
