#include "mwf/dec/simulation.hpp"
#include "support/random_expr.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace mwf;
using namespace mwf::dec;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> random_vector(testing::Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

// Independent dispersion oracle for an axis-aligned mode: sin(w dt/2) = (c dt/h) sin(k h/2).
double oracle_speed(int cells_per_wavelength, double courant_axis) {
  const double kh = 2 * kPi / cells_per_wavelength;
  const double w_dt = 2 * std::asin(courant_axis * std::sin(kh / 2));
  return w_dt / (kh * courant_axis);
}

}  // namespace

TEST_SUITE("complex") {
  TEST_CASE("cell counts") {
    const Complex k({4, 4, 4}, 1.0);
    CHECK(k.vertices() == 64);
    CHECK(k.edges() == 192);
    CHECK(k.faces() == 192);
    CHECK(k.volumes() == 64);
    const Complex r({5, 6, 7}, 0.1);
    CHECK(r.edges() == 3 * 210);
    CHECK(r.d0().rows() == r.edges());
    CHECK(r.d1().cols() == r.edges());
    CHECK(r.d2().rows() == r.volumes());
  }

  TEST_CASE("boundary of a boundary vanishes exactly") {
    for (const Dims& d : {Dims{4, 4, 4}, Dims{5, 4, 6}, Dims{7, 9, 4}}) {
      const Complex k(d, 0.25);
      CHECK((k.d1() * k.d0()).max_abs() == 0);
      CHECK((k.d2() * k.d1()).max_abs() == 0);
      CHECK(k.d1().max_abs() == 1);
    }
  }

  TEST_CASE("incidence rows have the expected shape") {
    const Complex k({4, 5, 6}, 1.0);
    for (std::size_t r = 0; r < k.edges(); ++r) CHECK(k.d0().row_ptr()[r + 1] - k.d0().row_ptr()[r] == 2);
    for (std::size_t r = 0; r < k.faces(); ++r) CHECK(k.d1().row_ptr()[r + 1] - k.d1().row_ptr()[r] == 4);
    for (std::size_t r = 0; r < k.volumes(); ++r) CHECK(k.d2().row_ptr()[r + 1] - k.d2().row_ptr()[r] == 6);
    // The xy face at the origin circulates x, then y at x = h, then back.
    const std::size_t n = k.n();
    const std::size_t face = 2 * n;
    CHECK(k.d1().at(face, 0 * n + 0) == 1);
    CHECK(k.d1().at(face, 1 * n + k.vertex(1, 0, 0)) == 1);
    CHECK(k.d1().at(face, 0 * n + k.vertex(0, 1, 0)) == -1);
    CHECK(k.d1().at(face, 1 * n + 0) == -1);
  }

  TEST_CASE("hodge weights") {
    const Complex k({4, 4, 4}, 0.3);
    CHECK(k.hodge1() == doctest::Approx(0.3));
    CHECK(k.hodge2() == doctest::Approx(1 / 0.3));
  }

  TEST_CASE("invalid construction") {
    CHECK_THROWS_AS(Complex({3, 4, 4}, 1.0), ComplexError);
    CHECK_THROWS_AS(Complex({4, 4, 4}, 0.0), ComplexError);
    CHECK_THROWS_AS(Complex({4, 4, 4}, -1.0), ComplexError);
  }

  TEST_CASE("transpose round trip") {
    const Complex k({4, 5, 4}, 1.0);
    const Csr tt = k.d1t().transpose();
    CHECK(tt.row_ptr() == k.d1().row_ptr());
    CHECK(tt.col() == k.d1().col());
    CHECK(tt.val() == k.d1().val());
  }
}

TEST_SUITE("sampling") {
  TEST_CASE("constant field along x") {
    const Complex k({4, 4, 4}, 0.5);
    const std::vector<double> e = sample(k, 1, VectorField{[](const Point&) { return 1.0; }, {}, {}});
    for (std::size_t i = 0; i < k.edges(); ++i) CHECK(e[i] == (i < k.n() ? 0.5 : 0.0));
  }

  TEST_CASE("sinusoid on an aligned grid") {
    const int N = 16;
    const Complex k({N, 4, 4}, 1.0 / N);
    const std::vector<double> e =
        sample(k, 1, VectorField{ScalarField{}, [](const Point& x) { return std::sin(2 * kPi * x[0]); }, {}});
    for (int i = 0; i < N; ++i) {
      CHECK(e[k.n() + k.vertex(i, 1, 2)] == doctest::Approx(std::sin(2 * kPi * i / N) / N).epsilon(1e-12));
    }
  }

  TEST_CASE("d1 of a sampled potential is closed") {
    const Complex k({6, 5, 4}, 0.2);
    const std::vector<double> a = sample(k, 1,
                                         VectorField{[](const Point& x) { return std::sin(x[1]) * x[2]; },
                                                     [](const Point& x) { return std::cos(3 * x[0]); },
                                                     [](const Point& x) { return x[0] * x[1]; }});
    CHECK(max_abs(k.d2().apply(k.d1().apply(a))) < 1e-14);

    testing::Rng rng(3);
    std::vector<double> ints(k.edges());
    for (double& x : ints) x = testing::uniform_int(rng, -1000, 1000);
    CHECK(max_abs(k.d2().apply(k.d1().apply(ints))) == 0.0);
  }

  TEST_CASE("sampling d1 of A approximates B to second order") {
    // A = (0, sin(2 pi x), 0) gives B_z = 2 pi cos(2 pi x).
    double prev = 0;
    for (int N : {16, 32, 64}) {
      const Complex k({N, 4, 4}, 1.0 / N);
      const std::vector<double> a = sample(k, 1, VectorField{ScalarField{}, [](const Point& x) { return std::sin(2 * kPi * x[0]); }, {}});
      const std::vector<double> b = k.d1().apply(a);
      const std::vector<double> exact =
          sample(k, 2, VectorField{ScalarField{}, {}, [](const Point& x) { return 2 * kPi * std::cos(2 * kPi * x[0]); }});
      double err = 0;
      for (std::size_t f = 0; f < b.size(); ++f) err = std::max(err, std::abs(b[f] - exact[f]) * N * N);
      if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
      prev = err;
    }
  }

  TEST_CASE("symbolic forms sample like closures") {
    const Complex k({5, 4, 4}, 0.3);
    const DifferentialForm B = parse_form("x1 dx1^dx2 + sin(x2) dx3^dx1 + t dx2^dx3", Chart::euclidean3());
    const std::vector<double> s = sample_form(k, B, 2.0);
    const std::vector<double> ref = sample(k, 2,
                                           VectorField{[](const Point&) { return 2.0; },
                                                       [](const Point& x) { return std::sin(x[1]); },
                                                       [](const Point& x) { return x[0]; }});
    for (std::size_t f = 0; f < s.size(); ++f) CHECK(s[f] == doctest::Approx(ref[f]).epsilon(1e-14));

    const DifferentialForm E = parse_form("c dx1", Chart::euclidean3());
    expr::Bindings c;
    c.values["c"] = 3.0;
    CHECK(sample_form(k, E, 0.0, c)[0] == doctest::Approx(0.9));
  }
}

TEST_SUITE("leapfrog") {
  TEST_CASE("zero stays exactly zero") {
    const Complex k({4, 4, 4}, 1.0);
    const Solver solver(k, dt_from_courant(k, {}, 0.5));
    SimState s = solver.zero_state();
    for (int n = 0; n < 50; ++n) solver.step(s);
    CHECK(max_abs(s.e) == 0.0);
    CHECK(max_abs(s.b) == 0.0);
    const Diagnostics d = diagnostics(solver, s, gauss_charge(k, s), {});
    CHECK(d.divB == 0.0);
    CHECK(d.charge_residual == 0.0);
    CHECK(d.energy == 0.0);
  }

  TEST_CASE("CFL is enforced at construction") {
    const Complex k({4, 4, 4}, 1.0);
    CHECK_THROWS_AS(Solver(k, 0.6), CflViolation);
    CHECK_NOTHROW(Solver(k, 1 / std::sqrt(3.0)));
    CHECK_NOTHROW(Solver(k, 1.0, {}, 1));
    CHECK_THROWS_AS(Solver(k, 1.01, {}, 1), CflViolation);
    CHECK(dt_from_courant(k, {}, 0.5) == doctest::Approx(0.5 / std::sqrt(3.0)));
  }

  TEST_CASE("one period returns the mode with phase error under one percent") {
    const Complex k({60, 4, 4}, 1.0);
    const Solver solver(k, dt_from_courant(k, {}, 0.5));
    const SimState start = plane_wave_state(solver, {0, 20, 1, 1.0});
    SimState s = start;
    const long steps = std::lround(20.0 / solver.dt());
    for (long n = 0; n < steps; ++n) solver.step(s);
    // Phase of the mode relative to the start, against a full continuum period.
    double re = 0, im = 0;
    for (int i = 0; i < 60; ++i) {
      const double kx = 2 * kPi * i / 20.0;
      const double v = s.e[k.n() + k.vertex(i, 0, 0)];
      re += v * std::cos(kx);
      im -= v * std::sin(kx);
    }
    const double phase = std::atan2(im, re) + kPi / 2;  // the initial mode sits at -pi/2
    const double elapsed = steps * solver.dt() * 2 * kPi / 20.0;
    double lag = std::remainder(-phase - elapsed, 2 * kPi);
    CHECK(std::abs(lag) / (2 * kPi) < 0.01);
    const double expected = yee_omega(2 * kPi / 20.0, 1.0, solver.dt(), 1.0) * steps * solver.dt();
    CHECK(std::abs(std::remainder(-phase - expected, 2 * kPi)) < 1e-9);
  }

  TEST_CASE("divergence of b is preserved") {
    const Complex k({20, 4, 4}, 0.5);
    const Solver solver(k, dt_from_courant(k, {}, 0.5));
    SimState s = plane_wave_state(solver, {0, 10, 2, 1.0});
    const std::vector<double> before = k.d2().apply(s.b);
    for (int n = 0; n < 1000; ++n) solver.step(s);
    CHECK(k.d2().apply(s.b) == before);

    testing::Rng rng(11);
    const Complex g({6, 5, 4}, 0.5);
    const Solver gs(g, dt_from_courant(g, {}, 0.9));
    SimState r = gs.make_state(random_vector(rng, g.edges()), g.d1().apply(random_vector(rng, g.edges())));
    for (int n = 0; n < 1000; ++n) gs.step(r);
    CHECK(max_abs(g.d2().apply(r.b)) <= 1e-12);
  }

  TEST_CASE("plane wave: divergence, energy drift") {
    const Complex k({40, 4, 4}, 1.0);
    const Solver solver(k, dt_from_courant(k, {}, 0.5));
    SimState s = plane_wave_state(solver, {0, 20, 1, 1.0});
    const double e0 = diagnostics(solver, s, {}, {}).energy;
    for (int n = 0; n < 1000; ++n) solver.step(s);
    const Diagnostics d = diagnostics(solver, s, {}, {});
    CHECK(d.divB <= 1e-12);
    CHECK(std::abs(d.energy - e0) / e0 <= 1e-6);
  }

  TEST_CASE("energy drift over ten thousand steps") {
    const Complex k({20, 4, 4}, 1.0);
    const Solver solver(k, dt_from_courant(k, {}, 0.5));
    SimState s = plane_wave_state(solver, {0, 10, 2, 1.0});
    const double e0 = diagnostics(solver, s, {}, {}).energy;
    for (int n = 0; n < 10000; ++n) solver.step(s);
    CHECK(std::abs(diagnostics(solver, s, {}, {}).energy - e0) / e0 <= 1e-5);
  }

  TEST_CASE("the paired energy is conserved for arbitrary fields") {
    testing::Rng rng(5);
    const Complex k({5, 4, 6}, 0.7);
    const Solver solver(k, dt_from_courant(k, {}, 0.8));
    SimState s = solver.make_state(random_vector(rng, k.edges()), random_vector(rng, k.faces()));
    const double e0 = diagnostics(solver, s, {}, {}).energy;
    for (int n = 0; n < 500; ++n) solver.step(s);
    CHECK(std::abs(diagnostics(solver, s, {}, {}).energy - e0) / e0 <= 1e-10);
  }

  TEST_CASE("a current pulse satisfies discrete continuity") {
    const Complex k({8, 8, 8}, 1.0);
    const Solver solver(k, dt_from_courant(k, {}, 0.5));
    const CurrentPulse pulse{2, {3, 4, 2}, 1.0, 5.0, 1.5};
    SimState s = solver.zero_state();
    double worst = 0, peak = 0;
    for (int n = 0; n < 200; ++n) {
      const std::vector<double> rho = gauss_charge(k, s);
      const std::vector<double> j = pulse_flux(k, pulse, (n + 0.5) * solver.dt());
      solver.step(s, j);
      const Diagnostics d = diagnostics(solver, s, rho, j);
      worst = std::max(worst, d.charge_residual);
      peak = std::max(peak, max_abs(k.d0t().apply(j)));
    }
    CHECK(peak > 0.5);
    CHECK(worst / peak <= 1e-12);
    // The pulse leaves a dipole of opposite charges at the two ends of its edge.
    const std::vector<double> rho = gauss_charge(k, s);
    const double q = rho[k.vertex(3, 4, 2)];
    CHECK(std::abs(q) > 1e-3);
    CHECK(rho[k.vertex(3, 4, 3)] == doctest::Approx(-q));
  }

  TEST_CASE("threads do not change a single bit") {
    testing::Rng rng(8);
    const Complex k({24, 24, 24}, 1.0);
    const Solver one(k, dt_from_courant(k, {}, 0.5), {}, 3, 1);
    const Solver four(k, dt_from_courant(k, {}, 0.5), {}, 3, 4);
    SimState a = one.make_state(random_vector(rng, k.edges()), random_vector(rng, k.faces()));
    SimState b = a;
    const std::vector<double> j = random_vector(rng, k.edges());
    for (int n = 0; n < 5; ++n) {
      one.step(a, j);
      four.step(b, j);
    }
    CHECK(a.e == b.e);
    CHECK(a.b == b.b);
  }
}

TEST_SUITE("wave speed") {
  TEST_CASE("twenty cells per wavelength") {
    const WaveSpeed w = measure_wave_speed(Complex({60, 8, 8}, 1.0), 20, 2);
    CHECK(std::abs(w.speed - 1) < 0.01);
    CHECK(w.speed == doctest::Approx(oracle_speed(20, 0.5 / std::sqrt(3.0))).epsilon(1e-9));
  }

  TEST_CASE("under-resolved wave is visibly slow") {
    const WaveSpeed w = measure_wave_speed(Complex({16, 4, 4}, 1.0), 4, 3);
    CHECK(std::abs(w.speed - 1) > 0.01);
    CHECK(w.speed == doctest::Approx(oracle_speed(4, 0.5 / std::sqrt(3.0))).epsilon(1e-9));
  }

  TEST_CASE("second-order convergence") {
    const double coarse = std::abs(measure_wave_speed(Complex({60, 8, 8}, 1.0), 20, 2).speed - 1);
    const double fine = std::abs(measure_wave_speed(Complex({120, 8, 8}, 0.5), 40, 2).speed - 1);
    const double ratio = coarse / fine;
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }

  TEST_CASE("magic time step propagates exactly") {
    const WaveSpeed w = measure_wave_speed(Complex({32, 4, 4}, 1.0), 16, 2, {1.0, 1, 1});
    CHECK(std::abs(w.speed - 1) < 1e-12);
  }

  TEST_CASE("magic time step agrees with a 1D brute-force recurrence") {
    const int N = 24;
    const Complex k({N, 4, 4}, 1.0);
    const Solver solver(k, 1.0, {}, 1);
    SimState s = plane_wave_state(solver, {0, 12, 1, 1.0});
    std::vector<double> e(N), b(N);
    for (int i = 0; i < N; ++i) {
      e[i] = s.e[k.n() + k.vertex(i, 0, 0)];
      b[i] = s.b[2 * k.n() + k.vertex(i, 0, 0)];
    }
    const std::vector<double> e_start = e;
    for (int n = 0; n < 30; ++n) {
      solver.step(s);
      for (int i = 0; i < N; ++i) b[i] -= e[(i + 1) % N] - e[i];
      for (int i = 0; i < N; ++i) e[i] += b[(i + N - 1) % N] - b[i];
    }
    for (int i = 0; i < N; ++i) {
      CHECK(s.e[k.n() + k.vertex(i, 2, 3)] == doctest::Approx(e[i]).epsilon(1e-12));
      // Exact transport: the profile moved 30 cells.
      CHECK(e[i] == doctest::Approx(e_start[((i - 30) % N + N) % N]).scale(1).epsilon(1e-12));
    }
  }

  TEST_CASE("non-commensurate wavelength is rejected") {
    CHECK_THROWS_AS(measure_wave_speed(Complex({64, 8, 8}, 1.0), 20, 1), ComplexError);
  }
}

TEST_SUITE("simulation io") {
  TEST_CASE("configured run and CSV rows") {
    SimConfig cfg;
    cfg.dims = {20, 4, 4};
    cfg.steps = 10;
    cfg.diagnostics_every = 5;
    cfg.initial = PlaneWave{0, 10, 1, 1.0};
    std::vector<std::string> rows;
    const SimResult r = simulate(cfg, [&](const Diagnostics& d) { rows.push_back(csv_row(d)); });
    REQUIRE(r.samples.size() == 3);
    CHECK(r.samples[0].step == 0);
    CHECK(r.samples[2].step == 10);
    CHECK(r.state.n == 10);
    CHECK(rows[0].rfind("0,0,", 0) == 0);
    CHECK(std::string(kCsvHeader) == "step,time,divB,charge_residual,energy");
  }

  TEST_CASE("identical configs give bit-identical dumps") {
    SimConfig cfg;
    cfg.dims = {12, 8, 8};
    cfg.steps = 40;
    cfg.source = CurrentPulse{1, {2, 3, 4}, 2.0, 3.0, 1.0};
    cfg.initial = PlaneWave{2, 4, 0, 0.5};
    std::string dumps[2];
    for (std::string& out : dumps) {
      const SimResult r = simulate(cfg);
      std::ostringstream os;
      write_dump(os, Complex(cfg.dims, cfg.h), 1, r.state.e);
      write_dump(os, Complex(cfg.dims, cfg.h), 2, r.state.b);
      out = os.str();
    }
    CHECK(dumps[0] == dumps[1]);
    cfg.threads = 3;
    std::ostringstream os;
    const SimResult r = simulate(cfg);
    write_dump(os, Complex(cfg.dims, cfg.h), 1, r.state.e);
    write_dump(os, Complex(cfg.dims, cfg.h), 2, r.state.b);
    CHECK(os.str() == dumps[0]);
  }

  TEST_CASE("dump header and round trip") {
    const Complex k({4, 5, 6}, 1.0);
    testing::Rng rng(1);
    const std::vector<double> v = random_vector(rng, k.faces());
    std::stringstream ss;
    write_dump(ss, k, 2, v);
    const std::string bytes = ss.str();
    REQUIRE(bytes.size() == 32 + 8 * v.size());
    CHECK(bytes.substr(0, 4) == "DECF");
    CHECK(bytes[4] == 1);
    CHECK(bytes[8] == 2);
    CHECK(bytes[12] == 4);
    CHECK(bytes[16] == 5);
    CHECK(bytes[20] == 6);
    for (int i = 24; i < 32; ++i) CHECK(bytes[i] == 0);
    const Dump d = read_dump(ss);
    CHECK(d.degree == 2);
    CHECK(d.dims == Dims{4, 5, 6});
    CHECK(d.values == v);

    std::istringstream bad("DECX");
    CHECK_THROWS_AS(read_dump(bad), std::runtime_error);
    std::istringstream truncated(bytes.substr(0, 40));
    CHECK_THROWS_AS(read_dump(truncated), std::runtime_error);
  }
}
