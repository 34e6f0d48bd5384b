#include "mwf/em/em3.hpp"

#include <string>

namespace mwf::em3 {

namespace {

const Chart kChart = Chart::euclidean3();

void check(const DifferentialForm& w, int degree, const char* name) {
  if (!(w.chart() == kChart)) throw ChartMismatch(std::string(name) + " must live on the euclidean3 chart");
  if (w.degree() != degree) {
    throw DegreeError(std::string(name) + " must be a " + std::to_string(degree) + "-form, got degree " +
                      std::to_string(w.degree()));
  }
}

Poly c() { return Poly::constant("c"); }
Poly eps0() { return Poly::constant("eps0"); }
Poly mu0() { return Poly::constant("mu0"); }
Poly inv_c2() { return Poly::reciprocal(c() * c()); }

DifferentialForm d_dt2(const DifferentialForm& w) { return time_partial(time_partial(w)); }

}  // namespace

void validate(const Field& f) {
  check(f.E, 1, "E");
  check(f.H, 1, "H");
  check(f.D, 2, "D");
  check(f.B, 2, "B");
  check(f.J, 2, "J");
  check(f.rho, 3, "rho");
}

void validate(const Potential& p) {
  check(p.A, 1, "A");
  check(p.Phi, 0, "Phi");
}

MaxwellResiduals maxwell_residuals(const Field& f) {
  validate(f);
  return {
      ext_d(f.D) - f.rho,
      ext_d(f.H) - f.J - time_partial(f.D),
      ext_d(f.B),
      ext_d(f.E) + time_partial(f.B),
  };
}

Field apply_constitutive(Field f) {
  check(f.E, 1, "E");
  check(f.B, 2, "B");
  f.D = eps0() * hodge(f.E);
  f.H = Poly::reciprocal(mu0()) * hodge(f.B);
  return f;
}

ConstitutiveResiduals constitutive_residuals(const Field& f) {
  validate(f);
  const Field g = apply_constitutive(f);
  return {f.D - g.D, f.H - g.H};
}

FieldPair fields_from_potentials(const Potential& p) {
  validate(p);
  return {-ext_d(p.Phi) - time_partial(p.A), ext_d(p.A)};
}

PotentialResiduals potential_equation_residuals(const Potential& p, const DifferentialForm& rho,
                                                const DifferentialForm& J) {
  validate(p);
  check(rho, 3, "rho");
  check(J, 2, "J");
  const DifferentialForm q1 =
      hodge(laplacian(p.Phi)) + time_partial(ext_d(hodge(p.A))) + Poly::reciprocal(eps0()) * rho;
  const DifferentialForm inner =
      laplacian(p.A) - inv_c2() * d_dt2(p.A) - ext_d(codiff(p.A) + inv_c2() * time_partial(p.Phi));
  const DifferentialForm q2 = hodge(inner) + mu0() * J;
  return {q1, q2};
}

Potential gauge_transform(const Potential& p, const Poly& lambda) {
  validate(p);
  const DifferentialForm L = DifferentialForm::scalar(kChart, lambda);
  return {p.A + ext_d(L), p.Phi - time_partial(L)};
}

DifferentialForm lorenz_residual(const Potential& p) {
  validate(p);
  return codiff(p.A) + inv_c2() * time_partial(p.Phi);
}

PotentialResiduals wave_residuals(const Potential& p, const DifferentialForm& rho, const DifferentialForm& J) {
  validate(p);
  check(rho, 3, "rho");
  check(J, 2, "J");
  const DifferentialForm w1 = hodge(laplacian(p.Phi) - inv_c2() * d_dt2(p.Phi)) + Poly::reciprocal(eps0()) * rho;
  const DifferentialForm w2 = hodge(laplacian(p.A) - inv_c2() * d_dt2(p.A)) + mu0() * J;
  return {w1, w2};
}

Poly restricted_gauge_check(const Poly& lambda) {
  const DifferentialForm L = DifferentialForm::scalar(kChart, lambda);
  return (laplacian(L) - inv_c2() * d_dt2(L)).scalar_value();
}

}  // namespace mwf::em3
