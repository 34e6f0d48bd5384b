#pragma once

// Maxwell's equations as time-parametrized forms on Euclidean3.
// Degrees: E, H are 1-forms; D, B, J are 2-forms; rho is a 3-form.

#include "mwf/forms/form.hpp"

namespace mwf::em3 {

struct Field {
  DifferentialForm E{Chart::euclidean3(), 1};
  DifferentialForm H{Chart::euclidean3(), 1};
  DifferentialForm D{Chart::euclidean3(), 2};
  DifferentialForm B{Chart::euclidean3(), 2};
  DifferentialForm J{Chart::euclidean3(), 2};
  DifferentialForm rho{Chart::euclidean3(), 3};
};

struct Potential {
  DifferentialForm A{Chart::euclidean3(), 1};
  DifferentialForm Phi{Chart::euclidean3(), 0};
};

/// Throws DegreeError / ChartMismatch unless every member has its listed degree on Euclidean3.
void validate(const Field& f);
void validate(const Potential& p);

struct MaxwellResiduals {
  DifferentialForm r1;  // dD - rho
  DifferentialForm r2;  // dH - J - dD/dt
  DifferentialForm r3;  // dB
  DifferentialForm r4;  // dE + dB/dt
};

MaxwellResiduals maxwell_residuals(const Field& f);

/// D = eps0 *E and H = (1/mu0) *B.
Field apply_constitutive(Field f);

struct ConstitutiveResiduals {
  DifferentialForm d;  // D - eps0 *E
  DifferentialForm h;  // H - (1/mu0) *B
};

ConstitutiveResiduals constitutive_residuals(const Field& f);

struct FieldPair {
  DifferentialForm E;
  DifferentialForm B;
};

/// B = dA, E = -dPhi - dA/dt.
FieldPair fields_from_potentials(const Potential& p);

struct PotentialResiduals {
  DifferentialForm q1;  // 3-form
  DifferentialForm q2;  // 2-form
};

/// q1 = *lap(Phi) + d/dt(d*A) + rho/eps0
/// q2 = *(lap(A) - (1/c^2) A_tt - d(*d*A + (1/c^2) Phi_t)) + mu0 J
PotentialResiduals potential_equation_residuals(const Potential& p, const DifferentialForm& rho,
                                                const DifferentialForm& J);

/// A' = A + dLambda, Phi' = Phi - dLambda/dt.
Potential gauge_transform(const Potential& p, const Poly& lambda);

/// *d*A + (1/c^2) dPhi/dt as a 0-form.
DifferentialForm lorenz_residual(const Potential& p);

/// w1 = *(lap(Phi) - (1/c^2) Phi_tt) + rho/eps0
/// w2 = *(lap(A) - (1/c^2) A_tt) + mu0 J
PotentialResiduals wave_residuals(const Potential& p, const DifferentialForm& rho, const DifferentialForm& J);

/// lap(Lambda) - (1/c^2) Lambda_tt.
Poly restricted_gauge_check(const Poly& lambda);

}  // namespace mwf::em3
