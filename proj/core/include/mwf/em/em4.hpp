#pragma once

// Spacetime formulation on Minkowski4 with x0 = c t.

#include "mwf/em/em3.hpp"
#include "mwf/forms/form.hpp"

#include <array>
#include <optional>

namespace mwf::em4 {

using Vec3 = std::array<Poly, 3>;
using Vec4 = std::array<Poly, 4>;
using Matrix4 = std::array<std::array<Poly, 4>, 4>;

struct Field {
  DifferentialForm F{Chart::minkowski4(), 2};
  std::optional<DifferentialForm> M;
  std::optional<DifferentialForm> Jtilde;
};

/// F = -E_i dx0^dx^i + c(B1 dx2^dx3 + B2 dx3^dx1 + B3 dx1^dx2), with M = *F cached.
/// Throws std::logic_error if *F disagrees with the closed form of M.
Field assemble_faraday(const Vec3& E, const Vec3& B);

/// M = c(B_i dx0^dx^i) + E1 dx2^dx3 + E2 dx3^dx1 + E3 dx1^dx2, written out term by term.
DifferentialForm maxwell_form(const Vec3& E, const Vec3& B);

struct EB {
  Vec3 E;
  Vec3 B;
};

/// Reads E and B back off a Faraday form.
EB components(const DifferentialForm& F);

/// rho dx0 - (1/c)(J1 dx1 + J2 dx2 + J3 dx3).
DifferentialForm four_current(const Poly& rho, const Vec3& J);

struct MaxwellResiduals {
  DifferentialForm h;  // dF
  DifferentialForm i;  // deltaF - Jtilde/eps0
};

/// Throws std::invalid_argument when the field has no 4-current.
MaxwellResiduals maxwell_residuals(const Field& f);

/// I = -Phi dx0 + c(A1 dx1 + A2 dx2 + A3 dx3).
DifferentialForm potential(const Poly& phi, const Vec3& A);

struct PotentialOps {
  DifferentialForm F;  // dI
  Poly lorenz;         // the coefficient of *d*I
};

PotentialOps potential_ops(const DifferentialForm& I);

/// I' = I + dLambda.
DifferentialForm gauge(const DifferentialForm& I, const Poly& lambda);

/// Coefficient of delta Jtilde.
Poly continuity_residual(const DifferentialForm& jt);

/// Components of a 1-form with the index raised: g^{aa} w_a.
Vec4 raise(const DifferentialForm& one_form);

struct FaradayMatrices {
  Matrix4 F;      // (F^{ab}), row 0 = (0, -E1, -E2, -E3)
  Matrix4 Fdual;  // dual matrix, row 0 = (0, -cB1, -cB2, -cB3)
};

FaradayMatrices faraday_matrix(const Field& f);

/// sum_a d_a F^{ab} - J^b/eps0 with J^b = g^{bb} Jtilde_b.
Vec4 divergence_residuals(const FaradayMatrices& m, const DifferentialForm& jt);
/// sum_a d_a Fdual^{ab}.
Vec4 dual_divergence_residuals(const FaradayMatrices& m);

/// The same quantities read off the forms: g^{bb} (deltaF - Jtilde/eps0)_b and g^{bb} (*dF)_b.
Vec4 divergence_from_forms(const MaxwellResiduals& r);
Vec4 dual_divergence_from_forms(const MaxwellResiduals& r);

struct BoostReport {
  DifferentialForm F_boosted{Chart::minkowski4(), 2};
  ZeroStatus interval = ZeroStatus::Unknown;    // pullback(s^2) - s^2
  ZeroStatus naturality = ZeroStatus::Unknown;  // d(pullback F) - pullback(dF)
  bool vacuum_before = false;                   // both residuals of f ProvenZero with zero current
  ZeroStatus vacuum_after = ZeroStatus::Unknown;
};

/// Pulls F (and the current, if any) back along the boost of rapidity zeta.
BoostReport boost_covariance(const Field& f, const Rational& zeta);

struct WaveReport {
  Poly lorenz;
  bool lorenz_gauge = false;             // lorenz is ProvenZero
  DifferentialForm delta_d_residual{Chart::minkowski4(), 1};  // delta dI - Jtilde/eps0
  Vec4 box_residuals;                    // box A^a - J^a/eps0, A^a = (Phi, cA)
  std::array<ZeroStatus, 4> agreement{};  // g^{aa}(delta d residual)_a - box residual_a; only meaningful in Lorenz gauge
};

WaveReport wave_under_lorenz(const DifferentialForm& I, const DifferentialForm& jt);

/// Repackages a 3D time-parametrized field on Minkowski4 via t = x0/c.
/// D and H are not used: the 4D system assumes the vacuum constitutive relations.
Field from_3d(const em3::Field& f);

}  // namespace mwf::em4
