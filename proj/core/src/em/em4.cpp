#include "mwf/em/em4.hpp"

#include <stdexcept>
#include <string>

namespace mwf::em4 {

namespace {

const Chart kChart = Chart::minkowski4();

void check(const DifferentialForm& w, int degree, const char* name) {
  if (!(w.chart() == kChart)) throw ChartMismatch(std::string(name) + " must live on the minkowski4 chart");
  if (w.degree() != degree) {
    throw DegreeError(std::string(name) + " must be a " + std::to_string(degree) + "-form, got degree " +
                      std::to_string(w.degree()));
  }
}

Poly c() { return Poly::constant("c"); }
Poly eps0() { return Poly::constant("eps0"); }

int metric(int a) { return a == 0 ? 1 : -1; }

const char* coordinate(int a) {
  static const char* names[] = {"x0", "x1", "x2", "x3"};
  return names[a];
}

DifferentialForm two(int a, int b, const Poly& v) { return DifferentialForm::basis(kChart, {a, b}, v); }

Poly d(const Poly& p, int a) { return expr::diff(p, coordinate(a)); }

}  // namespace

DifferentialForm maxwell_form(const Vec3& E, const Vec3& B) {
  DifferentialForm m(kChart, 2);
  for (int i = 0; i < 3; ++i) m = m + two(0, i + 1, c() * B[i]);
  m = m + two(2, 3, E[0]);
  m = m - two(1, 3, E[1]);  // E2 dx3^dx1
  m = m + two(1, 2, E[2]);
  return m;
}

Field assemble_faraday(const Vec3& E, const Vec3& B) {
  Field f;
  for (int i = 0; i < 3; ++i) f.F = f.F - two(0, i + 1, E[i]);
  f.F = f.F + two(2, 3, c() * B[0]);
  f.F = f.F - two(1, 3, c() * B[1]);
  f.F = f.F + two(1, 2, c() * B[2]);
  DifferentialForm m = hodge(f.F);
  if (!(m == maxwell_form(E, B))) throw std::logic_error("*F does not reproduce the Maxwell form");
  f.M = std::move(m);
  return f;
}

EB components(const DifferentialForm& F) {
  check(F, 2, "F");
  const Poly inv_c = Poly::reciprocal(c());
  EB out;
  for (int i = 0; i < 3; ++i) out.E[i] = -F.coeff({0, i + 1});
  out.B[0] = inv_c * F.coeff({2, 3});
  out.B[1] = -(inv_c * F.coeff({1, 3}));
  out.B[2] = inv_c * F.coeff({1, 2});
  return out;
}

DifferentialForm four_current(const Poly& rho, const Vec3& J) {
  const Poly inv_c = Poly::reciprocal(c());
  DifferentialForm jt = DifferentialForm::basis(kChart, {0}, rho);
  for (int i = 0; i < 3; ++i) jt = jt - DifferentialForm::basis(kChart, {i + 1}, inv_c * J[i]);
  return jt;
}

MaxwellResiduals maxwell_residuals(const Field& f) {
  check(f.F, 2, "F");
  if (!f.Jtilde) throw std::invalid_argument("field has no 4-current");
  check(*f.Jtilde, 1, "Jtilde");
  return {ext_d(f.F), codiff(f.F) - Poly::reciprocal(eps0()) * *f.Jtilde};
}

DifferentialForm potential(const Poly& phi, const Vec3& A) {
  DifferentialForm I = DifferentialForm::basis(kChart, {0}, -phi);
  for (int i = 0; i < 3; ++i) I = I + DifferentialForm::basis(kChart, {i + 1}, c() * A[i]);
  return I;
}

PotentialOps potential_ops(const DifferentialForm& I) {
  check(I, 1, "I");
  return {ext_d(I), codiff(I).scalar_value()};
}

DifferentialForm gauge(const DifferentialForm& I, const Poly& lambda) {
  check(I, 1, "I");
  return I + ext_d(DifferentialForm::scalar(kChart, lambda));
}

Poly continuity_residual(const DifferentialForm& jt) {
  check(jt, 1, "Jtilde");
  return codiff(jt).scalar_value();
}

Vec4 raise(const DifferentialForm& one_form) {
  check(one_form, 1, "one-form");
  Vec4 out;
  for (int a = 0; a < 4; ++a) out[a] = Poly(metric(a)) * one_form.coeff({a});
  return out;
}

FaradayMatrices faraday_matrix(const Field& f) {
  const EB eb = components(f.F);
  const Vec3& E = eb.E;
  Vec3 cB;
  for (int i = 0; i < 3; ++i) cB[i] = c() * eb.B[i];

  FaradayMatrices m;
  auto set = [](Matrix4& mat, int a, int b, const Poly& v) {
    mat[a][b] = v;
    mat[b][a] = -v;
  };
  for (int i = 0; i < 3; ++i) {
    set(m.F, 0, i + 1, -E[i]);
    set(m.Fdual, 0, i + 1, -cB[i]);
  }
  set(m.F, 1, 2, -cB[2]);
  set(m.F, 1, 3, cB[1]);
  set(m.F, 2, 3, -cB[0]);
  set(m.Fdual, 1, 2, E[2]);
  set(m.Fdual, 1, 3, -E[1]);
  set(m.Fdual, 2, 3, E[0]);
  return m;
}

namespace {

Vec4 column_divergence(const Matrix4& mat) {
  Vec4 out;
  for (int b = 0; b < 4; ++b) {
    Poly sum;
    for (int a = 0; a < 4; ++a) sum += d(mat[a][b], a);
    out[b] = sum;
  }
  return out;
}

}  // namespace

Vec4 divergence_residuals(const FaradayMatrices& m, const DifferentialForm& jt) {
  Vec4 out = column_divergence(m.F);
  const Vec4 J = raise(jt);
  const Poly inv_eps0 = Poly::reciprocal(eps0());
  for (int b = 0; b < 4; ++b) out[b] -= inv_eps0 * J[b];
  return out;
}

Vec4 dual_divergence_residuals(const FaradayMatrices& m) { return column_divergence(m.Fdual); }

Vec4 divergence_from_forms(const MaxwellResiduals& r) { return raise(r.i); }

Vec4 dual_divergence_from_forms(const MaxwellResiduals& r) {
  check(r.h, 3, "dF");
  return raise(hodge(r.h));
}

BoostReport boost_covariance(const Field& f, const Rational& zeta) {
  check(f.F, 2, "F");
  const LinearMap L = LinearMap::boost(zeta);
  BoostReport rep;
  rep.F_boosted = pullback_linear(f.F, L);

  Poly s2 = Poly::variable("x0").pow(2);
  for (int i = 1; i < 4; ++i) s2 -= Poly::variable(coordinate(i)).pow(2);
  const DifferentialForm s2_form = DifferentialForm::scalar(kChart, s2);
  rep.interval = zero_status(pullback_linear(s2_form, L) - s2_form);

  rep.naturality = zero_status(ext_d(rep.F_boosted) - pullback_linear(ext_d(f.F), L));

  Field vac = f;
  if (!vac.Jtilde) vac.Jtilde = DifferentialForm(kChart, 1);
  const MaxwellResiduals before = maxwell_residuals(vac);
  rep.vacuum_before = vac.Jtilde->is_zero() && zero_status(before.h) == ZeroStatus::ProvenZero &&
                      zero_status(before.i) == ZeroStatus::ProvenZero;

  Field boosted;
  boosted.F = rep.F_boosted;
  boosted.Jtilde = pullback_linear(*vac.Jtilde, L);
  const MaxwellResiduals after = maxwell_residuals(boosted);
  const ZeroStatus h = zero_status(after.h);
  const ZeroStatus i = zero_status(after.i);
  if (h == ZeroStatus::ProvenZero && i == ZeroStatus::ProvenZero) {
    rep.vacuum_after = ZeroStatus::ProvenZero;
  } else if (h == ZeroStatus::ProvenNonzero || i == ZeroStatus::ProvenNonzero) {
    rep.vacuum_after = ZeroStatus::ProvenNonzero;
  } else {
    rep.vacuum_after = ZeroStatus::Unknown;
  }
  return rep;
}

WaveReport wave_under_lorenz(const DifferentialForm& I, const DifferentialForm& jt) {
  check(I, 1, "I");
  check(jt, 1, "Jtilde");
  WaveReport rep;
  rep.lorenz = codiff(I).scalar_value();
  rep.lorenz_gauge = expr::is_zero(rep.lorenz) == ZeroStatus::ProvenZero;

  const Poly inv_eps0 = Poly::reciprocal(eps0());
  rep.delta_d_residual = codiff(ext_d(I)) - inv_eps0 * jt;

  const Vec4 J = raise(jt);
  for (int a = 0; a < 4; ++a) {
    const Poly A = Poly(-metric(a)) * I.coeff({a});
    Poly box = d(d(A, 0), 0);
    for (int i = 1; i < 4; ++i) box -= d(d(A, i), i);
    rep.box_residuals[a] = box - inv_eps0 * J[a];
  }
  const Vec4 lowered = raise(rep.delta_d_residual);
  for (int a = 0; a < 4; ++a) rep.agreement[a] = expr::is_zero(lowered[a] - rep.box_residuals[a]);
  return rep;
}

Field from_3d(const em3::Field& f) {
  em3::validate(f);
  const expr::Substitution t{{"t", Poly::variable("x0") * Poly::reciprocal(c())}};
  auto at = [&](const DifferentialForm& w, std::initializer_list<int> idx) {
    return expr::substitute(w.coeff(idx), t);
  };
  Vec3 E{at(f.E, {0}), at(f.E, {1}), at(f.E, {2})};
  Vec3 B{at(f.B, {1, 2}), -at(f.B, {0, 2}), at(f.B, {0, 1})};
  Vec3 J{at(f.J, {1, 2}), -at(f.J, {0, 2}), at(f.J, {0, 1})};
  Field out = assemble_faraday(E, B);
  out.Jtilde = four_current(at(f.rho, {0, 1, 2}), J);
  return out;
}

}  // namespace mwf::em4
