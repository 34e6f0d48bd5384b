#include "mwf/bundle/bundle.hpp"
#include "mwf/em/em4.hpp"
#include "support/random_form.hpp"

#include <doctest.h>

using namespace mwf;
using namespace mwf::bundle;
using expr::ZeroStatus;

namespace {

const Chart E3 = Chart::euclidean3();
const Chart M4 = Chart::minkowski4();

DifferentialForm F3(std::string_view text) { return parse_form(text, E3); }
Poly S(std::string_view text, const Chart& chart = E3) { return expr::normalize(expr::parse_expr(text, chart)); }

CoverChart left() { return {"U", {{"x1", std::nullopt, Rational(1)}}}; }
CoverChart right() { return {"V", {{"x1", Rational(-1), std::nullopt}}}; }

Bundle two_charts(const DifferentialForm& au, const DifferentialForm& av, const Poly& lambda_vu,
                  const Chart& base = E3) {
  Bundle b;
  b.base = base;
  b.charts = {left(), right()};
  b.potentials = {{"U", au}, {"V", av}};
  b.transitions = {{"V", "U", lambda_vu}};
  return b;
}

bool proven_zero(const DifferentialForm& w) { return zero_status(w) == ZeroStatus::ProvenZero; }

}  // namespace

TEST_SUITE("cover") {
  TEST_CASE("interval overlaps") {
    CHECK(overlaps(left(), right()));
    const CoverChart far{"W", {{"x1", Rational(2), std::nullopt}}};
    CHECK_FALSE(overlaps(left(), far));
    CHECK(overlaps(right(), far));
    CHECK_FALSE(overlaps(left(), right(), far));
    const CoverChart touching{"T", {{"x1", Rational(1), Rational(3)}}};
    CHECK_FALSE(overlaps(left(), touching));
    const CoverChart other_axis{"Y", {{"x2", Rational(0), Rational(1)}}};
    CHECK(overlaps(right(), other_axis, far));
    CHECK_FALSE(overlaps(left(), other_axis, far));
  }

  TEST_CASE("validation") {
    Bundle b = two_charts(F3("0 dx1"), F3("0 dx1"), Poly(0));
    b.charts[0].box = {{"x1", Rational(1), Rational(1)}};
    CHECK_THROWS_AS(validate(b), BundleError);

    b = two_charts(F3("0 dx1"), F3("0 dx1"), Poly(0));
    b.charts[0].box = {{"x0", Rational(0), Rational(1)}};
    CHECK_THROWS_AS(validate(b), BundleError);

    b = two_charts(F3("0 dx1"), F3("dx1^dx2"), Poly(0));
    CHECK_THROWS_AS(validate(b), DegreeError);

    b = two_charts(F3("0 dx1"), F3("0 dx1"), Poly(0));
    b.potentials.pop_back();
    CHECK_THROWS_AS(validate(b), BundleError);
  }
}

TEST_SUITE("cocycle") {
  TEST_CASE("single chart is trivially a connection") {
    Bundle b;
    b.charts = {{"U", {}}};
    b.potentials = {{"U", F3("x2 x3 dx1 + sin(x1) dx3")}};
    const ConnectionReport rep = cocycle_check(b);
    CHECK(rep.is_connection);
    CHECK(rep.overlaps.empty());
  }

  TEST_CASE("equal potentials with a constant phase") {
    const DifferentialForm A = F3("x2 dx1 - x1 dx3");
    const ConnectionReport rep = cocycle_check(two_charts(A, A, Poly(7)));
    REQUIRE(rep.overlaps.size() == 1);
    CHECK(rep.overlaps[0].status == ZeroStatus::ProvenZero);
    CHECK(rep.is_connection);
  }

  TEST_CASE("pure gradient difference") {
    CHECK(cocycle_check(two_charts(F3("0 dx1"), F3("dx1"), S("-x1"))).is_connection);
    const ConnectionReport wrong = cocycle_check(two_charts(F3("0 dx1"), F3("dx1"), S("x1")));
    CHECK_FALSE(wrong.is_connection);
    CHECK(wrong.overlaps[0].status == ZeroStatus::ProvenNonzero);
  }

  TEST_CASE("reverse transitions are negated") {
    Bundle b = two_charts(F3("0 dx1"), F3("dx1"), Poly(0));
    b.transitions = {{"U", "V", S("x1")}};
    CHECK(transition(b, "V", "U") == S("-x1"));
    CHECK(cocycle_check(b).is_connection);
  }

  TEST_CASE("missing transition") {
    Bundle b = two_charts(F3("0 dx1"), F3("dx1"), Poly(0));
    b.transitions.clear();
    CHECK_THROWS_AS(cocycle_check(b), MissingTransition);
    b.charts[1].box = {{"x1", Rational(5), std::nullopt}};
    CHECK(cocycle_check(b).is_connection);
  }

  TEST_CASE("mismatched potentials name the overlap") {
    const ConnectionReport rep = cocycle_check(two_charts(F3("x1 dx2"), F3("2 x1 dx2"), Poly(0)));
    CHECK_FALSE(rep.is_connection);
    REQUIRE(rep.overlaps.size() == 1);
    CHECK(rep.overlaps[0].u == "U");
    CHECK(rep.overlaps[0].v == "V");
    CHECK(rep.overlaps[0].status == ZeroStatus::ProvenNonzero);
  }

  TEST_CASE("triple overlaps check the cocycle") {
    Bundle b;
    b.charts = {{"U", {}}, {"V", {}}, {"W", {}}};
    const DifferentialForm A = F3("x3 dx1");
    b.potentials = {{"U", A}, {"V", A - F3("2 x2 dx2")}, {"W", A - F3("2 x2 dx2 + cos(x3) dx3")}};
    b.transitions = {{"V", "U", S("x2^2")}, {"W", "V", S("sin(x3)")}, {"W", "U", S("x2^2 + sin(x3) + 4")}};
    ConnectionReport rep = cocycle_check(b);
    REQUIRE(rep.triples.size() == 1);
    CHECK(rep.triples[0].status == ZeroStatus::ProvenZero);
    CHECK(rep.is_connection);

    b.transitions[2].lambda = S("x2^2");
    rep = cocycle_check(b);
    CHECK(rep.triples[0].status == ZeroStatus::ProvenNonzero);
    CHECK_FALSE(rep.is_connection);
  }
}

TEST_SUITE("curvature") {
  TEST_CASE("examples") {
    CHECK(curvature(F3("x1 dx2")) == F3("dx1^dx2"));
    const Poly lambda = testing::opaque_form(E3, 0, "Lambda").scalar_value();
    CHECK(curvature(ext_d(DifferentialForm::scalar(E3, lambda))).is_zero());
    CHECK_THROWS_AS(curvature(F3("dx1^dx2")), DegreeError);
  }

  TEST_CASE("bracket term vanishes for random potentials") {
    testing::Rng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
      const Chart& chart = trial % 2 ? M4 : E3;
      const DifferentialForm A = testing::random_form(rng, chart, 1, trial % 5 == 0);
      CHECK(zero_status(wedge(A, A)) == ZeroStatus::ProvenZero);
      CHECK(proven_zero(curvature(A) - ext_d(A)));
    }
  }

  TEST_CASE("agreement under a gauge change") {
    const DifferentialForm A = testing::opaque_form(E3, 1, "A");
    const Poly lambda = testing::opaque_form(E3, 0, "Lambda").scalar_value();
    const Bundle b = two_charts(A, A - ext_d(DifferentialForm::scalar(E3, lambda)), lambda);
    CHECK(cocycle_check(b).is_connection);
    const CurvatureReport rep = curvature_agreement(b);
    CHECK(rep.agree);
    REQUIRE(rep.F.has_value());
    CHECK(*rep.F == ext_d(A));
  }

  TEST_CASE("uniform magnetic field split across two charts") {
    const Bundle b =
        two_charts(parse_form("c x1 dx2", M4), parse_form("-c x2 dx1", M4), S("c*x1*x2", M4), M4);
    CHECK(cocycle_check(b).is_connection);
    const CurvatureReport rep = curvature_agreement(b);
    REQUIRE(rep.F.has_value());
    CHECK(*rep.F == parse_form("c dx1^dx2", M4));
    const em4::Field f = em4::assemble_faraday({Poly(0), Poly(0), Poly(0)}, {Poly(0), Poly(0), Poly(1)});
    CHECK(*rep.F == f.F);
  }

  TEST_CASE("mismatched curvature is refuted") {
    const CurvatureReport rep = curvature_agreement(two_charts(F3("x1 dx2"), F3("2 x1 dx2"), Poly(0)));
    CHECK_FALSE(rep.agree);
    CHECK_FALSE(rep.F.has_value());
    REQUIRE(rep.overlaps.size() == 1);
    CHECK(rep.overlaps[0].status == ZeroStatus::ProvenNonzero);
  }

  TEST_CASE("pure gauge configurations have zero curvature everywhere") {
    Bundle b;
    b.charts = {left(), right(), {"W", {{"x2", Rational(0), Rational(3)}}}};
    const char* phases[] = {"x1*x2", "sin(x3)", "exp(x1 - x2)"};
    for (int i = 0; i < 3; ++i) {
      b.potentials.push_back({b.charts[i].name, ext_d(DifferentialForm::scalar(E3, S(phases[i])))});
    }
    // A_V = A_U - dLambda_VU gives Lambda_VU = Lambda_U - Lambda_V for A = dLambda.
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        b.transitions.push_back({b.charts[j].name, b.charts[i].name, S(phases[i]) - S(phases[j])});
      }
    }
    CHECK(cocycle_check(b).is_connection);
    for (const LocalPotential& p : b.potentials) CHECK(curvature(p.A).is_zero());
    CHECK(curvature_agreement(b).F->is_zero());
  }
}

TEST_SUITE("gauge action") {
  TEST_CASE("gauging one chart preserves the verdict and the curvature") {
    testing::Rng rng(77);
    const testing::ExprGen gen = testing::coefficient_gen(E3, true);
    for (int trial = 0; trial < 30; ++trial) {
      const DifferentialForm A = testing::random_form(rng, E3, 1, trial % 3 == 0);
      const Poly lambda = expr::normalize(gen(rng, 2));
      const bool consistent = trial % 2 == 0;
      const Bundle b = two_charts(A, A - ext_d(DifferentialForm::scalar(E3, lambda)),
                                  consistent ? lambda : lambda + S("x1*x3"));
      const Poly lambda0 = expr::normalize(gen(rng, 2));
      const std::string which = trial % 4 < 2 ? "U" : "V";
      const Bundle g = gauge_chart(b, which, lambda0);
      CHECK(cocycle_check(g).is_connection == cocycle_check(b).is_connection);
      CHECK(cocycle_check(b).is_connection == consistent);
      const CurvatureReport before = curvature_agreement(b), after = curvature_agreement(g);
      CHECK(before.agree == after.agree);
      if (before.F && after.F) CHECK(proven_zero(*before.F - *after.F));
    }
  }
}
