#include "mwf/em/em4.hpp"
#include "support/random_form.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace mwf;

void BM_Normalize(benchmark::State& state) {
  testing::Rng rng(1);
  const testing::ExprGen gen;
  std::vector<expr::ScalarExpr> exprs;
  for (int i = 0; i < 64; ++i) exprs.push_back(gen(rng, static_cast<int>(state.range(0))));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(expr::normalize(exprs[i++ % exprs.size()]));
}
BENCHMARK(BM_Normalize)->DenseRange(2, 4);

void BM_IsZero(benchmark::State& state) {
  testing::Rng rng(2);
  const Chart m4 = Chart::minkowski4();
  const DifferentialForm w = testing::random_form(rng, m4, 2, false, 3);
  const DifferentialForm residual = ext_d(w);
  for (auto _ : state) benchmark::DoNotOptimize(zero_status(residual));
}
BENCHMARK(BM_IsZero);

void BM_Maxwell4Residuals(benchmark::State& state) {
  const Chart m4 = Chart::minkowski4();
  em4::Field f = em4::assemble_faraday(
      {Poly(0), expr::normalize(expr::parse_expr("sin(x1 - x0)", m4)), Poly(0)},
      {Poly(0), Poly(0), expr::normalize(expr::parse_expr("(1/c)*sin(x1 - x0)", m4))});
  f.Jtilde = DifferentialForm(m4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(em4::maxwell_residuals(f));
}
BENCHMARK(BM_Maxwell4Residuals);

void BM_Boost(benchmark::State& state) {
  const Chart m4 = Chart::minkowski4();
  const DifferentialForm F = parse_form("sin(x1 - x0) dx0^dx2 - sin(x1 - x0) dx1^dx2", m4);
  const LinearMap L = LinearMap::boost(Rational(1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(pullback_linear(F, L));
}
BENCHMARK(BM_Boost);

}  // namespace
