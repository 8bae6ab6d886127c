#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "stiff_relax/bgk.hpp"
#include "stiff_relax/multiplier.hpp"
#include "stiff_relax/nonlinear_relax.hpp"
#include "stiff_relax/spectral_linear.hpp"
#include "stiff_relax/varcoef.hpp"

using namespace stiff_relax;

namespace {

void BM_LinearStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int q = 3;
  const LinearParams p{0.6, 1e-3};
  ConservedState init{project([](double x) { return Complex(std::exp(std::sin(2 * std::numbers::pi * x))); },
                              n, 1.0),
                      SpectralField(n, 1.0)};
  init.v = Complex(0.6) * init.u;
  const double dt = 1e-4;
  LinearHistory h = bootstrap_linear(init, q, 0.0, dt, p);
  const BdfTableau tab = bdf_tableau(q);
  for (auto _ : state) benchmark::DoNotOptimize(step_bdf_linear(h, tab, p, dt));
}
BENCHMARK(BM_LinearStep)->Arg(40)->Arg(160)->Arg(640);

void BM_FluxDivergence(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const NonlinearState s = nonlinear_initial_state(n, {0.2, 1.0}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(flux_divergence(s.u, s.v));
}
BENCHMARK(BM_FluxDivergence)->Arg(100)->Arg(400)->Arg(1600);

void BM_BgkStep(benchmark::State& state) {
  const auto nx = static_cast<std::size_t>(state.range(0));
  const VelocityGrid vg(60, 10.0);
  const double dt = kDefaultBgkLength / nx / 30.0;
  const KineticField init = chapman_init(default_bgk_profile(), 1e-4, vg, nx, kDefaultBgkLength, 1);
  BgkHistory h(2);
  h.push(init, 0.0);
  h.push(init, dt);
  const BdfTableau tab = bdf_tableau(2);
  for (auto _ : state) benchmark::DoNotOptimize(step_bdf_bgk(h, tab, {1e-4}, dt, vg));
}
BENCHMARK(BM_BgkStep)->Arg(50)->Arg(100)->Arg(200);

void BM_VarCoefStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const double len = 2 * std::numbers::pi;
  VarCoefSolver solver(VarCoefParams::sample([](double x) { return 0.3 + 0.2 * std::sin(x); },
                                             [](double x) { return 1.0 + 0.5 * std::cos(x); },
                                             varcoef_grid_points(n), len),
                       n);
  VarCoefState s{project([](double x) { return Complex(std::sin(x)); }, n, len),
                 SpectralField(n, len)};
  for (auto _ : state) {
    solver.step(s, 1e-4, 1e-3);
    benchmark::DoNotOptimize(s.u[0]);
  }
}
BENCHMARK(BM_VarCoefStep)->Arg(16)->Arg(64);

void BM_MultiplierIdentity(benchmark::State& state) {
  const MultiplierSet m = multiplier_set(4);
  const BdfTableau tab = bdf_tableau(4);
  for (auto _ : state) benchmark::DoNotOptimize(verify_identity_g(m, tab, 100));
}
BENCHMARK(BM_MultiplierIdentity);

}  // namespace
BENCHMARK_MAIN();
