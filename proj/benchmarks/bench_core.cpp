#include <benchmark/benchmark.h>

#include "landau/equilibria.hpp"
#include "landau/generators.hpp"
#include "landau/kinetic_sim.hpp"
#include "landau/linear_theory.hpp"
#include "landau/penrose.hpp"

using namespace landau;

static void BM_Dispersion(benchmark::State& state) {
  const auto eq = equilibria::gaussian_equilibrium(1);
  const penrose::DispersionQuery q{{static_cast<int>(state.range(0)), 0}, {0.0, 2.35}, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(penrose::dispersion(eq, q));
}
BENCHMARK(BM_Dispersion)->Arg(1)->Arg(4)->Arg(8);

static void BM_Volterra(benchmark::State& state) {
  const auto eq = equilibria::gaussian_equilibrium(1);
  const TimeGrid grid = TimeGrid::covering(0.01, static_cast<double>(state.range(0)));
  const kinetic::SeedSpec seed{{{1, 0}, 1e-3, 0.0, kinetic::Species::plus, {}}};
  const auto src = linear::build_source(kinetic::seed_spectrum(seed, kinetic::Species::plus, 1),
                                        kinetic::seed_spectrum(seed, kinetic::Species::minus, 1), grid, {{1, 0}}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(linear::solve_volterra(src, eq, 0.01));
}
BENCHMARK(BM_Volterra)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_KineticStep(benchmark::State& state) {
  kinetic::SimConfig cfg;
  cfg.n_x = 32;
  cfg.n_v = static_cast<int>(state.range(0));
  const kinetic::Solver solver(cfg, equilibria::gaussian_equilibrium(1));
  const kinetic::SeedSpec seed{{{1, 0}, 1e-3, 0.0, kinetic::Species::plus, {}}};
  auto s = solver.init_state(seed, generators::GevreyParams{}).state;
  for (auto _ : state) solver.step(s);
}
BENCHMARK(BM_KineticStep)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMicrosecond);

static void BM_GFunctional(benchmark::State& state) {
  kinetic::SimConfig cfg;
  const kinetic::Solver solver(cfg, equilibria::gaussian_equilibrium(1));
  const kinetic::SeedSpec seed{{{1, 0}, 1e-3, 0.0, kinetic::Species::plus, {}}};
  const auto s = solver.init_state(seed, generators::GevreyParams{}).state;
  const auto frame = solver.gliding_frame(s);
  for (auto _ : state) benchmark::DoNotOptimize(generators::g_functional(frame.plus, frame.minus, 0.05, {}));
}
BENCHMARK(BM_GFunctional)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
