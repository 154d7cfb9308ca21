#include <benchmark/benchmark.h>

#include "qstatic/equilibria.hpp"
#include "qstatic/game.hpp"
#include "qstatic/montecarlo.hpp"
#include "qstatic/quantum.hpp"

using namespace qstatic;

namespace {

const GamePayoffs kGame(3.0, 2.0, 1.0);

void BM_ClassicalMixedEquilibria(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(classical_mixed_equilibria(kGame));
  }
}
BENCHMARK(BM_ClassicalMixedEquilibria);

void BM_EntangledEquilibria(benchmark::State& state) {
  const EntangledFamilyState family(0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entangled_equilibria(kGame, family));
  }
}
BENCHMARK(BM_EntangledEquilibria);

void BM_UniqueSolution(benchmark::State& state) {
  const EntangledFamilyState family(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(unique_solution(kGame, family));
  }
}
BENCHMARK(BM_UniqueSolution);

void BM_MixedFinalDensity(benchmark::State& state) {
  const DensityMatrix rho = DensityMatrix::entangled_family(0.8);
  const MixingChoice mix(0.3, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mixed_final_density(rho, mix));
  }
}
BENCHMARK(BM_MixedFinalDensity);

// Coefficient extraction plus enumeration: the full generic route for one
// initial state.
void BM_GenericEnumerator(benchmark::State& state) {
  const DensityMatrix rho = DensityMatrix::entangled_family(0.8);
  const auto ops = payoff_operators(kGame);
  for (auto _ : state) {
    const auto surfaces = bilinear_payoff_coefficients(rho, ops.alice, ops.bob);
    benchmark::DoNotOptimize(enumerate_bilinear_nash(surfaces[0], surfaces[1]));
  }
}
BENCHMARK(BM_GenericEnumerator);

void BM_Simulate(benchmark::State& state) {
  const SimulationConfig config(static_cast<std::uint64_t>(state.range(0)), 42,
                                MixingChoice(0.5, 0.5), DensityMatrix::pure(StateVector::bell()),
                                kGame);
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(config, workers));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)
    ->Args({1 << 16, 1})
    ->Args({1 << 20, 1})
    ->Args({1 << 20, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
