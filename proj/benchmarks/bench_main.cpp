#include <benchmark/benchmark.h>

#include "ness/macro.hpp"
#include "ness/moments.hpp"
#include "ness/sim.hpp"

using namespace ness;

static void BM_StationaryMoments(benchmark::State& state) {
    const ChainParams p = make_params(static_cast<int>(state.range(0)), 1.0, 1.0, 1.0, 2.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_stationary(p).M.data());
}
BENCHMARK(BM_StationaryMoments)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_StrangStep(benchmark::State& state) {
    const ChainParams p = make_params(static_cast<int>(state.range(0)), 1.0, 1.0, 1.0, 2.0, 1.0);
    ReplicaRng rng(7, 0);
    StateVector z = InitialEnsemble::gibbs(p.n, 1.5).sample(p.n, rng);
    for (auto _ : state) {
        strang_step(z, 0.02, 1.0, p, rng, SweepOrder::EvenOdd);
        benchmark::DoNotOptimize(z.z().data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StrangStep)->Arg(16)->Arg(64)->Arg(256);

// Cost of advancing both macroscopic fields to t = 0.01.
static void BM_MacroSolve(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const ChainParams p = make_params(8, 1.0, 1.0, 1.0, 2.0, 1.0);
    const std::vector<double> zero(m + 1, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_macro(p, zero, zero, {0.01}, 1e-4));
}
BENCHMARK(BM_MacroSolve)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
