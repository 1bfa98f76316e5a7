#include <benchmark/benchmark.h>

#include "opexp/fock.hpp"
#include "opexp/identities.hpp"
#include "opexp/lattice.hpp"
#include "opexp/lindblad.hpp"

using namespace opexp;

static void BM_Expm(benchmark::State& state)
{
    LatticeConfig cfg;
    cfg.dim = state.range(0);
    const ComplexMatrix h = (-kI * 2.0) * lattice_hamiltonian(cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(expm(h));
    }
}
BENCHMARK(BM_Expm)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_ExpAnticommuting(benchmark::State& state)
{
    const Index dim = state.range(0);
    const StructuredPair p(parity_op(dim), position_op(dim), PairRelation::Anticommuting);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exp_anticommuting(p, 1.0, 0.5, 2.0));
    }
}
BENCHMARK(BM_ExpAnticommuting)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Rk4(benchmark::State& state)
{
    const Index dim = state.range(0);
    const LindbladConfig cfg{0.45, dim};
    const DensityMatrix rho0 = random_density_matrix(dim, 1);
    const std::vector<double> ts{1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_rk4(rho0, cfg, ts, 1e-3));
    }
}
BENCHMARK(BM_Rk4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_EvolveAnalytic(benchmark::State& state)
{
    const Index dim = state.range(0);
    const LindbladConfig cfg{0.45, dim};
    const DensityMatrix rho0 = random_density_matrix(dim, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve_analytic(rho0, 2.0, cfg));
    }
}
BENCHMARK(BM_EvolveAnalytic)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_FieldAmplitudes(benchmark::State& state)
{
    LatticeConfig cfg;
    cfg.grid = PositionGrid(12.0, 2401);
    const WaveFunction psi0 = initial_wavefunction(initial::HermiteGauss{3}, cfg.grid);
    const RealMatrix modes = hermite_gauss_table(80, cfg.grid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(field_amplitudes(psi0, cfg, 5.0, modes));
    }
}
BENCHMARK(BM_FieldAmplitudes)->Unit(benchmark::kMillisecond);

static void BM_BesselMeanPhoton(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(mean_photon_coherent_bessel(4.0, 0.9, 10.0));
    }
}
BENCHMARK(BM_BesselMeanPhoton);

BENCHMARK_MAIN();
