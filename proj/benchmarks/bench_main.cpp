#include <benchmark/benchmark.h>

#include <random>

#include "cdfi/kernels.hpp"
#include "cdfi/noise.hpp"
#include "cdfi/norms.hpp"
#include "cdfi/solver.hpp"

using namespace cdfi;

namespace {

ScalarField gaussian_field(const SpaceTimeGrid& g, const IndexBox& box, std::uint64_t seed) {
    ScalarField h(g, box);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (double& v : h.values()) v = nd(rng);
    return h;
}

// Arg: nx. Kernel at T = 1/4 on the full grid.
void BM_MollifyDirect(benchmark::State& st) {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, static_cast<int>(st.range(0)));
    const ScalarField h = gaussian_field(g, g.full_box(), 1);
    const MollifierKernel k = make_kernel(0.25, 1, g);
    for (auto _ : st) benchmark::DoNotOptimize(mollify(h, k, ConvolutionMethod::direct));
}
BENCHMARK(BM_MollifyDirect)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_MollifyFft(benchmark::State& st) {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, static_cast<int>(st.range(0)));
    const ScalarField h = gaussian_field(g, g.full_box(), 1);
    const MollifierKernel k = make_kernel(0.25, 1, g);
    for (auto _ : st) benchmark::DoNotOptimize(mollify(h, k, ConvolutionMethod::fft));
}
BENCHMARK(BM_MollifyFft)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

// Cached plan, as used by the negative-norm evaluator on an ensemble.
void BM_MollifyPlan(benchmark::State& st) {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, static_cast<int>(st.range(0)));
    const ScalarField h = gaussian_field(g, g.full_box(), 1);
    const MollifierPlan plan(make_kernel(0.25, 1, g), g, g.full_box());
    for (auto _ : st) benchmark::DoNotOptimize(plan.apply(h));
}
BENCHMARK(BM_MollifyPlan)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_HolderBranchAndBound(benchmark::State& st) {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, static_cast<int>(st.range(0)));
    const ScalarField h = gaussian_field(g, g.full_box(), 2);
    const IndexBox region = cylinder_region(0.125, g);
    for (auto _ : st) benchmark::DoNotOptimize(holder_seminorm(h, 0.49, region));
}
BENCHMARK(BM_HolderBranchAndBound)->Arg(17)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_HolderBrute(benchmark::State& st) {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, static_cast<int>(st.range(0)));
    const ScalarField h = gaussian_field(g, g.full_box(), 2);
    const IndexBox region = cylinder_region(0.125, g);
    for (auto _ : st) benchmark::DoNotOptimize(holder_seminorm_brute(h, 0.49, region));
}
BENCHMARK(BM_HolderBrute)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

void BM_SolvePde(benchmark::State& st) {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, static_cast<int>(st.range(0)));
    const NoiseRealization z = sample_white_noise(g, 3);
    const Nonlinearity nl = Nonlinearity::polynomial(3.0);
    for (auto _ : st) benchmark::DoNotOptimize(solve_rd_pde(nl, &z.field, BoundaryData::constant(1e4), g));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(g.nt) * g.nx);
}
BENCHMARK(BM_SolvePde)->Arg(65)->Arg(129)->Arg(257)->Unit(benchmark::kMillisecond);

void BM_WhiteNoise(benchmark::State& st) {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, static_cast<int>(st.range(0)));
    const IndexBox box = noise_box(g);
    std::uint64_t seed = 0;
    for (auto _ : st) benchmark::DoNotOptimize(sample_white_noise(g, ++seed, box));
}
BENCHMARK(BM_WhiteNoise)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_ColoredNoise(benchmark::State& st) {
    const SpaceTimeGrid g = SpaceTimeGrid::make(1, static_cast<int>(st.range(0)));
    const IndexBox box = noise_box(g);
    std::uint64_t seed = 0;
    for (auto _ : st)
        benchmark::DoNotOptimize(sample_colored_noise(g, {NoiseKind::colored, 0.5}, ++seed, box));
}
BENCHMARK(BM_ColoredNoise)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
