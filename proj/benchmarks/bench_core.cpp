#include <benchmark/benchmark.h>

#include <random>

#include "horolab/engine.hpp"
#include "horolab/invariance.hpp"

using namespace horolab;

namespace {

SeqVector random_block(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> c(n);
    for (double& v : c) v = u(rng);
    return SeqVector(std::move(c));
}

void BM_distance_l2(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SeqVector x = random_block(n, 1);
    const SeqVector y = random_block(n, 2);
    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    for (auto _ : state) benchmark::DoNotOptimize(distance(x, y, l2));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_distance_l2)->Range(64, 1 << 20);

void BM_shift_orbit_advance(benchmark::State& state) {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    for (auto _ : state) {
        SeqVector x = SeqVector::zero();
        for (int k = 0; k < state.range(0); ++k) x = T.apply(std::move(x));
        benchmark::DoNotOptimize(x.block_size());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_shift_orbit_advance)->Range(1 << 10, 1 << 18);

void BM_cesaro_average(benchmark::State& state) {
    const MapExpr T = build_tmu(MapExpr::diagonal(random_block(64, 3)), random_block(64, 4), 0.5);
    const SeqVector seed = random_block(64, 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(cesaro_average(T, seed, state.range(0)).block_size());
}
BENCHMARK(BM_cesaro_average)->Range(64, 1 << 14);

void BM_asymptotic_center(benchmark::State& state) {
    std::vector<SeqVector> pts;
    const SeqVector a = random_block(8, 6);
    for (std::size_t j = 1; j <= 40; ++j) pts.push_back(a + SeqVector::unit(8 + j));
    const SpaceSpec l2 = SpaceSpec::lp(2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(asymptotic_center(pts, l2, 8, 20).value);
}
BENCHMARK(BM_asymptotic_center);

void BM_subinvariance_scan(benchmark::State& state) {
    const MapExpr T = MapExpr::prepend_shift(1.0);
    const Functional h = Functional::shift_l1();
    const ProbeSet probes = ProbeSet::defaults(T, 200, 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(subinvariance(h, T, probes, 0.0).max_defect);
}
BENCHMARK(BM_subinvariance_scan);

}  // namespace

BENCHMARK_MAIN();
