#include "aq/path.hpp"

#include <benchmark/benchmark.h>

using namespace aq;

namespace {

void BM_SlitModeGramTiled(benchmark::State& state) {
    const ApertureMask mask = ApertureMask::tiled(6, 0.5);
    const int truncation = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(slit_mode_gram(mask, OamIndex{2}, truncation));
    state.SetItemsProcessed(state.iterations() * (2 * truncation + 1));
}
BENCHMARK(BM_SlitModeGramTiled)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);

void BM_SlitModeGramGeneral(benchmark::State& state) {
    const ApertureMask mask(6, 0.5, 0.9);
    const int truncation = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(slit_mode_gram(mask, OamIndex{2}, truncation));
    state.SetItemsProcessed(state.iterations() * (2 * truncation + 1));
}
BENCHMARK(BM_SlitModeGramGeneral)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);

void BM_ModeOverlapGeneral(benchmark::State& state) {
    const ApertureMask mask(3, 0.8, 1.3);
    const int truncation = static_cast<int>(state.range(0));
    const auto slits = mask.slits();
    for (auto _ : state) {
        benchmark::DoNotOptimize(mode_overlap_general(mask, slits[0], OamIndex{0}, slits[1], OamIndex{1}, truncation));
    }
}
BENCHMARK(BM_ModeOverlapGeneral)->RangeMultiplier(8)->Range(1 << 10, 1 << 20);

void BM_PurityQuadrupleSum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const OverlapMatrix b = single_aperture_overlaps(n, 1.3);
    const CVector c = uniform_weights(2 * n + 1);
    for (auto _ : state) benchmark::DoNotOptimize(purity(c, b));
}
BENCHMARK(BM_PurityQuadrupleSum)->DenseRange(1, 9, 2);

void BM_PuritySymmetric(benchmark::State& state) {
    const OverlapMatrix b = single_aperture_overlaps(static_cast<int>(state.range(0)), 1.3);
    for (auto _ : state) benchmark::DoNotOptimize(purity_symmetric(b));
}
BENCHMARK(BM_PuritySymmetric)->DenseRange(1, 9, 2);

void BM_SchmidtOracle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const OverlapMatrix b = single_aperture_overlaps(n, 1.3);
    const BiphotonState s = oam_biphoton(uniform_weights(2 * n + 1));
    for (auto _ : state) benchmark::DoNotOptimize(schmidt_oracle(s, b, b));
}
BENCHMARK(BM_SchmidtOracle)->DenseRange(1, 9, 2);

void BM_GridOracle(benchmark::State& state) {
    const AngularBiphoton s = oam_angular_state(uniform_weights(5), kPi);
    const int cells = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(grid_oracle(s, cells));
}
BENCHMARK(BM_GridOracle)->Arg(1 << 12)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

void BM_PathEntanglement(benchmark::State& state) {
    PathConfig c;
    c.n_signal = c.n_idler = static_cast<int>(state.range(0));
    c.alpha = 0.05;
    c.model = CorrelationModel::diagonal;
    for (auto _ : state) benchmark::DoNotOptimize(path_entanglement(c));
}
BENCHMARK(BM_PathEntanglement)->DenseRange(2, 8, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
