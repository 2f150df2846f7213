#include "otto/fock_oracle.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace otto;

void BM_BeamSplitterExponential(benchmark::State& state) {
    const int n_max = static_cast<int>(state.range(0));
    const StrokeSpec spec = StrokeSpec::beam_splitter(0.8, 0.3);
    for (auto _ : state) {
        double sum = 0.0;
        for_each_sector(spec, n_max, SectorMethod::Exponential,
                        [&](const SectorBlock& b) { sum += b.unitarity_defect; });
        benchmark::DoNotOptimize(sum);
    }
}
BENCHMARK(BM_BeamSplitterExponential)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_BeamSplitterLadder(benchmark::State& state) {
    const int n_max = static_cast<int>(state.range(0));
    const StrokeSpec spec = StrokeSpec::beam_splitter(0.8, 0.3);
    for (auto _ : state) {
        double sum = 0.0;
        for_each_sector(spec, n_max, SectorMethod::Ladder,
                        [&](const SectorBlock& b) { sum += b.unitarity_defect; });
        benchmark::DoNotOptimize(sum);
    }
}
BENCHMARK(BM_BeamSplitterLadder)->Arg(20)->Arg(40)->Arg(80)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SqueezeStroke(benchmark::State& state) {
    const int n_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_stroke(StrokeSpec::two_mode_squeeze(0.4), n_max));
    }
}
BENCHMARK(BM_SqueezeStroke)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_JointDistributionSwap(benchmark::State& state) {
    const int n_max = static_cast<int>(state.range(0));
    const Occupations occ{8.0, 2.0, Statistics::Bose};
    const TruncationSpec trunc = TruncationSpec::for_occupations(occ, n_max);
    for (auto _ : state) {
        benchmark::DoNotOptimize(joint_distribution(StrokeSpec::beam_splitter(1.5707963267948966), occ, 1.0, 0.6,
                                                    trunc));
    }
}
BENCHMARK(BM_JointDistributionSwap)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
