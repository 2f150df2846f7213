#include "otto/qubit_cycle.hpp"
#include "otto/work_heat_distribution.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace otto;

void BM_SamplerNextIndex(benchmark::State& state) {
    const WorkHeatPmf pmf = bosonic_pmf(1.0, 0.6, Occupations{8.0, 2.0, Statistics::Bose}, 0.5);
    Sampler sampler(pmf, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sampler.next_index());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SamplerNextIndex);

void BM_SampleBatch(benchmark::State& state) {
    const WorkHeatPmf pmf = bosonic_pmf(1.0, 0.6, Occupations{8.0, 2.0, Statistics::Bose}, 1.0);
    const auto count = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample(pmf, count, 3));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleBatch)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_ViolationScan(benchmark::State& state) {
    const int resolution = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(violation_scan(1.5707963267948966, resolution));
    }
}
BENCHMARK(BM_ViolationScan)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
