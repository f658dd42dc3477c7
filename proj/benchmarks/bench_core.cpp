// Microbenchmarks for the hot loops. The count_aps numbers are the cost model
// behind keeping AP counting a plain O(n^2) double loop at desk scale.

#include <benchmark/benchmark.h>

#include "limitlab/combinatorics.hpp"
#include "limitlab/counters.hpp"
#include "limitlab/distributions.hpp"
#include "limitlab/rng.hpp"
#include "limitlab/samplers.hpp"

using namespace limitlab;

static void BM_PhiloxU64(benchmark::State& state) {
    RngStream rng(42, 0);
    for (auto _ : state) benchmark::DoNotOptimize(rng.next_u64());
}
BENCHMARK(BM_PhiloxU64);

static void BM_SampleSubset(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    RngStream rng(42, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_subset(n, 0.5, rng));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleSubset)->Arg(101)->Arg(1009)->Arg(10007);

static void BM_CountAps(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    RngStream rng(42, 0);
    const auto s = sample_subset(n, 0.5, rng);
    for (auto _ : state) benchmark::DoNotOptimize(count_aps(s));
    state.SetItemsProcessed(state.iterations() * (n * (n - 1) / 2));
}
BENCHMARK(BM_CountAps)->Arg(101)->Arg(1009)->Arg(10007);

static void BM_CountApsContinuous(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    RngStream rng(42, 0);
    const auto s = sample_continuous(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(count_aps_continuous(s));
    state.SetItemsProcessed(state.iterations() * (n * (n - 1) / 2));
}
BENCHMARK(BM_CountApsContinuous)->Arg(101)->Arg(1009);

static void BM_LehmerDescents(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    RngStream rng(42, 0);
    for (auto _ : state) {
        const auto code = sample_lehmer(n, rng);
        benchmark::DoNotOptimize(count_descents(code));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_LehmerDescents)->Arg(100)->Arg(1000);

static void BM_EulerianPmf(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(eulerian_pmf(n));
}
BENCHMARK(BM_EulerianPmf)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_ExhaustiveApTable(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(JointApTable(n));
    state.SetItemsProcessed(state.iterations() * (1ll << n));
}
BENCHMARK(BM_ExhaustiveApTable)->Arg(13)->Arg(17)->Arg(19)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
