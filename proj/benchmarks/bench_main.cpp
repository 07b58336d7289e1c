#include "kyt/combinat.hpp"
#include "kyt/decompose.hpp"
#include "kyt/flattening.hpp"
#include "kyt/rank_detect.hpp"
#include "kyt/tensor.hpp"

#include <benchmark/benchmark.h>

using namespace kyt;

namespace {

Tensor3 planted_tensor(int n1, int n, int r, std::uint64_t seed) {
    return assemble(random_generic_decomposition(n1, n, n, r, seed));
}

void BM_SubsetRankUnrank(benchmark::State& state) {
    const SubsetIndexer idx(static_cast<int>(state.range(0)), 3);
    std::uint64_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(idx.rank(idx.unrank(i)));
        i = (i + 1) % idx.count();
    }
}
BENCHMARK(BM_SubsetRankUnrank)->Arg(7)->Arg(12)->Arg(20);

void BM_KoszulBuild(benchmark::State& state) {
    const int q = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    const Tensor3 t = planted_tensor(q, n, 4, 1);
    const int p = balanced_p(q, n, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(koszul_flattening(t, p, q).matrix);
    }
}
BENCHMARK(BM_KoszulBuild)->Args({5, 15})->Args({7, 30});

void BM_FlatteningRank(benchmark::State& state) {
    const int q = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    const Tensor3 t = planted_tensor(q, n, 6, 2);
    const TolerancePolicy tol;
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_rank(t, q, tol).flattening_rank);
    }
}
BENCHMARK(BM_FlatteningRank)->Args({5, 15})->Args({7, 30})->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
    const int r = static_cast<int>(state.range(0));
    const Tensor3 t = assemble(random_generic_decomposition(7, 12, 12, r, 3));
    DecompositionPlan plan;
    plan.q = 5;
    plan.p = 2;
    plan.r = r;
    for (auto _ : state) {
        benchmark::DoNotOptimize(decompose(t, plan).A);
    }
}
BENCHMARK(BM_Decompose)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
