// Microbenchmarks for the hot paths: exact top-k search, SNN graph building
// and pairwise stability.

#include <benchmark/benchmark.h>

#include <random>

#include "wemstab/embedding.hpp"
#include "wemstab/knn.hpp"
#include "wemstab/snnd.hpp"
#include "wemstab/stability.hpp"

namespace {

wemstab::EmbeddingSpace random_space(std::uint64_t seed, std::size_t n, std::size_t d) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<std::string> words(n);
    char buf[24];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, "w%06zu", i);
        words[i] = buf;
    }
    std::vector<double> data(n * d);
    for (auto& v : data) v = dist(rng);
    wemstab::SpaceMetadata meta;
    meta.dimensions = d;
    meta.source_label = "bench";
    return wemstab::EmbeddingSpace(std::move(meta), std::move(words), std::move(data));
}

void BM_TopKAll(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto threads = static_cast<int>(state.range(1));
    auto space = random_space(1, n, 50);
    for (auto _ : state) {
        auto table = wemstab::top_k_all(space, space.vocabulary(), 10, threads);
        benchmark::DoNotOptimize(table);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_TopKAll)
    ->Args({1000, 1})
    ->Args({1000, 0})
    ->Args({4000, 1})
    ->Args({4000, 0})
    ->Unit(benchmark::kMillisecond);

void BM_SnnGraph(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto space = random_space(2, n, 25);
    auto table = wemstab::top_k_all(space, space.vocabulary(), 20);
    wemstab::SnndParams params;
    params.knn_size = 20;
    params.delta_sim = 6;
    for (auto _ : state) {
        auto graph = wemstab::build_snn_graph(table, params);
        benchmark::DoNotOptimize(graph);
    }
}
BENCHMARK(BM_SnnGraph)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_PairStability(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto s1 = random_space(3, n, 25);
    auto s2 = random_space(4, n, 25);
    auto t1 = wemstab::top_k_all(s1, s1.vocabulary(), 10);
    auto t2 = wemstab::top_k_all(s2, s2.vocabulary(), 10);
    for (auto _ : state) {
        auto report = wemstab::pair_stability(t1, t2);
        benchmark::DoNotOptimize(report);
    }
}
BENCHMARK(BM_PairStability)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
