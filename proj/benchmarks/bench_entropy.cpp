#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hfentropy/entropy.hpp"
#include "hfentropy/theory.hpp"

namespace {

std::vector<std::uint8_t> random_symbols(std::size_t n, int alphabet) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> d(0, alphabet - 1);
    std::vector<std::uint8_t> s(n);
    for (auto& v : s) v = static_cast<std::uint8_t>(d(rng));
    return s;
}

void BM_BlockDistribution(benchmark::State& state) {
    const auto s = random_symbols(static_cast<std::size_t>(state.range(0)), 2);
    const int k = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hfentropy::entropy::block_distribution(s, 2, k));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BlockDistribution)->Args({100000, 2})->Args({100000, 10})->Args({1000000, 10});

void BM_Grassberger(benchmark::State& state) {
    const auto s = random_symbols(1000000, 2);
    const auto d = hfentropy::entropy::block_distribution(s, 2, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hfentropy::entropy::grassberger_entropy(d));
    }
}
BENCHMARK(BM_Grassberger)->Arg(2)->Arg(10)->Arg(16);

void BM_ConditionalProfile(benchmark::State& state) {
    const auto s = random_symbols(static_cast<std::size_t>(state.range(0)), 2);
    const int orders[] = {2, 3, 6, 10};
    for (auto _ : state) {
        benchmark::DoNotOptimize(hfentropy::entropy::rescaled_conditional_profile(
            s, 2, orders, hfentropy::entropy::Estimator::Grassberger));
    }
}
BENCHMARK(BM_ConditionalProfile)->Arg(100000);

void BM_TheoryTable(benchmark::State& state) {
    for (auto _ : state) {
        for (int i = -99; i <= 99; ++i) {
            benchmark::DoNotOptimize(hfentropy::theory::theoretical_entropies(hfentropy::Ar1{i / 100.0}));
        }
    }
}
BENCHMARK(BM_TheoryTable);

}  // namespace
