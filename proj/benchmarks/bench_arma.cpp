#include <benchmark/benchmark.h>

#include "hfentropy/arma.hpp"
#include "hfentropy/efficiency.hpp"
#include "hfentropy/ingestion.hpp"

namespace {

std::vector<double> simulate(const hfentropy::ProcessSpec& process, std::size_t n) {
    hfentropy::Rng rng(11);
    return hfentropy::ingest::simulate_process(process, n, 1.0, rng);
}

void BM_FitArma11(benchmark::State& state) {
    const auto x = simulate(hfentropy::ArmaProcess{{0.5}, {-0.3}}, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hfentropy::arma::fit_arma(x, 1, 1));
    }
}
BENCHMARK(BM_FitArma11)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SelectOrder(benchmark::State& state) {
    const auto x = simulate(hfentropy::Ma1{0.4}, 100000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hfentropy::arma::select_order(x, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_SelectOrder)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_WhiteNoiseBand(benchmark::State& state) {
    const int orders[] = {2, 3, 6, 10};
    for (auto _ : state) {
        benchmark::DoNotOptimize(hfentropy::efficiency::mc_bands(hfentropy::WhiteNoise{}, 100000, orders, 100, 3));
    }
}
BENCHMARK(BM_WhiteNoiseBand)->Unit(benchmark::kMillisecond);

}  // namespace
