#include <benchmark/benchmark.h>

#include <random>

#include "sigvol/hedging.hpp"
#include "sigvol/riccati.hpp"
#include "sigvol/signature.hpp"
#include "sigvol/tensor.hpp"

using namespace sigvol;

namespace {

GradedTensor dense_random(std::mt19937_64& rng, int d, std::size_t n) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    GradedTensor::Map m;
    for (const auto& w : enumerate_words(d, 0, n)) m[w] = c(rng);
    return GradedTensor(d, n, std::move(m));
}

// sparse map-based shuffle, both factors dense up to level n/2
void BM_Shuffle(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto n = static_cast<std::size_t>(state.range(1));
    std::mt19937_64 rng(1);
    const auto a = dense_random(rng, d, n / 2), b = dense_random(rng, d, n - n / 2);
    for (auto _ : state) benchmark::DoNotOptimize(shuffle_product(a, b, n));
}
BENCHMARK(BM_Shuffle)->Args({1, 4})->Args({2, 4})->Args({2, 6})->Args({3, 6});

void BM_SignatureStream(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const auto n = static_cast<std::size_t>(state.range(1));
    const auto paths = simulate_brownian_grid(d, 1.0, 100, 1, 3);
    const auto path = paths.path(0);
    for (auto _ : state) benchmark::DoNotOptimize(signature_piecewise_linear(path, n));
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SignatureStream)->Args({1, 2})->Args({1, 4})->Args({2, 4})->Args({3, 5});

void BM_RiccatiFlow(benchmark::State& state) {
    const auto deg_u = static_cast<std::size_t>(state.range(0));
    const DualElement ell(1, {{Word{}, 0.2}, {Word{1}, 0.1}});
    GradedTensor::Map u;
    for (const auto& w : enumerate_words(1, 1, deg_u)) u[w] = 0.05;
    const DualElement dir(1, u);
    const auto table = build_generator(required_truncation(deg_u, 1), 1, LogPriceBlock{ell, {}}, deg_u);
    const auto u0 = RiccatiState::from_direction(table, dir, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(integrate_flow(u0, 1.0, table));
    state.counters["states"] = static_cast<double>(table.state_size());
}
BENCHMARK(BM_RiccatiFlow)->DenseRange(1, 3);

void BM_GKWProjection(benchmark::State& state) {
    const auto n_paths = static_cast<std::size_t>(state.range(0));
    SigVolParams p{DualElement(1, {{Word{}, 0.2}, {Word{1}, 0.1}}), Weight::geometric(2.0), 1.0, {}, 1.0, 50};
    HedgeBasis basis;
    basis.integrand_depth = 2;
    basis.residual_window = std::pair<std::size_t, std::size_t>{1, 3};
    const auto ex = simulate_hedge_experiment(p, PayoffSpec::parse("asian:K=1"), basis, n_paths, 5);
    for (auto _ : state) benchmark::DoNotOptimize(gkw_project(ex.payoffs, ex.design, basis));
    state.counters["columns"] = static_cast<double>(ex.design.columns());
}
BENCHMARK(BM_GKWProjection)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_HedgeExperiment(benchmark::State& state) {
    SigVolParams p{DualElement(1, {{Word{}, 0.2}, {Word{1}, 0.1}}), Weight::geometric(2.0), 1.0, {}, 1.0, 50};
    HedgeBasis basis;
    basis.integrand_depth = 2;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_hedge_experiment(p, PayoffSpec::parse("call:K=1"), basis, 2000, 5));
}
BENCHMARK(BM_HedgeExperiment)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
