#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "driftlab/press.hpp"
#include "driftlab/seed_detector.hpp"
#include "driftlab/stats.hpp"
#include "driftlab/streamgen.hpp"

namespace {

std::vector<double> noisy_stream(std::size_t n) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> xs(n);
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 640 == 0) mu = mu == 0.0 ? 2.0 : 0.0;
        xs[i] = mu + noise(rng);
    }
    return xs;
}

void BM_SeedObserve(benchmark::State& state) {
    const auto xs = noisy_stream(1 << 16);
    for (auto _ : state) {
        driftlab::SeedDetector detector({.block_size = 32, .delta = 0.25});
        std::size_t drifts = 0;
        for (double x : xs)
            if (detector.observe(x)) ++drifts;
        benchmark::DoNotOptimize(drifts);
    }
    state.SetItemsProcessed(state.iterations() * xs.size());
}
BENCHMARK(BM_SeedObserve);

void BM_PressObserve(benchmark::State& state) {
    const auto xs = noisy_stream(1 << 16);
    for (auto _ : state) {
        driftlab::PressConfig config;
        config.seed.delta = 0.25;
        config.rng_seed = 3;
        driftlab::PressDetector detector(config);
        std::size_t events = 0;
        for (double x : xs) events += detector.observe(x).size();
        benchmark::DoNotOptimize(events);
    }
    state.SetItemsProcessed(state.iterations() * xs.size());
}
BENCHMARK(BM_PressObserve);

void BM_KsStatistic(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    std::vector<double> a(state.range(0)), b(state.range(0));
    for (auto& x : a) x = val(rng);
    for (auto& x : b) x = val(rng);
    for (auto _ : state) benchmark::DoNotOptimize(driftlab::ks_statistic(a, b));
}
BENCHMARK(BM_KsStatistic)->Arg(32)->Arg(100)->Arg(1024);

void BM_ReservoirOffer(benchmark::State& state) {
    std::mt19937_64 rng(9);
    driftlab::Reservoir reservoir(100);
    double x = 0.0;
    for (auto _ : state) {
        reservoir.offer(x, rng);
        x += 1.0;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ReservoirOffer);

void BM_Generate(benchmark::State& state) {
    auto spec = driftlab::paper_preset("abrupt10", 0.1);
    spec.seed = 11;
    for (auto _ : state) {
        const auto stream = driftlab::generate(spec);
        benchmark::DoNotOptimize(stream.values.data());
    }
    state.SetItemsProcessed(state.iterations() * spec.total_instances);
}
BENCHMARK(BM_Generate);

}  // namespace

BENCHMARK_MAIN();
