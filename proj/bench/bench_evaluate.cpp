// Serial reference vs OpenMP evaluation of every DMU, and the grid oracle.

#include <benchmark/benchmark.h>

#include "kam/kam_core.hpp"
#include "kam/oracle.hpp"

namespace {

kam::KamConfig bench_config() {
    kam::KamConfig cfg;
    cfg.epsilon = kam::EpsilonPolicy::proportional(0.001);
    cfg.weights = kam::WeightPolicy::inverse_data();
    return cfg;
}

void BM_EvaluateAll(benchmark::State &state, kam::Execution exec) {
    const auto d = kam::oracle::random_instance(2014, static_cast<std::size_t>(state.range(0)),
                                                static_cast<std::size_t>(state.range(1)),
                                                static_cast<std::size_t>(state.range(2)));
    const auto cfg = bench_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kam::evaluate_all(d, cfg, exec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GridOracle(benchmark::State &state, kam::Execution exec) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto d = kam::oracle::random_instance(7, n, 2, 2);
    const auto cfg = bench_config();
    const auto eps = kam::resolve_epsilon(cfg.epsilon, d, 0);
    const auto w = kam::resolve_weights(cfg.weights, d, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kam::oracle::oracle_evaluate(d, 0, eps, w, kam::oracle::default_resolution(n), exec));
    }
}

} // namespace

BENCHMARK_CAPTURE(BM_EvaluateAll, serial, kam::Execution::Serial)
    ->Args({32, 20, 25})
    ->Args({200, 3, 3})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EvaluateAll, parallel, kam::Execution::Parallel)
    ->Args({32, 20, 25})
    ->Args({200, 3, 3})
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GridOracle, serial, kam::Execution::Serial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GridOracle, parallel, kam::Execution::Parallel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
