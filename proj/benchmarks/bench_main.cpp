#include <ssaid/ensemble.hpp>
#include <ssaid/isolate_detect.hpp>
#include <ssaid/simulate.hpp>
#include <ssaid/ssa.hpp>

#include <benchmark/benchmark.h>

namespace {

ssaid::TimeSeries noisy_signal(std::size_t length, double level) {
    ssaid::sim::SseSignalSpec spec;
    spec.length = length;
    spec.n_events = length / 74;
    const auto clean = ssaid::sim::generate_sse_like(spec);
    return ssaid::sim::add_noise(clean.signal, {level, 7});
}

void BM_IdDetect(benchmark::State& state) {
    const auto x = noisy_signal(static_cast<std::size_t>(state.range(0)), 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssaid::id::detect(x));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IdDetect)->Arg(180)->Arg(365)->Arg(730)->Arg(1460)->Complexity();

void BM_SsaDecompose(benchmark::State& state) {
    const auto x = noisy_signal(static_cast<std::size_t>(state.range(0)), 0.4);
    ssaid::ssa::SsaConfig cfg;
    cfg.num_components = 20;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssaid::ssa::decompose(x, cfg));
    }
}
BENCHMARK(BM_SsaDecompose)->Arg(365)->Arg(730)->Arg(1460)->Unit(benchmark::kMicrosecond);

void BM_RunGroup(benchmark::State& state) {
    const auto x = noisy_signal(365, 0.1);
    const ssaid::NoiseStream noise{11, 5, 3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssaid::run_group(x, 0.3, 30, noise, {}));
    }
}
BENCHMARK(BM_RunGroup)->Unit(benchmark::kMillisecond);

void BM_SsaidDesk(benchmark::State& state) {
    const auto x = noisy_signal(365, 0.15);
    auto cfg = ssaid::SsaidConfig::desk();
    cfg.seed = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssaid::detect(x, cfg));
    }
}
BENCHMARK(BM_SsaidDesk)->Unit(benchmark::kMillisecond)->Iterations(2);

} // namespace
BENCHMARK_MAIN();
