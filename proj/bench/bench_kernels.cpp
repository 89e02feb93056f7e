#include <benchmark/benchmark.h>

#include "surveil/a2a_channel.hpp"
#include "surveil/kernels.hpp"

using namespace surveil;

namespace {

A2AScenario scenario() {
    A2AScenario s;
    s.density = 40.0 / s.box.volume();
    return s;
}

const Vec3 kCentral{0.0, 0.0, 2250.0};

void BM_ThetaSerial(benchmark::State& state) {
    const auto s = scenario();
    const RadialProfile profile(2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::theta_serial(s.box, kCentral, profile, 1e6,
                                                       static_cast<std::size_t>(state.range(0))));
}

void BM_ThetaParallel(benchmark::State& state) {
    const auto s = scenario();
    const RadialProfile profile(2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::theta_parallel(s.box, kCentral, profile, 1e6,
                                                         static_cast<std::size_t>(state.range(0))));
}

void BM_CoverageSerial(benchmark::State& state) {
    const auto s = scenario();
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::coverage_hits_serial(
            s, kCentral, static_cast<std::size_t>(state.range(0)), 7, GeometryMode::sphere_law));
}

void BM_CoverageParallel(benchmark::State& state) {
    const auto s = scenario();
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::coverage_hits_parallel(
            s, kCentral, static_cast<std::size_t>(state.range(0)), 7, GeometryMode::sphere_law));
}

}  // namespace

BENCHMARK(BM_ThetaSerial)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThetaParallel)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverageSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverageParallel)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
