#include <benchmark/benchmark.h>

#include "hypecurve/analysis.hpp"
#include "hypecurve/fit.hpp"
#include "hypecurve/model.hpp"
#include "hypecurve/synth.hpp"

namespace {

using namespace hypecurve;

const HypeParams truth{{8000, 0.45, 2004}, {2.5, 5}};

void BM_HypeRate(benchmark::State& state) {
    double t = 1990;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hype(t, truth));
        t = t < 2030 ? t + 0.37 : 1990;
    }
}
BENCHMARK(BM_HypeRate);

void BM_PatentBin(benchmark::State& state) {
    int y = 1988;
    for (auto _ : state) {
        benchmark::DoNotOptimize(patent_bin(y, truth));
        y = y < 2025 ? y + 1 : 1988;
    }
}
BENCHMARK(BM_PatentBin);

void BM_FitJoint(benchmark::State& state) {
    const auto g = generate(truth, 1988, 2025, {NoiseKind::poisson, 0, 1});
    FitConfig cfg;
    cfg.starts = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fit_joint(g.publications, g.patents, cfg));
}
BENCHMARK(BM_FitJoint)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_DetectDip(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(detect_dip(truth));
}
BENCHMARK(BM_DetectDip)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
