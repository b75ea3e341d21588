#include <vector>

#include "benchmark/benchmark.h"

#include "fortsim/dynamics.hpp"
#include "fortsim/experiments.hpp"
#include "fortsim/fitting.hpp"
#include "fortsim/lambda_system.hpp"
#include "fortsim/pulse_sequence.hpp"

using namespace fortsim;

namespace {

constexpr double kOmega = kTwoPi * 1.36e6;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

void BM_propagate(benchmark::State& state) {
    double t = 1e-7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(propagate(QubitState::ground(), kOmega, 1e4, 0.0, t));
        t += 1e-12;
    }
}
BENCHMARK(BM_propagate);

void BM_ramsey_sequence(benchmark::State& state) {
    const auto seq = ramsey_sequence(kOmega, kTwoPi * 3e3, 300e-6, false);
    for (auto _ : state) benchmark::DoNotOptimize(run_sequence(QubitState::ground(), seq));
}
BENCHMARK(BM_ramsey_sequence);

void BM_lambda_pi_pulse(benchmark::State& state) {
    const double w = kTwoPi * 100e6;
    const RamanDrive d(w, w, kTwoPi * 41e9);
    const double t = kPi / std::abs(d.two_photon_rabi());
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambda_propagate(LambdaState{}, d, t, lambda_default_step(d)));
    }
}
BENCHMARK(BM_lambda_pi_pulse)->Unit(benchmark::kMillisecond);

void BM_fit_rabi(benchmark::State& state) {
    ScanConfig cfg;
    cfg.grid = linspace(0.0, 1.5e-6, 40);
    const auto data = run_rabi_scan(cfg);
    for (auto _ : state) benchmark::DoNotOptimize(fit_sinusoid(data, SinusoidModel::rabi));
}
BENCHMARK(BM_fit_rabi)->Unit(benchmark::kMicrosecond);

void BM_rabi_scan(benchmark::State& state) {
    ScanConfig cfg;
    cfg.grid = linspace(0.0, 1.5e-6, 40);
    cfg.shots_per_point = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_rabi_scan(cfg));
}
BENCHMARK(BM_rabi_scan)->Arg(12)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_contrast_decay(benchmark::State& state) {
    ScanConfig cfg;
    const std::vector<double> gaps{100e-6, 300e-6, 1e-3, 3e-3};
    for (auto _ : state) benchmark::DoNotOptimize(run_contrast_decay(cfg, gaps));
}
BENCHMARK(BM_contrast_decay)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
