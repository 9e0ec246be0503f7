// Serial reference against the OpenMP path for the hot kernels.
#include <benchmark/benchmark.h>

#include "krylov/models.hpp"

using namespace krylov;

namespace {

ModelSpec damped_spin() {
    ModelSpec s;
    s.family = Family::SU2Damped;
    s.params = {{"j", 5}, {"omega0", 4}, {"omega", 2}, {"b0", 5}, {"eta", 0.09}};
    return s;
}

ModelSpec pumping() {
    ModelSpec s;
    s.family = Family::SU11TwoMode;
    s.params = {{"omega0", 4}, {"omega", 2}, {"g", 1}};
    return s;
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_ClosedForm(benchmark::State& state) {
    const auto t = linear_grid(0.0, 60.0, 4001);
    const ModelSpec s = damped_spin();
    for (auto _ : state) benchmark::DoNotOptimize(closed_form_complexity(s, t, exec_of(state)));
}

void BM_Numeric(benchmark::State& state) {
    const auto t = linear_grid(0.0, 60.0, 1001);
    const ModelSpec s = damped_spin();
    for (auto _ : state) benchmark::DoNotOptimize(numeric_complexity(s, t, 1e-12, exec_of(state)));
}

void BM_Sweep(benchmark::State& state) {
    const auto t = linear_grid(0.0, 5.0, 101);
    RunOptions opt;
    opt.exec = exec_of(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(pumping(), {"g", 0, 3, 31}, {"delta", 0, 3, 31}, t, SweepStat::CMax, opt));
    }
}

}  // namespace

BENCHMARK(BM_ClosedForm)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Numeric)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
