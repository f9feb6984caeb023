#include <benchmark/benchmark.h>

#include "qulog/class_group.hpp"

using namespace qulog;

static void BM_reduced_forms(benchmark::State& state) {
    long q = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(reduced_forms(q));
}
BENCHMARK(BM_reduced_forms)->Arg(47)->Arg(479)->Arg(4079);

static void BM_compose(benchmark::State& state) {
    long q = state.range(0);
    auto forms = reduced_forms(q);
    const FormClass& f = forms[forms.size() / 2];
    const FormClass& g = forms[forms.size() - 1];
    for (auto _ : state) benchmark::DoNotOptimize(compose(f, g));
}
BENCHMARK(BM_compose)->Arg(479)->Arg(4079);

static void BM_generator_of_p_power(benchmark::State& state) {
    long q = state.range(0);
    NumberField N(q);
    LocalTower T(q, 128);
    unsigned long m = odd_generator_exponent(q, T);
    for (auto _ : state) benchmark::DoNotOptimize(generator_of_p_power(q, m, N, T));
}
BENCHMARK(BM_generator_of_p_power)->Arg(47)->Arg(167);

BENCHMARK_MAIN();
