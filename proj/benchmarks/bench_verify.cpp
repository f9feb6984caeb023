#include <benchmark/benchmark.h>

#include "qulog/unit_engine.hpp"
#include "qulog/verifier.hpp"

using namespace qulog;

static void BM_solve_gamma(benchmark::State& state) {
    long q = state.range(0);
    NumberField N(q);
    LocalTower T(q, 128);
    unsigned long m = odd_generator_exponent(q, T);
    KElem pi = generator_of_p_power(q, m, N, T);
    double H = std::log(1024.0) + 0.25 * std::log(double(q));
    for (auto _ : state) benchmark::DoNotOptimize(solve_gamma(N, T, m, pi, H));
}
BENCHMARK(BM_solve_gamma)->Arg(19)->Arg(43)->Unit(benchmark::kMillisecond);

static void BM_verify_theorem(benchmark::State& state) {
    long q = state.range(0);
    VerifyOptions opts = VerifyOptions::defaults();
    for (auto _ : state) benchmark::DoNotOptimize(verify_theorem(q, opts));
}
BENCHMARK(BM_verify_theorem)->Arg(7)->Arg(11)->Arg(31)->Unit(benchmark::kMillisecond);

static void BM_corollary_check(benchmark::State& state) {
    long q = state.range(0);
    NumberField N(q);
    LocalTower T(q, 128);
    UnitCertificate cert;
    VerifyOptions opts = VerifyOptions::defaults();
    verify_theorem(q, opts, &cert);
    for (auto _ : state) benchmark::DoNotOptimize(corollary_check(N, T, cert));
}
BENCHMARK(BM_corollary_check)->Arg(11)->Arg(43)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
