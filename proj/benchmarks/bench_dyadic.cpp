#include <benchmark/benchmark.h>

#include <random>

#include "qulog/dyadic.hpp"
#include "qulog/local_tower.hpp"

using namespace qulog;

static void BM_dyadic_mul(benchmark::State& state) {
    long bits = state.range(0);
    std::mt19937_64 rng(1);
    mpz_class u = (mpz_class(rng()) << 64) | rng();
    Dyadic a = Dyadic::from_parts(0, u | 1, bits);
    Dyadic b = Dyadic::from_parts(2, (u >> 1) | 1, bits);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_dyadic_mul)->Arg(128)->Arg(512)->Arg(2048);

static void BM_sqrt_2adic(benchmark::State& state) {
    long bits = state.range(0);
    mpz_class n = 17;
    Dyadic a = Dyadic::from_parts(0, n, bits);
    for (auto _ : state) benchmark::DoNotOptimize(sqrt_2adic(a));
}
BENCHMARK(BM_sqrt_2adic)->Arg(128)->Arg(512)->Arg(2048);

static void BM_tower_mul(benchmark::State& state) {
    LocalTower T(state.range(0), 256);
    std::mt19937_64 rng(2);
    TowerElement x = T.one(), y = T.alpha();
    for (int i = 0; i < 4; ++i) {
        if (T.case_tag() != CaseTag::q3mod8 && (i == 1 || i == 3)) continue;
        x.c[i] = mpz_class(rng()) % T.modulus();
        y.c[i] = mpz_class(rng()) % T.modulus();
    }
    for (auto _ : state) benchmark::DoNotOptimize(T.mul(x, y));
}
BENCHMARK(BM_tower_mul)->Arg(11)->Arg(7);

static void BM_tower_log(benchmark::State& state) {
    LocalTower T(state.range(0), 256);
    TowerElement w = T.add(T.one(), T.uniformizer());
    for (auto _ : state) benchmark::DoNotOptimize(T.log(w));
}
BENCHMARK(BM_tower_log)->Arg(11)->Arg(7)->Arg(47);

BENCHMARK_MAIN();
