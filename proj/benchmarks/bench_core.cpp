#include <benchmark/benchmark.h>

#include "weakpar/weakpar.hpp"

namespace {

using namespace weakpar;

TruthTable random_table(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return TruthTable::from_function(n, [&](InputWord) { return coin(rng); });
}

void BM_degree_mobius(benchmark::State& state) {
    const auto f = random_table(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(degree_mobius(f));
}
BENCHMARK(BM_degree_mobius)->DenseRange(8, 20, 4);

void BM_degree_subcube(benchmark::State& state) {
    const auto f = random_table(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(degree_subcube(f));
}
BENCHMARK(BM_degree_subcube)->DenseRange(6, 12, 2);

void BM_exact_D(benchmark::State& state) {
    const auto f = random_table(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(exact_D(f).depth);
}
BENCHMARK(BM_exact_D)->DenseRange(4, 10, 2);

void BM_lambda_exact(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lambda_exact(n).value);
}
BENCHMARK(BM_lambda_exact)->DenseRange(2, 4, 1)->Unit(benchmark::kMillisecond);

void BM_worst_case_table(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(andor::worst_case_table(d).two_level_ratio(d - 2));
}
BENCHMARK(BM_worst_case_table)->Arg(24)->Arg(64);

void BM_grover_or_exact(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(qsim::grover_or_exact(n, 1).success_probability);
}
BENCHMARK(BM_grover_or_exact)->RangeMultiplier(4)->Range(4, 64);

void BM_verify_weak(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto g = build_guesser(schedule_for(n, pow2(-4), Flavor::kOr));
    for (auto _ : state) benchmark::DoNotOptimize(verify_weak(g, pow2(-4)).success_count);
}
BENCHMARK(BM_verify_weak)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
