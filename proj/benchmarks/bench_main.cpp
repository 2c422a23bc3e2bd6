#include <benchmark/benchmark.h>

#include "dfastat/learner.hpp"
#include "dfastat/markov.hpp"
#include "dfastat/sim.hpp"

using namespace dfastat;

static void BM_LearnThird(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(learn(Ratio(1, 3), k).dfa.state_count());
}
BENCHMARK(BM_LearnThird)->Arg(7)->Arg(13)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_LimitingAcceptanceMajority(benchmark::State& state) {
    const Dfa m = build_majority_dfa(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(limiting_acceptance(m, Bernoulli{0.3}).value);
}
BENCHMARK(BM_LimitingAcceptanceMajority)->RangeMultiplier(4)->Range(4, 256);

static void BM_LimitingAcceptanceMarkov(benchmark::State& state) {
    const Dfa m = build_majority_dfa(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(limiting_acceptance(m, MarkovBinary{0.2, 0.4}).value);
}
BENCHMARK(BM_LimitingAcceptanceMarkov)->RangeMultiplier(4)->Range(4, 128);

static void BM_RunTrials(benchmark::State& state) {
    const Dfa m = build_majority_dfa(10);
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_trials(m, Bernoulli{0.6}, 1000, 2000, Seed{1}, {threads}).frequency);
    state.SetItemsProcessed(state.iterations() * 1000 * 2000);
}
BENCHMARK(BM_RunTrials)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
