// Serial reference replica loop against the OpenMP fan-out, on the same
// streams. Both produce the same report; only the wall time differs.

#include <benchmark/benchmark.h>

#include "frostree/montecarlo_stats.hpp"

using namespace frostree;

namespace {

const ChoiceSequence& rrt_seq() {
    static const ChoiceSequence s = repeat(Step::Attach, 1000);
    return s;
}

const ChoiceSequence& mixed_seq() {
    static const ChoiceSequence s = parse_sequence("+^300(-+)^200-^100+^200");
    return s;
}

void BM_Serial(benchmark::State& state, const ChoiceSequence& (*seq)(), Construction c) {
    const auto replicas = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_mc_serial(seq(), replicas, 1, c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Parallel(benchmark::State& state, const ChoiceSequence& (*seq)(), Construction c) {
    const auto replicas = static_cast<std::uint64_t>(state.range(0));
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(run_mc(seq(), replicas, 1, threads, c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Serial, rrt_forward, rrt_seq, Construction::Forward)->Arg(10'000)->UseRealTime();
BENCHMARK_CAPTURE(BM_Parallel, rrt_forward, rrt_seq, Construction::Forward)
    ->ArgsProduct({{10'000}, {1, 2, 4, 8}})
    ->UseRealTime();
BENCHMARK_CAPTURE(BM_Serial, mixed_reverse, mixed_seq, Construction::Reverse)->Arg(2'000)->UseRealTime();
BENCHMARK_CAPTURE(BM_Parallel, mixed_reverse, mixed_seq, Construction::Reverse)
    ->ArgsProduct({{2'000}, {1, 2, 4, 8}})
    ->UseRealTime();

BENCHMARK_MAIN();
