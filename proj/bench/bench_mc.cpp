// Serial versus OpenMP Monte Carlo on the signature and random-label instances.
#include <benchmark/benchmark.h>

#include "aglab/adversary.hpp"
#include "aglab/eval.hpp"

namespace {

const aglab::Instance& signature() {
    static const aglab::Instance inst = aglab::build_id_lower(6);
    return inst;
}

const aglab::Instance& nfl() {
    static const aglab::Instance inst = aglab::build_gen_nfl(0.25);
    return inst;
}

void identify(benchmark::State& state, bool parallel) {
    const auto model = aglab::id_trial_model(aglab::margin_algorithm(aglab::WindowFn::fourth_root()), signature(), 0);
    const std::vector<std::uint64_t> grid{static_cast<std::uint64_t>(state.range(0))};
    auto bound = [](std::uint64_t) { return 0.0; };
    for (auto _ : state) {
        auto points = parallel ? aglab::mc_rate(model, grid, 2000, 1, bound)
                               : aglab::mc_rate_serial(model, grid, 2000, 1, bound);
        benchmark::DoNotOptimize(points);
    }
}

void generate(benchmark::State& state, bool parallel) {
    const auto model = aglab::gen_trial_model(aglab::witness_generator(), nfl(), aglab::kRandomFamily);
    const std::vector<std::uint64_t> grid{static_cast<std::uint64_t>(state.range(0))};
    auto bound = [](std::uint64_t) { return 0.0; };
    for (auto _ : state) {
        auto points = parallel ? aglab::mc_rate(model, grid, 2000, 1, bound)
                               : aglab::mc_rate_serial(model, grid, 2000, 1, bound);
        benchmark::DoNotOptimize(points);
    }
}

void BM_IdentifySerial(benchmark::State& s) { identify(s, false); }
void BM_IdentifyOpenMP(benchmark::State& s) { identify(s, true); }
void BM_GenerateSerial(benchmark::State& s) { generate(s, false); }
void BM_GenerateOpenMP(benchmark::State& s) { generate(s, true); }

BENCHMARK(BM_IdentifySerial)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IdentifyOpenMP)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateSerial)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateOpenMP)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
