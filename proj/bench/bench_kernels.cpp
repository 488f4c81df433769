// Serial reference vs OpenMP kernels on the RTS-24 reconstruction.

#include <benchmark/benchmark.h>

#include "gridsched/case_model.hpp"
#include "gridsched/experiments.hpp"
#include "gridsched/formulation.hpp"
#include "gridsched/verifier.hpp"

#ifndef GRIDSCHED_DATA_DIR
#define GRIDSCHED_DATA_DIR "data"
#endif

namespace {

using namespace gridsched;

const SystemCase& rts() {
    static const SystemCase sc = load_case_file(GRIDSCHED_DATA_DIR "/rts24.json");
    return sc;
}

void BM_ContingencyRows(benchmark::State& state) {
    const auto execution = static_cast<Execution>(state.range(0));
    const auto variant = ModelVariant::tg_scuc_cdr;
    const ContingencySet ctgs = contingencies_for(rts(), variant);
    const VariableIndex ix = index_variables(rts(), ctgs, variant);
    for (auto _ : state) {
        auto rows = build_contingency_constraints(rts(), ctgs, ix, variant, execution);
        benchmark::DoNotOptimize(rows.data());
    }
}

void BM_CheckSolution(benchmark::State& state) {
    const auto execution = static_cast<Execution>(state.range(0));
    const auto variant = ModelVariant::tg_scuc_cdr;
    const ContingencySet ctgs = contingencies_for(rts(), variant);
    const ScheduleSolution zero = empty_schedule(rts(), ctgs, variant);
    CheckOptions options;
    options.execution = execution;
    for (auto _ : state) {
        auto report = check_solution(rts(), ctgs, variant, zero, options);
        benchmark::DoNotOptimize(report.violations.data());
    }
}

}  // namespace

// Argument 0 = serial, 1 = parallel.
BENCHMARK(BM_ContingencyRows)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckSolution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
