#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "mbtg/coverage.hpp"
#include "mbtg/frontend.hpp"
#include "mbtg/semantics.hpp"
#include "mbtg/solver.hpp"
#include "mbtg/tracing.hpp"

using namespace mbtg;

namespace {

const Model& corpus() {
    static Model m = [] {
        std::ifstream in(std::string(MBTG_MODEL_DIR) + "/turn_indicator.mbt");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_model(ss.str(), "turn_indicator.mbt");
    }();
    return m;
}

void bench_parse(benchmark::State& state) {
    std::ifstream in(std::string(MBTG_MODEL_DIR) + "/turn_indicator.mbt");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    for (auto _ : state) benchmark::DoNotOptimize(parse_model(text, "turn_indicator.mbt"));
}
BENCHMARK(bench_parse);

void bench_reactive_run(benchmark::State& state) {
    const Model& m = corpus();
    Stimulus s;
    s.time = 0;
    s.inputs[m.var_index("EmerFlash")] = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_reactive(m, {s}, 10000).trace.size());
}
BENCHMARK(bench_reactive_run);

void bench_gen_all(benchmark::State& state) {
    const Model& m = corpus();
    for (auto _ : state) benchmark::DoNotOptimize(gen_all(m).size());
}
BENCHMARK(bench_gen_all);

void bench_solve_reach(benchmark::State& state) {
    const Model& m = corpus();
    Expr goal = parse_state_formula("OFF && elapsed(OFF) >= 320", m);
    for (auto _ : state) {
        Solver solver(m, SolverConfig{});  // cold cache each iteration
        benchmark::DoNotOptimize(solver.solve_reach(goal).status);
    }
}
BENCHMARK(bench_solve_reach);

void bench_solve_requirements(benchmark::State& state) {
    const Model& m = corpus();
    for (auto _ : state) {
        Solver solver(m, SolverConfig{});
        for (const Requirement& req : m.requirements)
            benchmark::DoNotOptimize(solver.solve(characterize(req, m)).status);
    }
}
BENCHMARK(bench_solve_requirements);

}  // namespace

BENCHMARK_MAIN();
