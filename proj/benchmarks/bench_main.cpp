#include "hoarith/alpha.hpp"
#include "hoarith/coding.hpp"
#include "hoarith/eval.hpp"
#include "hoarith/hierarchy.hpp"
#include "hoarith/parse.hpp"
#include "hoarith/program.hpp"
#include "hoarith/xrec.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace hoarith;

void BM_Pair(benchmark::State& state) {
    Nat x = 123456, y = 654321;
    for (auto _ : state) {
        auto z = pair(x, y);
        benchmark::DoNotOptimize(split(z));
    }
}
BENCHMARK(BM_Pair);

void BM_SeqEncode(benchmark::State& state) {
    std::vector<Nat> xs;
    for (std::int64_t i = 0; i < state.range(0); ++i) xs.emplace_back(static_cast<unsigned>(i * 7 % 13));
    for (auto _ : state) benchmark::DoNotOptimize(seq_encode(xs));
}
BENCHMARK(BM_SeqEncode)->RangeMultiplier(2)->Range(2, 32);

void BM_ParseFormula(benchmark::State& state) {
    const char* text = "forall x < 20. exists y < x + 1. (y * y < x + 1 /\\ x < (y + 1) * (y + 1))";
    for (auto _ : state) benchmark::DoNotOptimize(parse_formula(text));
}
BENCHMARK(BM_ParseFormula);

// Fully bounded formula: cost grows quadratically in the outer bound.
void BM_EvalBounded(benchmark::State& state) {
    auto f = parse_formula("forall x < n. exists y < x + 1. (y * y < x + 1 /\\ x < (y + 1) * (y + 1))");
    VarAssignment v{{"n", Nat(static_cast<unsigned>(state.range(0)))}};
    for (auto _ : state) benchmark::DoNotOptimize(eval_formula(f, v));
}
BENCHMARK(BM_EvalBounded)->RangeMultiplier(2)->Range(8, 128);

void BM_EvalUnbounded(benchmark::State& state) {
    auto f = parse_formula("forall u. exists v. u < v");
    Budget b;
    b.q_bound = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(eval_formula(f, {}, b));
}
BENCHMARK(BM_EvalUnbounded)->RangeMultiplier(4)->Range(4, 256);

void BM_RunCountingLoop(benchmark::State& state) {
    auto p = parse_program("y := 0; while y < x do y := y + 1 od");
    ProgState in({"x", "y"}, {Nat(static_cast<unsigned>(state.range(0))), Nat(0u)});
    for (auto _ : state) benchmark::DoNotOptimize(run(p, in, 1u << 30));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RunCountingLoop)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity(benchmark::oN);

void BM_ClassifyPrenex(benchmark::State& state) {
    auto f = parse_formula("forall u. ((exists v. v = u) \\/ (forall w. exists t. w < t)) /\\ exists s. s = u");
    for (auto _ : state) benchmark::DoNotOptimize(prenexify(f));
}
BENCHMARK(BM_ClassifyPrenex);

void BM_InstantiateAlpha(benchmark::State& state) {
    auto p = parse_program("y := 0; while y < x do y := y + 1 od");
    ProgState in({"x", "y"}, {Nat(static_cast<unsigned>(state.range(0))), Nat(0u)});
    for (auto _ : state) {
        auto f = instantiate_alpha(p, in, 1u << 20);
        benchmark::DoNotOptimize(eval_formula(*f, {}));
    }
}
BENCHMARK(BM_InstantiateAlpha)->DenseRange(0, 4);

void BM_XrecMonus(benchmark::State& state) {
    auto h = stdlib("monus");
    std::vector<Nat> args{Nat(static_cast<unsigned>(state.range(0))), Nat(3u)};
    for (auto _ : state) benchmark::DoNotOptimize(xrec_eval(h, args, 1u << 30));
}
BENCHMARK(BM_XrecMonus)->RangeMultiplier(4)->Range(4, 256);

}  // namespace
BENCHMARK_MAIN();
