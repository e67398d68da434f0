#include <benchmark/benchmark.h>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "inet/annotate.hpp"
#include "inet/compile.hpp"
#include "inet/corpus.hpp"
#include "inet/parser.hpp"
#include "inet/runtime.hpp"
#include "inet/validate.hpp"

namespace {

inet::CompiledProgram compile_text(const std::string& text, inet::Program* out_program = nullptr) {
    inet::Program program = inet::derive_program(inet::parse_program(text));
    inet::CheckedProgram checked = inet::check(std::move(program));
    if (out_program) *out_program = checked.program;
    return inet::compile_program(checked);
}

void run_net(benchmark::State& state, const std::string& text) {
    inet::Program program;
    inet::CompiledProgram compiled = compile_text(text, &program);
    std::uint64_t interactions = 0;
    for (auto _ : state) {
        inet::RuntimeState rt = inet::build_net(*program.net, compiled);
        inet::reduce(rt, compiled);
        interactions += rt.stats.interactions;
        benchmark::DoNotOptimize(rt.stats.interactions);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(interactions));
    state.SetLabel("interactions/iter=" +
                   std::to_string(interactions / std::max<std::uint64_t>(1, state.iterations())));
}

void BM_Reverse(benchmark::State& state) {
    std::vector<std::int64_t> values(static_cast<std::size_t>(state.range(0)));
    std::iota(values.begin(), values.end(), 1);
    run_net(state, inet::corpus::reverse_program(values));
}
BENCHMARK(BM_Reverse)->Range(8, 4096);

void BM_InsertionSort(benchmark::State& state) {
    std::vector<std::int64_t> values(static_cast<std::size_t>(state.range(0)));
    std::iota(values.begin(), values.end(), 1);
    std::mt19937_64 rng(7);
    std::shuffle(values.begin(), values.end(), rng);
    run_net(state, inet::corpus::insertion_sort_program(values));
}
BENCHMARK(BM_InsertionSort)->Range(8, 512);

void BM_Ackermann(benchmark::State& state) {
    run_net(state, inet::corpus::ackermann_program(static_cast<int>(state.range(0)),
                                                   static_cast<int>(state.range(1))));
}
BENCHMARK(BM_Ackermann)->Args({2, 3})->Args({2, 7})->Args({3, 3});

void BM_DeriveAnnotations(benchmark::State& state) {
    inet::Program program = inet::parse_program(
        inet::corpus::addition_rules() + inet::corpus::ackermann_rules() +
        inet::corpus::insertion_sort_rules() + inet::corpus::reverse_rules());
    for (auto _ : state) {
        inet::Program derived = inet::derive_program(program);
        benchmark::DoNotOptimize(derived.rules.size());
    }
}
BENCHMARK(BM_DeriveAnnotations);

}  // namespace

BENCHMARK_MAIN();
