#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "inet/annotate.hpp"
#include "inet/compile.hpp"
#include "inet/corpus.hpp"
#include "inet/parser.hpp"
#include "inet/printer.hpp"
#include "inet/runtime.hpp"
#include "inet/validate.hpp"

using namespace inet;

namespace {

struct RunResult {
    FinalKind outcome = FinalKind::NormalForm;
    Stats stats;
    std::string readback_text;
};

RunResult run_program(const std::string& text, bool derive = true) {
    Program program = parse_program(text);
    if (derive) program = derive_program(program);
    CheckedProgram checked = check(std::move(program));
    CompiledProgram compiled = compile_program(checked);
    REQUIRE(checked.program.net);
    RuntimeState state = build_net(*checked.program.net, compiled);
    RunResult out;
    out.outcome = reduce(state, compiled);
    out.stats = state.stats;
    out.readback_text = render_readback(readback(state, compiled), compiled.symbols);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "cannot open ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::int64_t ack(std::int64_t m, std::int64_t n) {
    if (m == 0) return n + 1;
    if (n == 0) return ack(m - 1, 1);
    return ack(m - 1, ack(m, n - 1));
}

}  // namespace

TEST_CASE("checked-in corpus files match the canonical sources") {
    const std::pair<const char*, std::string> entries[] = {
        {"add.inet", corpus::addition_program(1, 0)},
        {"ackermann.inet", corpus::ackermann_program(2, 2)},
        {"isort.inet", corpus::insertion_sort_program(std::vector<std::int64_t>{2, 4, 1, 3})},
        {"reverse.inet", corpus::reverse_program(std::vector<std::int64_t>{1, 2, 3, 4})},
    };
    for (const auto& [file, source] : entries) {
        Program from_file = parse_program(read_file(std::string(INET_CORPUS_DIR) + "/" + file));
        CHECK(validate(from_file).empty());
        CHECK(render(from_file) == render(parse_program(source)));
    }
}

TEST_CASE("addition reduces to the unary sum") {
    SUBCASE("worked example add(1, 0)") {
        RunResult r = run_program(corpus::addition_program(1, 0));
        CHECK(r.outcome == FinalKind::NormalForm);
        CHECK(r.readback_text == "r = S(Z)\n");
        CHECK(r.stats.interactions == 2);
        CHECK(r.stats.agent_allocs == 0);
    }
    SUBCASE("base case add(0, 0)") {
        RunResult r = run_program(corpus::addition_program(0, 0));
        CHECK(r.readback_text == "r = Z\n");
        CHECK(r.stats.interactions == 1);
    }
    SUBCASE("add(2, 1)") {
        RunResult r = run_program(corpus::addition_program(2, 1));
        CHECK(r.readback_text == "r = " + corpus::unary(3) + "\n");
        CHECK(r.stats.interactions == 3);
    }
    SUBCASE("interactions = m + 1 against the unary oracle") {
        for (int m = 0; m <= 6; ++m) {
            for (int n = 0; n <= 4; n += 2) {
                RunResult r = run_program(corpus::addition_program(m, n));
                CHECK(r.readback_text == "r = " + corpus::unary(m + n) + "\n");
                CHECK(r.stats.interactions == static_cast<std::uint64_t>(m + 1));
                CHECK(r.stats.agent_allocs == 0);
            }
        }
    }
}

TEST_CASE("ackermann matches the recursive oracle") {
    SUBCASE("base case ack(0, 0)") {
        RunResult r = run_program(corpus::ackermann_program(0, 0));
        CHECK(r.readback_text == "r = S(Z)\n");
    }
    SUBCASE("ack(1, 1)") {
        RunResult r = run_program(corpus::ackermann_program(1, 1));
        CHECK(r.readback_text == "r = " + corpus::unary(3) + "\n");
    }
    SUBCASE("ack(2, 2)") {
        RunResult r = run_program(corpus::ackermann_program(2, 2));
        CHECK(r.readback_text == "r = " + corpus::unary(7) + "\n");
    }
    SUBCASE("all small instances") {
        for (int m = 0; m <= 2; ++m) {
            for (int n = 0; n <= 3; ++n) {
                RunResult r = run_program(corpus::ackermann_program(m, n));
                CHECK(r.outcome == FinalKind::NormalForm);
                CHECK(r.readback_text ==
                      "r = " + corpus::unary(static_cast<int>(ack(m, n))) + "\n");
            }
        }
    }
}

TEST_CASE("insertion sort sorts and runs in place") {
    SUBCASE("the worked 2,4,1,3 example") {
        RunResult r = run_program(
            corpus::insertion_sort_program(std::vector<std::int64_t>{2, 4, 1, 3}));
        CHECK(r.readback_text ==
              "r = Cons{1}(Cons{2}(Cons{3}(Cons{4}(Nil))))\n");
        CHECK(r.stats.agent_allocs == 0);
        CHECK(r.stats.agent_frees == 1);  // only IS><Nil frees, exactly once
    }
    SUBCASE("the empty list") {
        RunResult r = run_program(corpus::insertion_sort_program({}));
        CHECK(r.readback_text == "r = Nil\n");
        CHECK(r.stats.interactions == 1);
    }
    SUBCASE("random lists against the sorting oracle") {
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<std::int64_t> value(-20, 20);
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<std::int64_t> values(rng() % 9);
            for (auto& v : values) v = value(rng);
            RunResult r = run_program(corpus::insertion_sort_program(values));
            std::vector<std::int64_t> sorted = values;
            std::sort(sorted.begin(), sorted.end());
            CHECK(r.readback_text == "r = " + corpus::int_list(sorted) + "\n");
            CHECK(r.stats.agent_allocs == 0);
        }
    }
}

TEST_CASE("reverse runs in five interactions on four elements") {
    SUBCASE("the worked example") {
        RunResult r = run_program(corpus::reverse_program(std::vector<std::int64_t>{1, 2, 3, 4}));
        CHECK(r.readback_text == "r = Cons{4}(Cons{3}(Cons{2}(Cons{1}(Nil))))\n");
        CHECK(r.stats.interactions == 5);
        CHECK(r.stats.agent_allocs == 0);
        CHECK(r.stats.agent_frees == 2);
    }
    SUBCASE("the empty list") {
        RunResult r = run_program(corpus::reverse_program({}));
        CHECK(r.readback_text == "r = Nil\n");
        CHECK(r.stats.interactions == 1);
    }
    SUBCASE("reverse of reverse is the identity") {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::int64_t> values(rng() % 12);
            for (auto& v : values) v = static_cast<std::int64_t>(rng() % 100);
            std::vector<std::int64_t> reversed = values;
            std::reverse(reversed.begin(), reversed.end());
            RunResult once = run_program(corpus::reverse_program(values));
            CHECK(once.readback_text == "r = " + corpus::int_list(reversed) + "\n");
            RunResult twice = run_program(corpus::reverse_program(reversed));
            CHECK(twice.readback_text == "r = " + corpus::int_list(values) + "\n");
        }
    }
    SUBCASE("interactions = length + 1") {
        for (std::size_t n : {0u, 1u, 5u, 9u}) {
            std::vector<std::int64_t> values(n, 7);
            RunResult r = run_program(corpus::reverse_program(values));
            CHECK(r.stats.interactions == n + 1);
        }
    }
}

TEST_CASE("every corpus file reduces to normal form under defaults") {
    for (const char* file : {"add.inet", "ackermann.inet", "isort.inet", "reverse.inet"}) {
        RunResult r = run_program(read_file(std::string(INET_CORPUS_DIR) + "/" + file));
        CHECK(r.outcome == FinalKind::NormalForm);
    }
}
