#include <map>
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

struct Loaded {
    Program program;
    CompiledProgram compiled;
    RuntimeState state;
};

Loaded load(const std::string& text, bool derive = true) {
    Loaded out;
    out.program = parse_program(text);
    if (derive) out.program = derive_program(out.program);
    CheckedProgram checked = check(out.program);
    out.compiled = compile_program(checked);
    REQUIRE(out.program.net);
    out.state = build_net(*out.program.net, out.compiled);
    return out;
}

std::string run_readback(const std::string& text) {
    Loaded l = load(text);
    reduce(l.state, l.compiled);
    return render_readback(readback(l.state, l.compiled), l.compiled.symbols);
}

// Reference evaluator, independent of the rule compiler: fires rules by
// copying the RHS with a fresh variable cell for every rule name, then pushes
// one equation per copied RHS equation and one per LHS parameter binding.
struct NaiveEvaluator {
    Program program;  // annotations stripped; instruction path never consulted
    CompiledProgram compiled;
    RuntimeState st;
    std::uint64_t interactions = 0;
    std::uint64_t blocked = 0;
    int fresh = 0;

    explicit NaiveEvaluator(const std::string& text) {
        program = strip_program(parse_program(text));
        CheckedProgram checked = check(program);
        compiled = compile_program(checked);
        st = build_net(*program.net, compiled);
    }

    std::int64_t attr_value(const AttrExpr& e, const Rule& rule, std::int64_t la,
                            std::int64_t ra) const {
        if (e.is_literal()) return e.value;
        return rule.left.attr_var == e.var ? la : ra;
    }

    void apply(const Rule& rule, std::int32_t lc, std::int32_t rc) {
        const std::int64_t la = st.cells[static_cast<std::size_t>(lc)].attr;
        const std::int64_t ra = st.cells[static_cast<std::size_t>(rc)].attr;
        std::vector<Ref> lports(rule.left.params.size());
        std::vector<Ref> rports(rule.right.params.size());
        for (std::size_t i = 0; i < lports.size(); ++i) {
            lports[i] = st.cells[static_cast<std::size_t>(lc)].slots[i];
        }
        for (std::size_t i = 0; i < rports.size(); ++i) {
            rports[i] = st.cells[static_cast<std::size_t>(rc)].slots[i];
        }
        st.free_cell(lc);
        st.free_cell(rc);

        std::map<std::string, std::int32_t> vars;
        auto var_ref = [&](const std::string& name) -> Ref {
            auto it = vars.find(name);
            if (it == vars.end()) {
                std::int32_t id = static_cast<std::int32_t>(st.var_names.size());
                st.var_names.push_back("_" + std::to_string(fresh++));
                it = vars.emplace(name, st.alloc_var(id)).first;
            }
            return Ref{it->second, 0};
        };
        std::function<Ref(const Term&)> build = [&](const Term& t) -> Ref {
            if (t.is_name()) return var_ref(t.name);
            std::int32_t idx = st.alloc_agent(t.sym);
            if (t.attr) {
                st.cells[static_cast<std::size_t>(idx)].has_attr = true;
                st.cells[static_cast<std::size_t>(idx)].attr = attr_value(*t.attr, rule, la, ra);
            }
            for (std::size_t p = 0; p < t.args.size(); ++p) {
                Ref child = build(*t.args[p]);
                st.cells[static_cast<std::size_t>(idx)].slots[p] = child;
            }
            return Ref{idx, 0};
        };
        for (const Equation& eq : rule.rhs) {
            Ref l = build(*eq.left);
            Ref r = build(*eq.right);
            st.eq_stack.push_back({l, r});
        }
        for (std::size_t i = 0; i < lports.size(); ++i) {
            st.eq_stack.push_back({var_ref(rule.left.params[i]), lports[i]});
        }
        for (std::size_t i = 0; i < rports.size(); ++i) {
            st.eq_stack.push_back({var_ref(rule.right.params[i]), rports[i]});
        }
        ++interactions;
    }

    bool fire(Ref a, Ref b) {
        const SymbolId sa = st.cell(a).sym;
        const SymbolId sb = st.cell(b).sym;
        for (const Rule& rule : program.rules) {
            std::int32_t lc, rc;
            if (rule.left.sym == sa && rule.right.sym == sb) {
                lc = a.cell;
                rc = b.cell;
            } else if (rule.left.sym == sb && rule.right.sym == sa) {
                lc = b.cell;
                rc = a.cell;
            } else {
                continue;
            }
            if (rule.guard) {
                const std::int64_t la = st.cells[static_cast<std::size_t>(lc)].attr;
                const std::int64_t ra = st.cells[static_cast<std::size_t>(rc)].attr;
                if (!eval_cmp(rule.guard->op, attr_value(rule.guard->lhs, rule, la, ra),
                              attr_value(rule.guard->rhs, rule, la, ra))) {
                    continue;
                }
            }
            apply(rule, lc, rc);
            return true;
        }
        return false;
    }

    void run() {
        while (!st.eq_stack.empty()) {
            auto [a, b] = st.eq_stack.back();
            st.eq_stack.pop_back();
            bool handled = false;
            for (int attempt = 0; attempt < 2 && !handled; ++attempt) {
                if (st.cell(a).is_var()) {
                    Ref& bind = st.binding(a.cell);
                    if (bind.empty()) {
                        bind = b;
                    } else {
                        Ref t = bind;
                        st.free_cell(a.cell);
                        st.eq_stack.push_back({t, b});
                    }
                    handled = true;
                    break;
                }
                std::swap(a, b);
            }
            if (handled) continue;
            if (!fire(a, b)) {
                st.blocked.push_back({a, b});
                ++blocked;
            }
        }
    }

    std::string readback_text() { return render_readback(readback(st, compiled), compiled.symbols); }
};

}  // namespace

TEST_CASE("build_net instantiates cells, variables and the equation stack") {
    SUBCASE("the two-equation addition net") {
        Loaded l = load(corpus::addition_rules() +
                        "net Add(Z,r) ~ S(w), Add(Z,w) ~ S(Z); interface r;");
        CHECK(l.state.build.agent_cells == 7);  // Add,Z,S + Add,Z,S,Z
        CHECK(l.state.build.var_cells == 2);    // r and w
        CHECK(l.state.eq_stack.size() == 2);
        REQUIRE(l.state.interface.size() == 1);
        CHECK(l.state.interface[0].first == "r");
        CHECK(l.state.stats.interactions == 0);
        CHECK(l.state.stats.agent_allocs == 0);  // construction is counted separately
        CHECK(l.state.stats.peak_live_agents == 7);
    }
    SUBCASE("an interface variable with no equations") {
        Loaded l = load(corpus::addition_rules() + "net ; interface x;");
        CHECK(l.state.build.agent_cells == 0);
        CHECK(l.state.build.var_cells == 1);
        CHECK(l.state.eq_stack.empty());
    }
    SUBCASE("the insertion sort start net") {
        Loaded l = load(corpus::insertion_sort_program(std::vector<std::int64_t>{2, 4, 1, 3}));
        CHECK(l.state.build.agent_cells == 6);  // IS + four Cons + Nil
        CHECK(l.state.build.var_cells == 1);
    }
}

TEST_CASE("step outcomes") {
    SUBCASE("an active pair fires its rule") {
        Loaded l = load(corpus::addition_program(1, 0));
        StepOutcome out = step(l.state, l.compiled);
        CHECK(out.kind == StepKind::Fired);
        REQUIRE(out.rule);
        CHECK(out.rule->display == "Add><S");
        CHECK(l.state.stats.interactions == 1);
    }
    SUBCASE("a name endpoint binds as an indirection") {
        Loaded l = load(corpus::addition_rules() + "net x ~ S(Z); interface x;");
        StepOutcome out = step(l.state, l.compiled);
        CHECK(out.kind == StepKind::Indirection);
        CHECK(l.state.eq_stack.empty());
        std::string text = render_readback(readback(l.state, l.compiled), l.compiled.symbols);
        CHECK(text == "x = S(Z)\n");
    }
    SUBCASE("a pair without a rule blocks") {
        Loaded l = load(corpus::addition_rules() + "net Z ~ Z; interface;");
        StepOutcome out = step(l.state, l.compiled);
        CHECK(out.kind == StepKind::Blocked);
        CHECK(l.compiled.symbols.name(out.pair.first) == "Z");
        CHECK(reduce(l.state, l.compiled) == FinalKind::Blocked);
        std::string text = render_readback(readback(l.state, l.compiled), l.compiled.symbols);
        CHECK(text == "Z ~ Z\n");
    }
    SUBCASE("an empty stack is done") {
        Loaded l = load(corpus::addition_rules() + "net ; interface x;");
        CHECK(step(l.state, l.compiled).kind == StepKind::Done);
    }
}

TEST_CASE("reduction of the worked addition example") {
    Loaded l = load(corpus::addition_program(1, 0));
    CHECK(reduce(l.state, l.compiled) == FinalKind::NormalForm);
    CHECK(l.state.stats.interactions == 2);
    CHECK(l.state.stats.agent_allocs == 0);
    std::string text = render_readback(readback(l.state, l.compiled), l.compiled.symbols);
    CHECK(text == "r = S(Z)\n");
}

TEST_CASE("chained additions through shared variables") {
    CHECK(run_readback(corpus::addition_rules() +
                       "net Add(Z,r) ~ S(w), Add(Z,w) ~ S(Z); interface r;") ==
          "r = S(S(Z))\n");
}

TEST_CASE("readback of a freshly built net reproduces its source") {
    Loaded l = load(corpus::addition_rules() +
                    "net Add(Z,r) ~ S(w), Add(Z,w) ~ S(Z); interface r;");
    ReadbackResult result = readback(l.state, l.compiled);
    REQUIRE(result.residuals.size() == 2);
    CHECK(render(result.residuals[0], l.compiled.symbols) == "Add(Z,r) ~ S(w)");
    CHECK(render(result.residuals[1], l.compiled.symbols) == "Add(Z,w) ~ S(Z)");
    CHECK(result.diagnostics.empty());
}

TEST_CASE("step limits are reported") {
    Loaded l = load(corpus::ackermann_program(2, 2));
    ReduceOptions opts;
    opts.max_steps = 5;
    CHECK(reduce(l.state, l.compiled, opts) == FinalKind::StepLimit);
}

TEST_CASE("the state stays sound after every step") {
    for (const std::string& text :
         {corpus::addition_program(2, 1), corpus::ackermann_program(1, 2),
          corpus::insertion_sort_program(std::vector<std::int64_t>{2, 4, 1, 3}),
          corpus::reverse_program(std::vector<std::int64_t>{1, 2, 3, 4})}) {
        Loaded l = load(text);
        auto sound = validate_state(l.state, l.compiled);
        CHECK_MESSAGE(!sound, sound.value_or(""));
        while (true) {
            StepOutcome out = step(l.state, l.compiled);
            if (out.kind == StepKind::Done) break;
            auto err = validate_state(l.state, l.compiled);
            CHECK_MESSAGE(!err, err.value_or(""));
        }
    }
}

TEST_CASE("firing a rule changes live agents by rhs agents minus two") {
    Loaded l = load(corpus::ackermann_program(2, 2));
    std::int64_t live = l.state.live_agents;
    ReduceOptions opts;
    opts.on_step = [&](const TraceEvent& ev) {
        if (ev.outcome.kind == StepKind::Fired) {
            const int delta = ev.outcome.rule->classification.rhs_agent_count - 2;
            CHECK(ev.live_agents == live + delta);
            const RuleCase c = ev.outcome.rule->classification.rule_case;
            if (c == RuleCase::Case1 || c == RuleCase::Case2) CHECK(ev.live_agents <= live);
        }
        live = ev.live_agents;
    };
    CHECK(reduce(l.state, l.compiled, std::move(opts)) == FinalKind::NormalForm);
}

TEST_CASE("run statistics equal the fired-rule multiset costs") {
    for (const std::string& text :
         {corpus::addition_program(2, 1), corpus::ackermann_program(2, 2),
          corpus::insertion_sort_program(std::vector<std::int64_t>{2, 4, 1, 3}),
          corpus::reverse_program(std::vector<std::int64_t>{1, 2, 3, 4})}) {
        Loaded l = load(text);
        std::map<const CompiledRule*, std::uint64_t> fired;
        ReduceOptions opts;
        opts.on_step = [&](const TraceEvent& ev) {
            if (ev.outcome.kind == StepKind::Fired) ++fired[ev.outcome.rule];
        };
        REQUIRE(reduce(l.state, l.compiled, std::move(opts)) == FinalKind::NormalForm);
        Stats expected;
        for (const auto& [rule, count] : fired) {
            expected.interactions += count;
            expected.agent_allocs += count * static_cast<std::uint64_t>(rule->cost.allocs);
            expected.agent_frees += count * static_cast<std::uint64_t>(rule->cost.frees);
            expected.agent_reuses += count * static_cast<std::uint64_t>(rule->cost.reuses);
            expected.port_writes += count * static_cast<std::uint64_t>(rule->cost.port_writes);
            expected.saved_port_writes +=
                count * static_cast<std::uint64_t>(rule->cost.saved_port_writes);
        }
        CHECK(l.state.stats.interactions == expected.interactions);
        CHECK(l.state.stats.agent_allocs == expected.agent_allocs);
        CHECK(l.state.stats.agent_frees == expected.agent_frees);
        CHECK(l.state.stats.agent_reuses == expected.agent_reuses);
        CHECK(l.state.stats.port_writes == expected.port_writes);
        CHECK(l.state.stats.saved_port_writes == expected.saved_port_writes);
        CHECK(l.state.stats.var_allocs == 0);  // rules never allocate variables
    }
}

TEST_CASE("random-order reduction matches stack order") {
    for (const std::string& text :
         {corpus::ackermann_program(2, 2),
          corpus::insertion_sort_program(std::vector<std::int64_t>{2, 4, 1, 3})}) {
        Loaded stack_run = load(text);
        REQUIRE(reduce(stack_run.state, stack_run.compiled) == FinalKind::NormalForm);
        std::string expected =
            render_readback(readback(stack_run.state, stack_run.compiled), stack_run.compiled.symbols);
        for (std::uint64_t seed : {1u, 7u, 42u}) {
            Loaded l = load(text);
            ReduceOptions opts;
            opts.strategy = ReduceOptions::Strategy::Random;
            opts.seed = seed;
            REQUIRE(reduce(l.state, l.compiled, opts) == FinalKind::NormalForm);
            CHECK(render_readback(readback(l.state, l.compiled), l.compiled.symbols) == expected);
            CHECK(l.state.stats.interactions == stack_run.state.stats.interactions);
        }
    }
}

TEST_CASE("the compiled evaluator agrees with naive instantiation-by-copy") {
    for (const std::string& text :
         {corpus::addition_program(3, 2), corpus::ackermann_program(2, 2),
          corpus::insertion_sort_program(std::vector<std::int64_t>{5, 1, 4, 2, 3}),
          corpus::insertion_sort_program(std::vector<std::int64_t>{3, 3, 1}),
          corpus::reverse_program(std::vector<std::int64_t>{1, 2, 3, 4})}) {
        Loaded l = load(text);
        REQUIRE(reduce(l.state, l.compiled) == FinalKind::NormalForm);
        std::string compiled_text =
            render_readback(readback(l.state, l.compiled), l.compiled.symbols);

        NaiveEvaluator naive(text);
        naive.run();
        CHECK(naive.blocked == 0);
        CHECK(naive.readback_text() == compiled_text);
        CHECK(naive.interactions == l.state.stats.interactions);
    }
}

TEST_CASE("interface anchors are preserved by reduction") {
    Loaded l = load(corpus::insertion_sort_program(std::vector<std::int64_t>{2, 4, 1, 3}));
    auto anchors = l.state.interface;
    REQUIRE(reduce(l.state, l.compiled) == FinalKind::NormalForm);
    CHECK(l.state.interface == anchors);
}

TEST_CASE("disconnected cycles are diagnosed, not collected") {
    Loaded l = load(corpus::addition_rules() + "net x ~ S(x); interface;");
    CHECK(reduce(l.state, l.compiled) == FinalKind::NormalForm);
    ReadbackResult result = readback(l.state, l.compiled);
    CHECK(result.bindings.empty());
    CHECK(result.residuals.empty());
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].find("unreachable") != std::string::npos);
}

TEST_CASE("guard fallthrough without a match blocks the pair") {
    const std::string rules = "I{x}(r) >< Cons{y}(t) | x < y => r ~ Cons{x}(Cons{y}(t));";
    Loaded l = load(rules + "net I{3}(r) ~ Cons{3}(Nil); interface r;", false);
    CHECK(reduce(l.state, l.compiled) == FinalKind::Blocked);
    ReadbackResult result = readback(l.state, l.compiled);
    REQUIRE(result.residuals.size() == 1);
    CHECK(render(result.residuals[0], l.compiled.symbols) == "I{3}(r) ~ Cons{3}(Nil)");
}

TEST_CASE("attribute values transfer across the active pair") {
    // The reused P cell takes its attribute from the other cell.
    Loaded l = load("P{x} >< Q{y}(s) => s ~ (*L){y};"
                    "net P{7} ~ Q{9}(out); interface out;",
                    false);
    CHECK(reduce(l.state, l.compiled) == FinalKind::NormalForm);
    CHECK(render_readback(readback(l.state, l.compiled), l.compiled.symbols) == "out = P{9}\n");
}

TEST_CASE("a cast to an attribute-free symbol drops the stored value") {
    Loaded l = load("Cons{x}(t) >< Era => (*L)Nil ~ t;"
                    "net Cons{5}(out) ~ Era; interface out;",
                    false);
    CHECK(reduce(l.state, l.compiled) == FinalKind::NormalForm);
    CHECK(render_readback(readback(l.state, l.compiled), l.compiled.symbols) == "out = Nil\n");
}

TEST_CASE("a name shared between both LHS patterns wires the two peers") {
    Loaded l = load("Fst(x) >< Snd(x) => ;"
                    "net Fst(a) ~ Snd(b), a ~ Z, b ~ S(Z); interface;",
                    false);
    CHECK(reduce(l.state, l.compiled) == FinalKind::Blocked);
    ReadbackResult result = readback(l.state, l.compiled);
    REQUIRE(result.residuals.size() == 1);
    CHECK(render(result.residuals[0], l.compiled.symbols) == "S(Z) ~ Z");
}

TEST_CASE("an empty RHS erases the active pair") {
    Loaded l = load("Eps >< Z => ;net Eps ~ Z; interface;", false);
    CHECK(reduce(l.state, l.compiled) == FinalKind::NormalForm);
    CHECK(l.state.stats.interactions == 1);
    CHECK(l.state.stats.agent_frees == 2);
    CHECK(l.state.live_agents == 0);
}

TEST_CASE("a rule for a symbol against itself fires deterministically") {
    Loaded l = load("Dub(x) >< Dub(y) => x ~ y;"
                    "net Dub(Z) ~ Dub(S(Z)); interface;",
                    false);
    CHECK(reduce(l.state, l.compiled) == FinalKind::Blocked);
    ReadbackResult result = readback(l.state, l.compiled);
    REQUIRE(result.residuals.size() == 1);
    CHECK(render(result.residuals[0], l.compiled.symbols) == "Z ~ S(Z)");
}

TEST_CASE("readback of ackermann results is the unary numeral") {
    Loaded l = load(corpus::ackermann_program(2, 2));
    REQUIRE(reduce(l.state, l.compiled) == FinalKind::NormalForm);
    std::string text = render_readback(readback(l.state, l.compiled), l.compiled.symbols);
    CHECK(text == "r = " + corpus::unary(7) + "\n");
}
