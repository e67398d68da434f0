// Command-line front end: run nets, derive reuse annotations, check files,
// and print per-rule cost tables.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "inet/annotate.hpp"
#include "inet/classify.hpp"
#include "inet/compile.hpp"
#include "inet/corpus.hpp"
#include "inet/parser.hpp"
#include "inet/printer.hpp"
#include "inet/runtime.hpp"
#include "inet/validate.hpp"

namespace {

enum class AnnotationMode { Manual, Derived, None };

struct CommonOptions {
    std::string input;
    std::string annotations = "derived";
    bool stats = false;
    bool trace = false;
    std::string strategy = "stack";
    std::uint64_t max_steps = 100000000;  // desk-scale guard against runaway systems
    int port_capacity = 4;
    std::string output;
};

constexpr int kExitOk = 0;
constexpr int kExitLoadError = 1;
constexpr int kExitBlocked = 2;
constexpr int kExitStepLimit = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw inet::LoadError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AnnotationMode parse_annotations(const std::string& mode) {
    if (mode == "manual") return AnnotationMode::Manual;
    if (mode == "derived") return AnnotationMode::Derived;
    if (mode == "none") return AnnotationMode::None;
    throw inet::LoadError("unknown annotations mode '" + mode + "'");
}

inet::ReduceOptions::Strategy parse_strategy(const std::string& s, std::uint64_t& seed) {
    if (s == "stack") return inet::ReduceOptions::Strategy::Stack;
    if (s.rfind("random:", 0) == 0) {
        seed = std::stoull(s.substr(7));
        return inet::ReduceOptions::Strategy::Random;
    }
    if (s == "random") throw inet::LoadError("--strategy random requires a seed: random:<seed>");
    throw inet::LoadError("unknown strategy '" + s + "'");
}

inet::Program load_annotated(const CommonOptions& opts, AnnotationMode mode) {
    inet::Program program = inet::parse_program(read_file(opts.input));
    std::vector<inet::Diagnostic> diags =
        inet::validate(program, inet::ValidateOptions{opts.port_capacity});
    if (!diags.empty()) throw inet::ValidationError(std::move(diags));
    switch (mode) {
        case AnnotationMode::Manual: return program;
        case AnnotationMode::Derived: return inet::derive_program(program);
        case AnnotationMode::None: return inet::strip_program(program);
    }
    return program;
}

void write_output(const CommonOptions& opts, const std::string& text) {
    if (opts.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.output, std::ios::binary);
    if (!out) throw inet::LoadError("cannot write " + opts.output);
    out << text;
}

const char* outcome_name(inet::StepKind kind) {
    switch (kind) {
        case inet::StepKind::Fired: return "fired";
        case inet::StepKind::Indirection: return "indirection";
        case inet::StepKind::Blocked: return "blocked";
        case inet::StepKind::Done: return "done";
    }
    return "?";
}

int cmd_run(const CommonOptions& opts) {
    inet::Program program = load_annotated(opts, parse_annotations(opts.annotations));
    if (!program.net) {
        std::cerr << "error: no net declared in " << opts.input << "\n";
        return kExitLoadError;
    }
    inet::CheckedProgram checked{std::move(program), inet::ValidateOptions{opts.port_capacity}};
    inet::CompiledProgram compiled = inet::compile_program(checked);
    inet::RuntimeState state = inet::build_net(*checked.program.net, compiled);

    inet::ReduceOptions ropts;
    ropts.max_steps = opts.max_steps;
    ropts.strategy = parse_strategy(opts.strategy, ropts.seed);
    if (opts.trace) {
        ropts.on_step = [&](const inet::TraceEvent& ev) {
            std::cout << "step=" << ev.index << " " << outcome_name(ev.outcome.kind);
            if (ev.outcome.rule) {
                std::cout << " " << ev.outcome.rule->display;
            } else if (ev.outcome.kind == inet::StepKind::Blocked) {
                std::cout << " " << compiled.symbols.name(ev.outcome.pair.first) << "><"
                          << compiled.symbols.name(ev.outcome.pair.second);
            } else {
                std::cout << " -";
            }
            std::cout << " stack=" << ev.stack_depth << " live=" << ev.live_agents << "\n";
        };
    }
    inet::FinalKind outcome = inet::reduce(state, compiled, std::move(ropts));

    inet::ReadbackResult result = inet::readback(state, compiled);
    std::cout << inet::render_readback(result, compiled.symbols);
    for (const std::string& d : result.diagnostics) std::cerr << "note: " << d << "\n";
    if (opts.stats) std::cout << inet::render_stats(state.stats);

    switch (outcome) {
        case inet::FinalKind::NormalForm: return kExitOk;
        case inet::FinalKind::Blocked: return kExitBlocked;
        case inet::FinalKind::StepLimit:
            std::cerr << "error: step limit of " << opts.max_steps << " reached\n";
            return kExitStepLimit;
    }
    return kExitOk;
}

int cmd_derive(const CommonOptions& opts) {
    inet::Program program = load_annotated(opts, AnnotationMode::Derived);
    write_output(opts, inet::render(program));
    return kExitOk;
}

int cmd_check(const CommonOptions& opts) {
    inet::Program program = inet::parse_program(read_file(opts.input));
    std::vector<inet::Diagnostic> diags =
        inet::validate(program, inet::ValidateOptions{opts.port_capacity});
    for (const inet::Diagnostic& d : diags) std::cerr << opts.input << ":" << d.to_string() << "\n";
    return diags.empty() ? kExitOk : kExitLoadError;
}

int cmd_cost(const CommonOptions& opts) {
    inet::Program program = load_annotated(opts, parse_annotations(opts.annotations));
    inet::CheckedProgram checked{std::move(program), inet::ValidateOptions{opts.port_capacity}};
    inet::CompiledProgram compiled = inet::compile_program(checked);
    inet::CostTable table = inet::estimate_program(compiled);
    std::ostringstream out;
    for (const auto& row : table.rows) {
        out << row.display << " " << inet::to_string(row.rule_case) << " allocs=" << row.cost.allocs
            << " frees=" << row.cost.frees << " reuses=" << row.cost.reuses
            << " savedPortWrites=" << row.cost.saved_port_writes << "\n";
    }
    out << "TOTAL allocs=" << table.total.allocs << " frees=" << table.total.frees
        << " reuses=" << table.total.reuses << " savedPortWrites=" << table.total.saved_port_writes
        << "\n";
    write_output(opts, out.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interaction net evaluator with in-place reuse annotations"};
    app.require_subcommand(1);

    CommonOptions opts;
    auto add_common = [&](CLI::App* cmd, bool with_run_flags) {
        cmd->add_option("input", opts.input, "path to a .inet file")->required();
        cmd->add_option("--port-capacity", opts.port_capacity, "fixed cell port capacity")
            ->check(CLI::Range(1, 9));
        if (cmd->get_name() == "derive" || cmd->get_name() == "cost") {
            cmd->add_option("-o", opts.output, "write output to a file instead of stdout");
        }
        if (with_run_flags) {
            cmd->add_option("--annotations", opts.annotations,
                            "annotation mode: manual | derived | none");
            cmd->add_flag("--stats", opts.stats, "print the stats block");
            cmd->add_flag("--trace", opts.trace, "print one line per reduction step");
            cmd->add_option("--strategy", opts.strategy, "stack | random:<seed>");
            cmd->add_option("--max-steps", opts.max_steps, "step limit");
        }
    };

    CLI::App* run = app.add_subcommand("run", "reduce the net and print its readback");
    add_common(run, true);
    CLI::App* derive = app.add_subcommand("derive", "derive reuse annotations");
    add_common(derive, false);
    CLI::App* chk = app.add_subcommand("check", "validate a file");
    add_common(chk, false);
    CLI::App* cost = app.add_subcommand("cost", "print the per-rule cost table");
    add_common(cost, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opts);
        if (derive->parsed()) return cmd_derive(opts);
        if (chk->parsed()) return cmd_check(opts);
        if (cost->parsed()) return cmd_cost(opts);
    } catch (const inet::ValidationError& e) {
        for (const inet::Diagnostic& d : e.diagnostics()) {
            std::cerr << opts.input << ":" << d.to_string() << "\n";
        }
        return kExitLoadError;
    } catch (const inet::LoadError& e) {
        std::cerr << opts.input << ":" << e.what() << "\n";
        return kExitLoadError;
    }
    return kExitOk;
}
