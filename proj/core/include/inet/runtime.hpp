#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "inet/ast.hpp"
#include "inet/compile.hpp"

namespace inet {

inline constexpr int kMaxPortCapacity = 9;

/// Reference to a cell endpoint. Port 0 addresses the cell as a term root
/// (an agent's principal side, or a variable cell); ports 1..arity address
/// auxiliary port slots.
struct Ref {
    std::int32_t cell = -1;
    std::int32_t port = 0;

    bool empty() const { return cell < 0; }
    friend bool operator==(const Ref& a, const Ref& b) {
        return a.cell == b.cell && a.port == b.port;
    }
};

/// One fixed-size cell. Agent cells use slots[0..arity-1] as auxiliary ports
/// 1..arity, each holding the child root, the wired peer port, or a variable.
/// Variable cells use slots[0] as their binding: empty while unbound, the
/// bound term root once an equation reaches them (an indirection).
struct Cell {
    SymbolId sym = kNoSymbol;  // kNoSymbol marks a variable cell
    bool live = false;
    bool has_attr = false;
    std::int64_t attr = 0;
    std::int32_t name_id = -1;  // variable cells: index into RuntimeState::var_names
    std::array<Ref, kMaxPortCapacity> slots{};

    bool is_var() const { return sym == kNoSymbol; }
};

/// Reduction-phase counters. Construction of the initial net is accounted
/// separately in BuildCounts so the in-place properties of rule firing stay
/// visible.
struct Stats {
    std::uint64_t interactions = 0;
    std::uint64_t agent_allocs = 0;
    std::uint64_t agent_frees = 0;
    std::uint64_t agent_reuses = 0;
    std::uint64_t var_allocs = 0;
    std::uint64_t var_frees = 0;
    std::uint64_t port_writes = 0;
    std::uint64_t saved_port_writes = 0;
    std::uint64_t peak_live_agents = 0;
};

struct BuildCounts {
    std::uint64_t agent_cells = 0;
    std::uint64_t var_cells = 0;
};

struct RuntimeState {
    std::vector<Cell> cells;
    std::vector<std::int32_t> free_list;
    std::vector<std::pair<Ref, Ref>> eq_stack;
    std::vector<std::pair<Ref, Ref>> blocked;
    std::vector<std::pair<std::string, std::int32_t>> interface;  // name, variable cell
    std::vector<std::string> var_names;
    Stats stats;
    BuildCounts build;
    std::int64_t live_agents = 0;
    std::int64_t live_vars = 0;

    // Register scratch space reused across rule firings.
    std::vector<Ref> scratch_ports;
    std::vector<std::int64_t> scratch_attrs;

    std::int32_t alloc_agent(SymbolId sym);
    std::int32_t alloc_var(std::int32_t name_id);
    void free_cell(std::int32_t idx);
    Ref& slot(const Ref& r) { return cells[static_cast<std::size_t>(r.cell)].slots[static_cast<std::size_t>(r.port - 1)]; }
    Ref& binding(std::int32_t var) { return cells[static_cast<std::size_t>(var)].slots[0]; }
    const Cell& cell(const Ref& r) const { return cells[static_cast<std::size_t>(r.cell)]; }
    Cell& cell(const Ref& r) { return cells[static_cast<std::size_t>(r.cell)]; }
};

/// Instantiates the net: one agent cell per agent occurrence, one variable
/// cell per net-level name, equations pushed in source order (the leftmost
/// ends up deepest), interface anchors registered in declaration order.
RuntimeState build_net(const Net& net, const CompiledProgram& program);

enum class StepKind { Fired, Indirection, Blocked, Done };

struct StepOutcome {
    StepKind kind = StepKind::Done;
    const CompiledRule* rule = nullptr;          // Fired
    std::pair<SymbolId, SymbolId> pair{kNoSymbol, kNoSymbol};  // Fired/Blocked
};

/// Pops one equation and processes it: fires the matching rule on an active
/// pair (guards tried in declaration order), binds or collapses a variable
/// endpoint, or parks the pair as blocked when no rule applies.
StepOutcome step(RuntimeState& state, const CompiledProgram& program);

enum class FinalKind { NormalForm, Blocked, StepLimit };

struct TraceEvent {
    std::uint64_t index = 0;
    StepOutcome outcome;
    std::size_t stack_depth = 0;
    std::int64_t live_agents = 0;
};

struct ReduceOptions {
    enum class Strategy { Stack, Random };
    Strategy strategy = Strategy::Stack;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> max_steps;  // unlimited by default
    std::function<void(const TraceEvent&)> on_step;
};

FinalKind reduce(RuntimeState& state, const CompiledProgram& program, ReduceOptions options = {});

/// The observable content of a state: one term per interface name with
/// indirections collapsed, plus any equations still pending or blocked.
/// Cells unreachable from either are reported as disconnected-cycle
/// diagnostics.
struct ReadbackResult {
    std::vector<std::pair<std::string, TermPtr>> bindings;  // interface order
    std::vector<Equation> residuals;
    std::vector<std::string> diagnostics;
};

ReadbackResult readback(const RuntimeState& state, const CompiledProgram& program);

std::string render_readback(const ReadbackResult& result, const SymbolTable& symbols);

/// Debug integrity pass: port-to-port wires must be mutual, every reference
/// must target a live cell, agent roots are referenced at most once and
/// variable cells at most twice. Returns a description of the first
/// violation, or nothing when the state is sound.
std::optional<std::string> validate_state(const RuntimeState& state,
                                          const CompiledProgram& program);

/// Stats in the flat machine-readable block emitted by the CLI: one
/// key=value per line, keys fixed.
std::string render_stats(const Stats& stats);

}  // namespace inet
