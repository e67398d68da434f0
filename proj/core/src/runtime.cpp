#include "inet/runtime.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <unordered_map>

#include "inet/printer.hpp"

namespace inet {

std::int32_t RuntimeState::alloc_agent(SymbolId sym) {
    std::int32_t idx;
    if (!free_list.empty()) {
        idx = free_list.back();
        free_list.pop_back();
        cells[static_cast<std::size_t>(idx)] = Cell{};
    } else {
        idx = static_cast<std::int32_t>(cells.size());
        cells.emplace_back();
    }
    Cell& c = cells[static_cast<std::size_t>(idx)];
    c.sym = sym;
    c.live = true;
    ++stats.agent_allocs;
    ++live_agents;
    stats.peak_live_agents =
        std::max<std::uint64_t>(stats.peak_live_agents, static_cast<std::uint64_t>(live_agents));
    return idx;
}

std::int32_t RuntimeState::alloc_var(std::int32_t name_id) {
    std::int32_t idx;
    if (!free_list.empty()) {
        idx = free_list.back();
        free_list.pop_back();
        cells[static_cast<std::size_t>(idx)] = Cell{};
    } else {
        idx = static_cast<std::int32_t>(cells.size());
        cells.emplace_back();
    }
    Cell& c = cells[static_cast<std::size_t>(idx)];
    c.sym = kNoSymbol;
    c.live = true;
    c.name_id = name_id;
    ++stats.var_allocs;
    ++live_vars;
    return idx;
}

void RuntimeState::free_cell(std::int32_t idx) {
    Cell& c = cells[static_cast<std::size_t>(idx)];
    if (c.is_var()) {
        ++stats.var_frees;
        --live_vars;
    } else {
        ++stats.agent_frees;
        --live_agents;
    }
    c.live = false;
    free_list.push_back(idx);
}

namespace {

struct NetBuilder {
    NetBuilder(RuntimeState& state, const CompiledProgram& program)
        : st(state), prog(program) {}

    RuntimeState& st;
    const CompiledProgram& prog;
    std::map<std::string, std::int32_t> vars;

    std::int32_t var_cell(const std::string& name) {
        auto it = vars.find(name);
        if (it != vars.end()) return it->second;
        std::int32_t name_id = static_cast<std::int32_t>(st.var_names.size());
        st.var_names.push_back(name);
        std::int32_t idx = st.alloc_var(name_id);
        vars.emplace(name, idx);
        return idx;
    }

    Ref build(const Term& t) {
        if (t.is_name()) return Ref{var_cell(t.name), 0};
        if (static_cast<int>(t.args.size()) > prog.port_capacity) {
            throw LoadError("symbol " + prog.symbols.name(t.sym) + " exceeds port capacity " +
                            std::to_string(prog.port_capacity));
        }
        std::int32_t idx = st.alloc_agent(t.sym);
        Cell& c = st.cells[static_cast<std::size_t>(idx)];
        if (t.attr) {
            c.has_attr = true;
            c.attr = t.attr->value;  // nets carry literals only
        }
        for (std::size_t p = 0; p < t.args.size(); ++p) {
            Ref child = build(*t.args[p]);
            st.cells[static_cast<std::size_t>(idx)].slots[p] = child;
        }
        return Ref{idx, 0};
    }
};

// Joins two endpoints whose kinds are only known at run time. A slot side is
// written in place (restoring mutuality when both sides are slots); when both
// endpoints are term roots the join becomes a pending equation.
void join(RuntimeState& st, Ref a, Ref b) {
    const bool a_slot = a.port >= 1;
    const bool b_slot = b.port >= 1;
    if (a_slot) st.slot(a) = b;
    if (b_slot) st.slot(b) = a;
    if (!a_slot && !b_slot) st.eq_stack.push_back({a, b});
}

void execute(RuntimeState& st, const CompiledProgram& prog, const CompiledRule& rule,
             std::int32_t lc, std::int32_t rc) {
    st.scratch_ports.assign(static_cast<std::size_t>(rule.port_regs), Ref{});
    st.scratch_attrs.assign(static_cast<std::size_t>(rule.attr_regs), 0);
    auto& ports = st.scratch_ports;
    auto& attrs = st.scratch_attrs;

    auto side_cell = [&](ReuseSide s) { return s == ReuseSide::Left ? lc : rc; };
    auto cell_index = [&](const CellId& c) -> std::int32_t {
        switch (c.kind) {
            case CellId::Kind::Left: return lc;
            case CellId::Kind::Right: return rc;
            case CellId::Kind::Reg: return ports[static_cast<std::size_t>(c.reg)].cell;
        }
        return -1;
    };
    auto resolve = [&](const Operand& o) -> Ref {
        if (o.kind == Operand::Kind::Reg) return ports[static_cast<std::size_t>(o.reg)];
        return Ref{cell_index(o.cell), o.port};
    };

    for (const Instruction& in : rule.code) {
        switch (in.op) {
            case Opcode::LoadPort:
                ports[static_cast<std::size_t>(in.dst)] =
                    st.cells[static_cast<std::size_t>(side_cell(in.side))]
                        .slots[static_cast<std::size_t>(in.port - 1)];
                break;
            case Opcode::LoadAttr:
                attrs[static_cast<std::size_t>(in.dst)] =
                    st.cells[static_cast<std::size_t>(side_cell(in.side))].attr;
                break;
            case Opcode::Reuse: {
                Cell& c = st.cells[static_cast<std::size_t>(side_cell(in.side))];
                c.sym = in.sym;
                if (prog.symbols.attr_count(in.sym) == 0) c.has_attr = false;
                ++st.stats.agent_reuses;
                break;
            }
            case Opcode::Alloc: {
                std::int32_t idx = st.alloc_agent(in.sym);
                ports[static_cast<std::size_t>(in.dst)] = Ref{idx, 0};
                break;
            }
            case Opcode::Free:
                st.free_cell(side_cell(in.side));
                break;
            case Opcode::SetPort:
                st.cells[static_cast<std::size_t>(cell_index(in.cell))]
                    .slots[static_cast<std::size_t>(in.port - 1)] = resolve(in.a);
                ++st.stats.port_writes;
                break;
            case Opcode::SetAttr: {
                Cell& c = st.cells[static_cast<std::size_t>(cell_index(in.cell))];
                c.attr = in.attr.is_reg ? attrs[static_cast<std::size_t>(in.attr.reg)]
                                        : in.attr.literal;
                c.has_attr = true;
                ++st.stats.port_writes;
                break;
            }
            case Opcode::Connect:
                join(st, resolve(in.a), resolve(in.b));
                break;
            case Opcode::PushEq:
                st.eq_stack.push_back({resolve(in.a), resolve(in.b)});
                break;
        }
    }
    st.stats.saved_port_writes += static_cast<std::uint64_t>(rule.cost.saved_port_writes);
    ++st.stats.interactions;
}

bool eval_guard(const RuntimeState& st, const CompiledGuard& guard, std::int32_t lc,
                std::int32_t rc) {
    auto value = [&](const CompiledGuard::Opnd& o) -> std::int64_t {
        if (o.is_literal) return o.literal;
        return st.cells[static_cast<std::size_t>(o.side == ReuseSide::Left ? lc : rc)].attr;
    };
    return eval_cmp(guard.op, value(guard.lhs), value(guard.rhs));
}

}  // namespace

RuntimeState build_net(const Net& net, const CompiledProgram& program) {
    RuntimeState st;
    NetBuilder builder(st, program);
    for (const Equation& eq : net.equations) {
        Ref left = builder.build(*eq.left);
        Ref right = builder.build(*eq.right);
        st.eq_stack.push_back({left, right});
    }
    for (const std::string& name : net.interface) {
        st.interface.emplace_back(name, builder.var_cell(name));
    }
    st.build.agent_cells = st.stats.agent_allocs;
    st.build.var_cells = st.stats.var_allocs;
    st.stats = Stats{};
    st.stats.peak_live_agents = static_cast<std::uint64_t>(st.live_agents);
    return st;
}

StepOutcome step(RuntimeState& state, const CompiledProgram& program) {
    if (state.eq_stack.empty()) return StepOutcome{StepKind::Done, nullptr, {}};
    auto [a, b] = state.eq_stack.back();
    state.eq_stack.pop_back();

    for (int attempt = 0; attempt < 2; ++attempt) {
        if (state.cell(a).is_var()) {
            Ref& bind = state.binding(a.cell);
            if (bind.empty()) {
                bind = b;  // the variable becomes an indirection
            } else {
                Ref target = bind;
                state.free_cell(a.cell);
                state.eq_stack.push_back({target, b});
            }
            return StepOutcome{StepKind::Indirection, nullptr, {}};
        }
        std::swap(a, b);
    }

    const SymbolId sa = state.cell(a).sym;
    const SymbolId sb = state.cell(b).sym;
    for (std::size_t idx : program.find(sa, sb)) {
        const CompiledRule& rule = program.rules[idx];
        std::int32_t lc, rc;
        if (rule.left_sym == sa && rule.right_sym == sb) {
            lc = a.cell;
            rc = b.cell;
        } else if (rule.left_sym == sb && rule.right_sym == sa) {
            lc = b.cell;
            rc = a.cell;
        } else {
            continue;
        }
        if (rule.guard && !eval_guard(state, *rule.guard, lc, rc)) continue;
        execute(state, program, rule, lc, rc);
        return StepOutcome{StepKind::Fired, &rule, {rule.left_sym, rule.right_sym}};
    }
    state.blocked.push_back({a, b});
    return StepOutcome{StepKind::Blocked, nullptr, {sa, sb}};
}

FinalKind reduce(RuntimeState& state, const CompiledProgram& program, ReduceOptions options) {
    std::mt19937_64 rng(options.seed);
    std::uint64_t steps = 0;
    while (!state.eq_stack.empty()) {
        if (options.max_steps && steps >= *options.max_steps) return FinalKind::StepLimit;
        if (options.strategy == ReduceOptions::Strategy::Random && state.eq_stack.size() > 1) {
            std::size_t pick = static_cast<std::size_t>(rng() % state.eq_stack.size());
            std::swap(state.eq_stack[pick], state.eq_stack.back());
        }
        StepOutcome outcome = step(state, program);
        ++steps;
        if (options.on_step) {
            options.on_step(TraceEvent{steps, outcome, state.eq_stack.size(), state.live_agents});
        }
    }
    return state.blocked.empty() ? FinalKind::NormalForm : FinalKind::Blocked;
}

namespace {

struct Reader {
    const RuntimeState& st;
    const SymbolTable& symbols;

    Reader(const RuntimeState& state, const SymbolTable& syms) : st(state), symbols(syms) {}

    std::set<std::int32_t> visited_agents;
    std::set<std::int32_t> visited_vars;
    std::set<std::int32_t> collapsing;  // variables on the current binding chain
    std::map<std::pair<std::int64_t, std::int64_t>, std::string> wire_names;
    std::set<std::string> used_names;
    std::vector<std::string> diagnostics;
    int next_wire = 0;

    static std::int64_t pack(const Ref& r) {
        return (static_cast<std::int64_t>(r.cell) << 8) | static_cast<std::int64_t>(r.port);
    }

    std::string fresh_wire_name() {
        std::string name;
        do {
            name = "w" + std::to_string(next_wire++);
        } while (used_names.count(name));
        used_names.insert(name);
        return name;
    }

    std::string wire_name(const Ref& here, const Ref& there) {
        std::pair<std::int64_t, std::int64_t> key{std::min(pack(here), pack(there)),
                                                  std::max(pack(here), pack(there))};
        auto it = wire_names.find(key);
        if (it != wire_names.end()) return it->second;
        std::string name = fresh_wire_name();
        wire_names.emplace(key, name);
        return name;
    }

    TermPtr term_at(Ref r) {
        if (r.empty()) {
            diagnostics.push_back("dangling reference");
            return Term::make_name(fresh_wire_name());
        }
        const Cell& c = st.cell(r);
        if (c.is_var()) {
            const Ref bind = c.slots[0];
            if (bind.empty()) {
                visited_vars.insert(r.cell);
                return Term::make_name(st.var_names[static_cast<std::size_t>(c.name_id)]);
            }
            if (!collapsing.insert(r.cell).second) {
                diagnostics.push_back("cyclic variable binding through " +
                                      st.var_names[static_cast<std::size_t>(c.name_id)]);
                return Term::make_name(st.var_names[static_cast<std::size_t>(c.name_id)]);
            }
            visited_vars.insert(r.cell);
            TermPtr t = term_at(bind);
            collapsing.erase(r.cell);
            return t;
        }
        if (!visited_agents.insert(r.cell).second) {
            diagnostics.push_back("cell visited twice (shared or cyclic structure)");
            return Term::make_name(fresh_wire_name());
        }
        std::optional<AttrExpr> attr;
        if (c.has_attr) attr = AttrExpr::literal(c.attr);
        std::vector<TermPtr> args;
        const int arity = symbols.arity(c.sym);
        args.reserve(static_cast<std::size_t>(arity));
        for (int p = 1; p <= arity; ++p) {
            const Ref content = c.slots[static_cast<std::size_t>(p - 1)];
            if (!content.empty() && content.port >= 1) {
                // A wire between two auxiliary ports; both ends render as the
                // same fresh name.
                args.push_back(Term::make_name(wire_name(Ref{r.cell, p}, content)));
            } else {
                args.push_back(term_at(content));
            }
        }
        return Term::make_agent(c.sym, std::move(attr), std::move(args));
    }
};

}  // namespace

ReadbackResult readback(const RuntimeState& state, const CompiledProgram& program) {
    Reader reader(state, program.symbols);
    for (const std::string& n : state.var_names) reader.used_names.insert(n);

    ReadbackResult out;
    for (const auto& [name, cell] : state.interface) {
        out.bindings.emplace_back(name, reader.term_at(Ref{cell, 0}));
    }
    for (const auto& [a, b] : state.eq_stack) {
        out.residuals.push_back(Equation{reader.term_at(a), reader.term_at(b)});
    }
    for (const auto& [a, b] : state.blocked) {
        out.residuals.push_back(Equation{reader.term_at(a), reader.term_at(b)});
    }

    std::int64_t unreachable = 0;
    for (std::size_t i = 0; i < state.cells.size(); ++i) {
        const Cell& c = state.cells[i];
        if (!c.live) continue;
        const std::int32_t idx = static_cast<std::int32_t>(i);
        if (c.is_var() ? !reader.visited_vars.count(idx) : !reader.visited_agents.count(idx)) {
            ++unreachable;
        }
    }
    if (unreachable > 0) {
        reader.diagnostics.push_back(std::to_string(unreachable) +
                                     " live cell(s) unreachable from the interface "
                                     "(disconnected cycle)");
    }
    out.diagnostics = std::move(reader.diagnostics);
    return out;
}

std::string render_readback(const ReadbackResult& result, const SymbolTable& symbols) {
    std::string out;
    for (const auto& [name, term] : result.bindings) {
        out += name + " = " + render(*term, symbols) + "\n";
    }
    for (const Equation& eq : result.residuals) {
        out += render(eq, symbols) + "\n";
    }
    return out;
}

std::optional<std::string> validate_state(const RuntimeState& state,
                                          const CompiledProgram& program) {
    auto describe = [](const Ref& r) {
        return "(" + std::to_string(r.cell) + "," + std::to_string(r.port) + ")";
    };
    std::unordered_map<std::int32_t, int> root_inbound;
    auto check_target = [&](const Ref& r) -> std::optional<std::string> {
        if (r.cell < 0 || static_cast<std::size_t>(r.cell) >= state.cells.size()) {
            return "reference to nonexistent cell " + describe(r);
        }
        if (!state.cell(r).live) return "reference to freed cell " + describe(r);
        if (r.port == 0) ++root_inbound[r.cell];
        return std::nullopt;
    };

    for (std::size_t i = 0; i < state.cells.size(); ++i) {
        const Cell& c = state.cells[i];
        if (!c.live) continue;
        const std::int32_t idx = static_cast<std::int32_t>(i);
        if (c.is_var()) {
            if (!c.slots[0].empty()) {
                if (auto err = check_target(c.slots[0])) return err;
                if (c.slots[0].port != 0) return "variable " + std::to_string(idx) + " bound to a port";
            }
            continue;
        }
        const int arity = program.symbols.arity(c.sym);
        for (int p = 1; p <= arity; ++p) {
            const Ref r = c.slots[static_cast<std::size_t>(p - 1)];
            if (r.empty()) {
                return "cell " + std::to_string(idx) + " port " + std::to_string(p) + " is empty";
            }
            if (auto err = check_target(r)) return err;
            if (r.port >= 1) {
                const Cell& peer = state.cell(r);
                if (peer.is_var()) return "port wire into a variable " + describe(r);
                if (r.port > program.symbols.arity(peer.sym)) {
                    return "port wire beyond arity " + describe(r);
                }
                const Ref back = peer.slots[static_cast<std::size_t>(r.port - 1)];
                if (!(back == Ref{idx, p})) {
                    return "wire " + std::to_string(idx) + "." + std::to_string(p) + " <-> " +
                           describe(r) + " is not mutual";
                }
            }
        }
    }
    for (const auto& pile : {state.eq_stack, state.blocked}) {
        for (const auto& [a, b] : pile) {
            for (const Ref& r : {a, b}) {
                if (r.port != 0) return "equation endpoint is not a root " + describe(r);
                if (auto err = check_target(r)) return err;
            }
        }
    }
    for (const auto& [name, cell] : state.interface) {
        Ref r{cell, 0};
        if (auto err = check_target(r)) return err;
        if (!state.cell(r).is_var()) return "interface anchor " + name + " is not a variable cell";
    }
    for (const auto& [cell, count] : root_inbound) {
        const Cell& c = state.cells[static_cast<std::size_t>(cell)];
        const int limit = c.is_var() ? 2 : 1;
        if (count > limit) {
            return "cell " + std::to_string(cell) + " root referenced " + std::to_string(count) +
                   " times";
        }
    }
    return std::nullopt;
}

std::string render_stats(const Stats& stats) {
    std::string out;
    out += "interactions=" + std::to_string(stats.interactions) + "\n";
    out += "agentAllocs=" + std::to_string(stats.agent_allocs) + "\n";
    out += "agentFrees=" + std::to_string(stats.agent_frees) + "\n";
    out += "agentReuses=" + std::to_string(stats.agent_reuses) + "\n";
    out += "varAllocs=" + std::to_string(stats.var_allocs) + "\n";
    out += "varFrees=" + std::to_string(stats.var_frees) + "\n";
    out += "portWrites=" + std::to_string(stats.port_writes) + "\n";
    out += "savedPortWrites=" + std::to_string(stats.saved_port_writes) + "\n";
    out += "peakLiveAgents=" + std::to_string(stats.peak_live_agents) + "\n";
    return out;
}

}  // namespace inet
