#include "inet/compile.hpp"

#include <algorithm>
#include <functional>

#include "inet/path.hpp"

namespace inet {

namespace {

// One agent occurrence in the rule RHS, with the cell that will hold it.
struct Occurrence {
    const Term* term = nullptr;
    SymbolId eff_sym = kNoSymbol;
    bool reused = false;
    ReuseSide reuse_side = ReuseSide::Left;
    CellId cell;  // reg field filled in once allocs are assigned
};

// Where a name occurrence sits.
struct NameOcc {
    enum class Kind { LhsPort, ArgSlot, EqSide };
    Kind kind = Kind::LhsPort;
    ReuseSide side = ReuseSide::Left;  // LhsPort
    int port = 0;                      // LhsPort/ArgSlot (1-based)
    int occ = -1;                      // ArgSlot: occurrence index
};

struct NameInfo {
    std::vector<NameOcc> occs;
    std::size_t first_seen = 0;
    bool saved = false;
};

// A concrete wire endpoint once equation-side indirection is resolved.
struct Endpoint {
    enum class Kind { Captured, BuiltPort, BuiltRoot };
    Kind kind = Kind::Captured;
    int reg = -1;   // Captured
    int occ = -1;   // BuiltPort/BuiltRoot
    int port = 0;   // BuiltPort
};

class RuleCompiler {
public:
    RuleCompiler(const Rule& rule, const SymbolTable& symbols, int capacity)
        : rule_(rule), symbols_(symbols), capacity_(capacity) {}

    CompiledRule run() {
        out_.left_sym = rule_.left.sym;
        out_.right_sym = rule_.right.sym;
        out_.display = symbols_.name(rule_.left.sym) + "><" + symbols_.name(rule_.right.sym);
        out_.classification = classify_rule(rule_);
        check_capacity();
        compile_guard();
        collect_occurrences();
        collect_names();
        detect_saved();
        emit_loads();
        emit_cells();
        emit_builds();
        emit_wires();
        emit_equations();
        out_.port_regs = next_port_reg_;
        out_.attr_regs = next_attr_reg_;
        out_.cost.reuses = static_cast<int>(std::count_if(
            occs_.begin(), occs_.end(), [](const Occurrence& o) { return o.reused; }));
        out_.cost.allocs = static_cast<int>(occs_.size()) - out_.cost.reuses;
        out_.cost.frees = 2 - out_.cost.reuses;
        return std::move(out_);
    }

private:
    void check_capacity() {
        auto check = [&](SymbolId sym) {
            if (symbols_.arity(sym) > capacity_) {
                throw LoadError("symbol " + symbols_.name(sym) + " exceeds port capacity " +
                                    std::to_string(capacity_),
                                rule_.pos);
            }
        };
        check(rule_.left.sym);
        check(rule_.right.sym);
        for_each_subterm(rule_.rhs, [&](const Term& t, const TermPath&) {
            if (t.kind == Term::Kind::Agent) check(t.sym);
        });
    }

    void compile_guard() {
        if (!rule_.guard) return;
        auto opnd = [&](const AttrExpr& e) {
            CompiledGuard::Opnd o;
            if (e.is_literal()) {
                o.is_literal = true;
                o.literal = e.value;
            } else {
                o.side = rule_.left.attr_var == e.var ? ReuseSide::Left : ReuseSide::Right;
            }
            return o;
        };
        out_.guard = CompiledGuard{rule_.guard->op, opnd(rule_.guard->lhs), opnd(rule_.guard->rhs)};
    }

    SymbolId effective_symbol(const Term& t) const {
        if (t.kind == Term::Kind::Agent) return t.sym;
        if (t.has_cast) return t.sym;
        return t.reuse == ReuseSide::Left ? rule_.left.sym : rule_.right.sym;
    }

    void collect_occurrences() {
        for_each_subterm(rule_.rhs, [&](const Term& t, const TermPath&) {
            if (!t.is_agent_like()) return;
            Occurrence occ;
            occ.term = &t;
            occ.eff_sym = effective_symbol(t);
            if (t.kind == Term::Kind::Annotated) {
                occ.reused = true;
                occ.reuse_side = t.reuse;
                occ.cell = t.reuse == ReuseSide::Left ? CellId::left() : CellId::right();
            }
            term_occ_[&t] = static_cast<int>(occs_.size());
            occs_.push_back(occ);
        });
    }

    void note_name(const std::string& name, NameOcc occ) {
        NameInfo& info = names_[name];
        if (info.occs.empty()) info.first_seen = seen_counter_;
        ++seen_counter_;
        info.occs.push_back(occ);
        if (name_order_.empty() || std::find(name_order_.begin(), name_order_.end(), name) ==
                                       name_order_.end()) {
            name_order_.push_back(name);
        }
    }

    void collect_names() {
        for (int p = 0; p < static_cast<int>(rule_.left.params.size()); ++p) {
            note_name(rule_.left.params[static_cast<std::size_t>(p)],
                      NameOcc{NameOcc::Kind::LhsPort, ReuseSide::Left, p + 1, -1});
        }
        for (int p = 0; p < static_cast<int>(rule_.right.params.size()); ++p) {
            note_name(rule_.right.params[static_cast<std::size_t>(p)],
                      NameOcc{NameOcc::Kind::LhsPort, ReuseSide::Right, p + 1, -1});
        }
        for_each_subterm(rule_.rhs, [&](const Term& t, const TermPath& path) {
            if (!t.is_name()) return;
            if (path.args.empty()) {
                note_name(t.name, NameOcc{NameOcc::Kind::EqSide, ReuseSide::Left, 0, -1});
            } else {
                // The enclosing occurrence is the parent term of this leaf.
                const Term* parent = &path_resolve(rule_.rhs, parent_path(path));
                note_name(t.name, NameOcc{NameOcc::Kind::ArgSlot, ReuseSide::Left,
                                          path.args.back(), term_occ_.at(parent)});
            }
        });
    }

    static TermPath parent_path(const TermPath& path) {
        TermPath p = path;
        p.args.pop_back();
        return p;
    }

    void detect_saved() {
        for (auto& [name, info] : names_) {
            if (info.occs.size() != 2) continue;
            const NameOcc* lhs = nullptr;
            const NameOcc* arg = nullptr;
            for (const NameOcc& o : info.occs) {
                if (o.kind == NameOcc::Kind::LhsPort) lhs = &o;
                if (o.kind == NameOcc::Kind::ArgSlot) arg = &o;
            }
            if (!lhs || !arg) continue;
            const Occurrence& occ = occs_[static_cast<std::size_t>(arg->occ)];
            if (occ.reused && occ.reuse_side == lhs->side && arg->port == lhs->port) {
                info.saved = true;
                ++out_.cost.saved_port_writes;
            }
        }
    }

    int port_reg() { return next_port_reg_++; }

    void emit(Instruction in) { out_.code.push_back(in); }

    void emit_loads() {
        // Capture every live LHS port before anything overwrites the cells,
        // left side first, ports ascending.
        for (ReuseSide side : {ReuseSide::Left, ReuseSide::Right}) {
            const RulePattern& pat = side == ReuseSide::Left ? rule_.left : rule_.right;
            for (int p = 1; p <= static_cast<int>(pat.params.size()); ++p) {
                const std::string& name = pat.params[static_cast<std::size_t>(p - 1)];
                const NameInfo& info = names_.at(name);
                if (info.saved) continue;
                int reg = port_reg();
                captured_[{side, p}] = reg;
                Instruction in;
                in.op = Opcode::LoadPort;
                in.dst = reg;
                in.side = side;
                in.port = p;
                emit(in);
            }
        }
        // Attribute captures, only for variables some SetAttr will consume.
        for (ReuseSide side : {ReuseSide::Left, ReuseSide::Right}) {
            const RulePattern& pat = side == ReuseSide::Left ? rule_.left : rule_.right;
            if (!pat.attr_var || !attr_var_needed(*pat.attr_var)) continue;
            int reg = next_attr_reg_++;
            attr_reg_[{side, 0}] = reg;
            Instruction in;
            in.op = Opcode::LoadAttr;
            in.dst = reg;
            in.side = side;
            emit(in);
        }
    }

    bool setattr_elided(const Occurrence& occ) const {
        if (!occ.reused || !occ.term->attr) return false;
        const AttrExpr& e = *occ.term->attr;
        if (e.is_literal()) return false;
        const RulePattern& pat = occ.reuse_side == ReuseSide::Left ? rule_.left : rule_.right;
        return pat.attr_var && *pat.attr_var == e.var;
    }

    bool attr_var_needed(const std::string& var) const {
        for (const Occurrence& occ : occs_) {
            if (symbols_.attr_count(occ.eff_sym) == 0 || !occ.term->attr) continue;
            const AttrExpr& e = *occ.term->attr;
            if (e.is_literal() || e.var != var) continue;
            if (!setattr_elided(occ)) return true;
        }
        return false;
    }

    void emit_cells() {
        for (const Occurrence& occ : occs_) {
            if (!occ.reused) continue;
            Instruction in;
            in.op = Opcode::Reuse;
            in.side = occ.reuse_side;
            in.sym = occ.eff_sym;
            emit(in);
            SymbolId old = occ.reuse_side == ReuseSide::Left ? rule_.left.sym : rule_.right.sym;
            if (old != occ.eff_sym) ++out_.cost.symbol_writes;
        }
        for (Occurrence& occ : occs_) {
            if (occ.reused) continue;
            int reg = port_reg();
            occ.cell = CellId::in_reg(reg);
            Instruction in;
            in.op = Opcode::Alloc;
            in.dst = reg;
            in.sym = occ.eff_sym;
            emit(in);
        }
        bool left_reused = false;
        bool right_reused = false;
        for (const Occurrence& occ : occs_) {
            if (!occ.reused) continue;
            (occ.reuse_side == ReuseSide::Left ? left_reused : right_reused) = true;
        }
        if (!left_reused) {
            Instruction in;
            in.op = Opcode::Free;
            in.side = ReuseSide::Left;
            emit(in);
        }
        if (!right_reused) {
            Instruction in;
            in.op = Opcode::Free;
            in.side = ReuseSide::Right;
            emit(in);
        }
    }

    void emit_builds() {
        for (std::size_t i = 0; i < occs_.size(); ++i) {
            const Occurrence& occ = occs_[i];
            emit_attr(occ);
            for (int p = 1; p <= static_cast<int>(occ.term->args.size()); ++p) {
                const Term& arg = *occ.term->args[static_cast<std::size_t>(p - 1)];
                if (!arg.is_agent_like()) continue;
                int child = term_occ_.at(&arg);
                Instruction in;
                in.op = Opcode::SetPort;
                in.cell = occ.cell;
                in.port = p;
                in.a = Operand::at(occs_[static_cast<std::size_t>(child)].cell, 0);
                emit(in);
                ++out_.cost.port_writes;
            }
        }
    }

    void emit_attr(const Occurrence& occ) {
        if (symbols_.attr_count(occ.eff_sym) == 0) return;
        if (setattr_elided(occ)) {
            ++out_.cost.saved_port_writes;
            return;
        }
        const AttrExpr& e = *occ.term->attr;
        Instruction in;
        in.op = Opcode::SetAttr;
        in.cell = occ.cell;
        if (e.is_literal()) {
            in.attr = AttrOperand::lit(e.value);
        } else {
            ReuseSide side = rule_.left.attr_var == e.var ? ReuseSide::Left : ReuseSide::Right;
            in.attr = AttrOperand::in_reg(attr_reg_.at({side, 0}));
        }
        emit(in);
        ++out_.cost.port_writes;
    }

    Endpoint name_occ_endpoint(const NameOcc& o) const {
        if (o.kind == NameOcc::Kind::LhsPort) {
            return Endpoint{Endpoint::Kind::Captured, captured_.at({o.side, o.port}), -1, 0};
        }
        return Endpoint{Endpoint::Kind::BuiltPort, -1, o.occ, o.port};
    }

    Operand endpoint_operand(const Endpoint& e) const {
        switch (e.kind) {
            case Endpoint::Kind::Captured:
                return Operand::in_reg(e.reg);
            case Endpoint::Kind::BuiltPort:
                return Operand::at(occs_[static_cast<std::size_t>(e.occ)].cell, e.port);
            case Endpoint::Kind::BuiltRoot:
                return Operand::at(occs_[static_cast<std::size_t>(e.occ)].cell, 0);
        }
        return {};
    }

    // Resolves every wire to its two concrete endpoints, then joins them.
    // Bare-name equation sides only relay a wire from one group to another.
    void emit_wires() {
        std::map<std::string, std::string> parent;
        std::function<std::string(const std::string&)> find = [&](const std::string& x) {
            auto it = parent.find(x);
            if (it == parent.end() || it->second == x) return x;
            return it->second = find(it->second);
        };
        std::map<std::string, std::vector<Endpoint>> endpoints;
        std::map<std::string, std::size_t> order;
        for (const std::string& name : name_order_) {
            const NameInfo& info = names_.at(name);
            if (info.saved) continue;
            parent.emplace(name, name);
            order[name] = info.first_seen;
            for (const NameOcc& o : info.occs) {
                if (o.kind == NameOcc::Kind::EqSide) continue;
                endpoints[name].push_back(name_occ_endpoint(o));
            }
        }
        for (std::size_t e = 0; e < rule_.rhs.size(); ++e) {
            const Equation& eq = rule_.rhs[e];
            const bool l_name = eq.left->is_name();
            const bool r_name = eq.right->is_name();
            if (l_name && r_name) {
                std::string a = find(eq.left->name);
                std::string b = find(eq.right->name);
                if (a == b) {
                    throw LoadError("equation closes a wire loop", rule_.pos);
                }
                parent[a] = b;
                auto& va = endpoints[a];
                auto& vb = endpoints[b];
                vb.insert(vb.begin(), va.begin(), va.end());
                order[b] = std::min(order[b], order[a]);
                endpoints.erase(a);
                order.erase(a);
            } else if (l_name || r_name) {
                const std::string& n = l_name ? eq.left->name : eq.right->name;
                const Term& other = l_name ? *eq.right : *eq.left;
                endpoints[find(n)].push_back(
                    Endpoint{Endpoint::Kind::BuiltRoot, -1, term_occ_.at(&other), 0});
            }
        }

        std::vector<std::pair<std::size_t, std::string>> groups;
        for (const auto& [name, eps] : endpoints) {
            groups.emplace_back(order.at(name), name);
        }
        std::sort(groups.begin(), groups.end());
        for (const auto& [ord, name] : groups) {
            const std::vector<Endpoint>& eps = endpoints.at(name);
            if (eps.size() != 2) {
                throw LoadError("wire " + name + " does not have two endpoints", rule_.pos);
            }
            emit_join(eps[0], eps[1]);
        }
    }

    void emit_join(const Endpoint& a, const Endpoint& b) {
        const bool a_port = a.kind == Endpoint::Kind::BuiltPort;
        const bool b_port = b.kind == Endpoint::Kind::BuiltPort;
        const bool a_root = a.kind == Endpoint::Kind::BuiltRoot;
        const bool b_root = b.kind == Endpoint::Kind::BuiltRoot;
        if (a_port && b_port) {
            // A wire between two ports being built: write both halves.
            Instruction in;
            in.op = Opcode::SetPort;
            in.cell = occs_[static_cast<std::size_t>(a.occ)].cell;
            in.port = a.port;
            in.a = endpoint_operand(b);
            emit(in);
            in.cell = occs_[static_cast<std::size_t>(b.occ)].cell;
            in.port = b.port;
            in.a = endpoint_operand(a);
            emit(in);
            out_.cost.port_writes += 2;
            return;
        }
        if (a_port || b_port) {
            const Endpoint& port = a_port ? a : b;
            const Endpoint& other = a_port ? b : a;
            if (other.kind == Endpoint::Kind::BuiltRoot) {
                Instruction in;
                in.op = Opcode::SetPort;
                in.cell = occs_[static_cast<std::size_t>(port.occ)].cell;
                in.port = port.port;
                in.a = endpoint_operand(other);
                emit(in);
                ++out_.cost.port_writes;
                return;
            }
            Instruction in;
            in.op = Opcode::Connect;
            in.a = endpoint_operand(port);
            in.b = endpoint_operand(other);
            emit(in);
            return;
        }
        if (a_root && b_root) {
            Instruction in;
            in.op = Opcode::PushEq;
            in.a = endpoint_operand(a);
            in.b = endpoint_operand(b);
            emit(in);
            return;
        }
        Instruction in;
        in.op = Opcode::Connect;
        in.a = endpoint_operand(a);
        in.b = endpoint_operand(b);
        emit(in);
    }

    void emit_equations() {
        for (const Equation& eq : rule_.rhs) {
            if (eq.left->is_name() || eq.right->is_name()) continue;
            Instruction in;
            in.op = Opcode::PushEq;
            in.a = Operand::at(occs_[static_cast<std::size_t>(term_occ_.at(eq.left.get()))].cell, 0);
            in.b = Operand::at(occs_[static_cast<std::size_t>(term_occ_.at(eq.right.get()))].cell, 0);
            emit(in);
        }
    }

    const Rule& rule_;
    const SymbolTable& symbols_;
    int capacity_;

    CompiledRule out_;
    std::vector<Occurrence> occs_;
    std::map<const Term*, int> term_occ_;
    std::map<std::string, NameInfo> names_;
    std::vector<std::string> name_order_;
    std::size_t seen_counter_ = 0;
    std::map<std::pair<ReuseSide, int>, int> captured_;
    std::map<std::pair<ReuseSide, int>, int> attr_reg_;
    int next_port_reg_ = 0;
    int next_attr_reg_ = 0;
};

std::string cell_text(const CellId& c) {
    switch (c.kind) {
        case CellId::Kind::Left: return "L";
        case CellId::Kind::Right: return "R";
        case CellId::Kind::Reg: return "r" + std::to_string(c.reg);
    }
    return "?";
}

std::string operand_text(const Operand& o) {
    if (o.kind == Operand::Kind::Reg) return "r" + std::to_string(o.reg);
    return cell_text(o.cell) + "." + std::to_string(o.port);
}

}  // namespace

CompiledRule compile_rule(const Rule& rule, const SymbolTable& symbols, int port_capacity) {
    return RuleCompiler(rule, symbols, port_capacity).run();
}

std::string render_instructions(const CompiledRule& rule, const SymbolTable& symbols) {
    std::string out;
    for (const Instruction& in : rule.code) {
        switch (in.op) {
            case Opcode::LoadPort:
                out += "loadport r" + std::to_string(in.dst) + " " + to_string(in.side) + "." +
                       std::to_string(in.port);
                break;
            case Opcode::LoadAttr:
                out += "loadattr a" + std::to_string(in.dst) + " " + to_string(in.side);
                break;
            case Opcode::Reuse:
                out += std::string("reuse ") + to_string(in.side) + " " + symbols.name(in.sym);
                break;
            case Opcode::Alloc:
                out += "alloc r" + std::to_string(in.dst) + " " + symbols.name(in.sym);
                break;
            case Opcode::Free:
                out += std::string("free ") + to_string(in.side);
                break;
            case Opcode::SetPort:
                out += "setport " + cell_text(in.cell) + "." + std::to_string(in.port) + " " +
                       operand_text(in.a);
                break;
            case Opcode::SetAttr:
                out += "setattr " + cell_text(in.cell) + " " +
                       (in.attr.is_reg ? "a" + std::to_string(in.attr.reg)
                                       : std::to_string(in.attr.literal));
                break;
            case Opcode::Connect:
                out += "connect " + operand_text(in.a) + " " + operand_text(in.b);
                break;
            case Opcode::PushEq:
                out += "pusheq " + operand_text(in.a) + " " + operand_text(in.b);
                break;
        }
        out += '\n';
    }
    return out;
}

std::span<const std::size_t> CompiledProgram::find(SymbolId a, SymbolId b) const {
    auto key = std::minmax(a, b);
    auto it = index.find({key.first, key.second});
    if (it == index.end()) return {};
    return it->second;
}

CompiledProgram compile_program(const CheckedProgram& checked) {
    CompiledProgram out;
    out.symbols = checked.program.symbols;
    out.port_capacity = checked.options.port_capacity;
    for (const Rule& rule : checked.program.rules) {
        CompiledRule compiled = compile_rule(rule, out.symbols, out.port_capacity);
        auto key = std::minmax(rule.left.sym, rule.right.sym);
        out.index[{key.first, key.second}].push_back(out.rules.size());
        out.rules.push_back(std::move(compiled));
    }
    return out;
}

CostTable estimate_program(const CompiledProgram& program) {
    CostTable table;
    for (const CompiledRule& rule : program.rules) {
        table.rows.push_back(CostTable::Row{rule.display, rule.classification.rule_case, rule.cost});
        table.total.allocs += rule.cost.allocs;
        table.total.frees += rule.cost.frees;
        table.total.reuses += rule.cost.reuses;
        table.total.port_writes += rule.cost.port_writes;
        table.total.saved_port_writes += rule.cost.saved_port_writes;
        table.total.symbol_writes += rule.cost.symbol_writes;
    }
    return table;
}

}  // namespace inet
