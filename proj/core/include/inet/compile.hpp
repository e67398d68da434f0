#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inet/ast.hpp"
#include "inet/classify.hpp"
#include "inet/validate.hpp"

namespace inet {

/// Instruction operands name either an active-pair cell (Left/Right) or a
/// cell allocated by this sequence, held in a port register.
struct CellId {
    enum class Kind { Left, Right, Reg };
    Kind kind = Kind::Left;
    int reg = -1;

    static CellId left() { return {Kind::Left, -1}; }
    static CellId right() { return {Kind::Right, -1}; }
    static CellId in_reg(int r) { return {Kind::Reg, r}; }
};

/// An endpoint-valued operand: a port register captured from the active pair,
/// or a port of a cell being built (port 0 addresses the cell root).
struct Operand {
    enum class Kind { Reg, Port };
    Kind kind = Kind::Reg;
    int reg = -1;
    CellId cell;
    int port = 0;

    static Operand in_reg(int r) { return {Kind::Reg, r, {}, 0}; }
    static Operand at(CellId c, int p) { return {Kind::Port, -1, c, p}; }
};

struct AttrOperand {
    bool is_reg = false;
    int reg = -1;
    std::int64_t literal = 0;

    static AttrOperand lit(std::int64_t v) { return {false, -1, v}; }
    static AttrOperand in_reg(int r) { return {true, r, 0}; }
};

/// The rule instruction set.
///
///   LoadPort reg <- side.port   capture the peer held in an aux port
///   LoadAttr reg <- side        capture an attribute value
///   Reuse side sym              repurpose an active-pair cell in place,
///                               rewriting the symbol field iff it differs
///   Alloc reg <- sym            take a fresh cell, root ref into reg
///   Free side                   release an active-pair cell not reused
///   SetPort cell.port <- opnd   write one port slot (statically known wiring)
///   SetAttr cell <- value
///   Connect a b                 join two endpoints whose kinds are only known
///                               at run time; pushes an equation when both are
///                               roots, writes port slots otherwise
///   PushEq a b                  push an equation (both endpoints are roots)
enum class Opcode { LoadPort, LoadAttr, Reuse, Alloc, Free, SetPort, SetAttr, Connect, PushEq };

struct Instruction {
    Opcode op = Opcode::LoadPort;
    int dst = -1;           // LoadPort/LoadAttr/Alloc destination register
    ReuseSide side = ReuseSide::Left;  // LoadPort/LoadAttr/Reuse/Free
    int port = 0;           // LoadPort/SetPort
    SymbolId sym = kNoSymbol;  // Reuse/Alloc
    CellId cell;            // SetPort/SetAttr target
    Operand a;              // SetPort value; Connect/PushEq first endpoint
    Operand b;              // Connect/PushEq second endpoint
    AttrOperand attr;       // SetAttr value
};

/// Static cost of firing a rule once. port_writes counts SetPort and SetAttr
/// executions; saved_port_writes counts the writes elided because a reused
/// cell already holds the wanted port or attribute value.
struct CostReport {
    int allocs = 0;
    int frees = 0;
    int reuses = 0;
    int port_writes = 0;
    int saved_port_writes = 0;
    int symbol_writes = 0;
};

struct CompiledGuard {
    struct Opnd {
        bool is_literal = false;
        std::int64_t literal = 0;
        ReuseSide side = ReuseSide::Left;  // attribute of this active-pair cell
    };
    CmpOp op = CmpOp::Lt;
    Opnd lhs;
    Opnd rhs;
};

struct CompiledRule {
    SymbolId left_sym = kNoSymbol;
    SymbolId right_sym = kNoSymbol;
    std::optional<CompiledGuard> guard;
    std::vector<Instruction> code;
    int port_regs = 0;
    int attr_regs = 0;
    CostReport cost;
    Classification classification;
    std::string display;  // e.g. "Add><S"
};

/// Compiles one annotated (or deliberately unannotated) rule into a straight
/// instruction sequence plus its static cost report. Unannotated agents are
/// freshly allocated; unreused active-pair cells are freed.
CompiledRule compile_rule(const Rule& rule, const SymbolTable& symbols, int port_capacity);

/// Stable one-instruction-per-line listing for golden tests.
std::string render_instructions(const CompiledRule& rule, const SymbolTable& symbols);

struct CompiledProgram {
    SymbolTable symbols;
    int port_capacity = 4;
    std::vector<CompiledRule> rules;  // declaration order

    /// Indices of the rule variants for an unordered symbol pair, in
    /// declaration order; empty when no rule exists.
    std::span<const std::size_t> find(SymbolId a, SymbolId b) const;

    std::map<std::pair<SymbolId, SymbolId>, std::vector<std::size_t>> index;
};

CompiledProgram compile_program(const CheckedProgram& checked);

struct CostTable {
    struct Row {
        std::string display;
        RuleCase rule_case = RuleCase::Case2;
        CostReport cost;
    };
    std::vector<Row> rows;
    CostReport total;
};

/// Per-rule cost table with a totals row, keyed by rule pair.
CostTable estimate_program(const CompiledProgram& program);

}  // namespace inet
